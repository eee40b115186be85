from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given, strategies as st

import oracles
from parcon.curve import (
    ClosedPlace,
    CurveModel,
    CurvePoint,
    DifferentialForm,
    Divisor,
    canonical_divisor,
    poles,
    principal_divisor,
    residue,
    valuation,
)
from parcon.exact import Poly

F = (1, -1, 0, 0, 0, 1)
C = CurveModel(F)
X, Y = C.x, C.y
INF = CurvePoint.infinity(0)
RATIONAL = [C.point(0, 1), C.point(0, -1), C.point(1, 1), C.point(1, -1), C.point(-1, 1), C.point(-1, -1), INF]
ORACLE_KEY = {P: (("inf",) if P.is_infinite else (int(P.x), int(P.y))) for P in RATIONAL}

small = st.integers(-4, 4)
coeffs = st.lists(small, min_size=1, max_size=4)


@st.composite
def elements(draw, with_poles=True):
    a = Poly(draw(coeffs))
    b = Poly(draw(coeffs))
    assume(not (a.is_zero() and b.is_zero()))
    e = C.element(a, b)
    if with_poles:
        for x0 in draw(st.lists(st.sampled_from([0, 1, -1, 2, Fraction(1, 2)]), max_size=3)):
            e = e / (X - x0)
    return e


def to_sympy(e):
    return (sp.Poly(list(reversed([oracles.sym(c) for c in e.A.coeffs])) or [0], oracles.x).as_expr()
            + sp.Poly(list(reversed([oracles.sym(c) for c in e.B.coeffs])) or [0], oracles.x).as_expr() * oracles.y) / \
        sp.Poly(list(reversed([oracles.sym(c) for c in e.C.coeffs])), oracles.x).as_expr()


def test_curve_invariants():
    assert C.genus == 2 and len(C.infinity_points) == 1
    assert all(C.contains(P) for P in RATIONAL)
    with pytest.raises(ValueError):
        CurveModel([0, 0, 1, 0, 0, 1])  # x^2 (x^3 + 1) is not squarefree
    even = CurveModel([1, 1, 0, 0, 0, 0, 1])
    assert even.genus == 2 and len(even.infinity_points) == 2


def test_valuation_examples():
    P = C.point(0, 1)
    assert valuation(X, P) == 1
    assert valuation(Y - 1, P) == 1
    assert valuation(X, INF) == -2
    assert valuation(C.zero(), P) == float("inf")


def test_valuation_oracle_examples():
    # (y - 1)(y + 1) = x^5 - x and y + 1 = 2 at (0, 1)
    assert oracles.valuation(oracles.y - 1, F, (0, 1)) == 1
    assert oracles.valuation(oracles.x, F, ("inf",)) == -2


def test_principal_divisor_examples():
    assert principal_divisor(C.one() * 5) == Divisor()
    assert principal_divisor(X) == Divisor({C.point(0, 1): 1, C.point(0, -1): 1, INF: -2})
    dy = principal_divisor(Y)
    (W, m), = [(P, k) for P, k in dy.items() if not P == INF]
    assert isinstance(W, ClosedPlace) and W.degree == 5 and m == 1 and dy[INF] == -5
    assert dy.degree == 0


def test_principal_divisor_matches_oracle():
    e = (Y - 1) * (X - 1) / (X + 1) ** 2
    D = principal_divisor(e)
    for P in RATIONAL:
        assert D[P] == oracles.valuation(to_sympy(e), F, ORACLE_KEY[P])


def test_residue_examples():
    w = DifferentialForm(1 / X)
    assert residue(w, C.point(0, 1)) == 1
    assert residue(w, INF) == -2
    assert residue(C.dx, C.point(1, 1)) == 0
    assert residue(w, C.point(0, 1)) == oracles.residue(1 / oracles.x, F, (0, 1))
    assert residue(w, INF) == oracles.residue(1 / oracles.x, F, ("inf",))


def test_residue_with_y_against_oracle():
    h = (Y + X) / (X * (X - 1) ** 2)
    w = DifferentialForm(h)
    for P in RATIONAL:
        assert residue(w, P) == oracles.residue(to_sympy(h), F, ORACLE_KEY[P], order=4)


def test_canonical_divisor():
    K = canonical_divisor(C)
    assert K.degree == 2
    assert K[INF] == -3
    (W, m), = [(P, k) for P, k in K.items() if P != INF]
    assert W.degree == 5 and m == 1
    assert C.canonical_K0().degree == 2


def test_canonical_divisor_even_model():
    even = CurveModel([1, 1, 0, 0, 0, 0, 1])
    K = canonical_divisor(even)
    assert K.degree == 2
    assert all(K[P] == -2 for P in even.infinity_points)


def test_marked_point_kinds():
    assert not C.is_weierstrass(C.point(1, 1))
    assert C.is_weierstrass(INF)
    with pytest.raises(ValueError):
        C.point(2, 1)


@given(elements())
def test_principal_divisors_have_degree_zero(e):
    assert principal_divisor(e).degree == 0


@given(elements(), elements(), st.sampled_from(RATIONAL))
def test_valuation_is_discrete(e1, e2, P):
    v1, v2 = valuation(e1, P), valuation(e2, P)
    assert valuation(e1 * e2, P) == v1 + v2
    s = e1 + e2
    if not s.is_zero():
        vs = valuation(s, P)
        assert vs >= min(v1, v2)
        if v1 != v2:
            assert vs == min(v1, v2)


@given(elements())
def test_residue_theorem(h):
    w = DifferentialForm(h)
    assume(all(isinstance(P, CurvePoint) for P in poles(w)))
    assert sum((residue(w, P) for P in poles(w)), Fraction(0)) == 0


@given(elements(with_poles=False), st.sampled_from(RATIONAL[:-1]))
def test_function_value(e, P):
    assert e(P) == Fraction(e.a(P.x)) + Fraction(e.b(P.x)) * P.y
