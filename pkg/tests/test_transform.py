from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from parcon.parabolic import ExponentData, fuchs_check
from parcon.transform import LocalModel, elm_minus_exponents, elm_minus_local, elm_plus_exponents, twist_exponents

h = Fraction
pairs = st.lists(st.tuples(st.fractions(max_denominator=8), st.fractions(max_denominator=8)), min_size=1, max_size=4)


@st.composite
def exponent_data(draw):
    nu = draw(pairs)
    total = sum(a + b for a, b in nu)
    # fix the last exponent so the Fuchs relation holds for a random degree
    d = draw(st.integers(-6, 6))
    a, b = nu[-1]
    nu[-1] = (a, b - total - d)
    return ExponentData(tuple(nu), 1, d)


def test_elm_minus_examples():
    e = ExponentData(((0, -1),), 1, 1)
    r = elm_minus_exponents(e, 0)
    assert r.nu == ((0, 0),) and r.degree == 0
    e = ExponentData(((0, -1), (-1, -1)), 1, 3)
    r = elm_minus_exponents(e, 1)
    assert r.nu[0] == (0, -1) and r.nu[1] == (0, -1) and fuchs_check(r)


def test_elm_plus_example():
    r = elm_plus_exponents(ExponentData(((0, 0), (-1, -1)), 1, 2), 0)
    assert r.nu[0] == (0, -1) and r.degree == 3


def test_twist_example():
    r = twist_exponents(ExponentData(((h(1, 2), h(-3, 2)), (-1, -1)), 1, 3), 0)
    assert r.nu[0] == (h(-1, 2), h(-5, 2)) and r.degree == 5 and fuchs_check(r)


def test_lambda_must_be_one():
    with pytest.raises(ValueError):
        elm_minus_exponents(ExponentData(((0, 0),), 0, 5), 0)
    with pytest.raises(IndexError):
        elm_minus_exponents(ExponentData(((0, -1),), 1, 1), 3)


@given(exponent_data(), st.data())
def test_maps_preserve_fuchs(e, data):
    i = data.draw(st.integers(0, e.n - 1))
    assert fuchs_check(e)
    for op in (elm_minus_exponents, elm_plus_exponents, twist_exponents):
        assert fuchs_check(op(e, i))


@given(exponent_data(), st.data())
def test_inverse_pairs(e, data):
    i = data.draw(st.integers(0, e.n - 1))
    assert elm_plus_exponents(elm_minus_exponents(e, i), i) == e
    assert elm_minus_exponents(elm_plus_exponents(e, i), i) == e
    assert elm_plus_exponents(e, i) == elm_minus_exponents(twist_exponents(e, i), i)
    # two lower transformations shift both exponents up by one
    twice = elm_minus_exponents(elm_minus_exponents(e, i), i)
    p, m = e.nu[i]
    assert twice.nu[i] == (p + 1, m + 1) and twice.degree == e.degree - 2
    assert twist_exponents(twice, i) == e


@given(exponent_data(), st.data())
def test_other_points_untouched(e, data):
    i = data.draw(st.integers(0, e.n - 1))
    r = elm_minus_exponents(e, i)
    assert all(r.nu[j] == e.nu[j] for j in range(e.n) if j != i)


def spectrum_set(M):
    return {M[0][0], M[1][1]}


@given(st.fractions(max_denominator=6), st.fractions(max_denominator=6),
       st.lists(st.fractions(max_denominator=6), min_size=12, max_size=12))
def test_local_model(nu_p, nu_m, entries):
    it = iter(entries)
    star = next(it)
    terms = [((nu_m, 0), (star, nu_p))]
    for _ in range(2):
        terms.append(((next(it), next(it)), (next(it), next(it))))
    m = LocalModel(tuple(terms))
    out, nu = elm_minus_local(m, (nu_p, nu_m))
    R = out.residue_matrix
    assert R[0][1] == 0
    assert spectrum_set(R) == {nu_m + 1, nu_p}
    assert out.spectrum == nu == (nu_m + 1, nu_p)
    out2, nu2 = elm_minus_local(out, nu)
    assert nu2 == (nu_p + 1, nu_m + 1)
    e = ExponentData(((nu_p, nu_m),), 1, int(-(nu_p + nu_m)) if (nu_p + nu_m).denominator == 1 else 0)
    if fuchs_check(e):
        assert elm_minus_exponents(elm_minus_exponents(e, 0), 0).nu[0] == nu2


def test_local_model_rejects_mismatch():
    m = LocalModel((((1, 0), (0, 2)), ((0, 1), (0, 0))))
    with pytest.raises(ValueError):
        elm_minus_local(m, (1, 2))
    with pytest.raises(ValueError):
        LocalModel((((1, 1), (0, 2)),))
