"""Independent oracles built on sympy series expansions.

Nothing here calls into parcon's valuation, expansion or Riemann-Roch code;
elements are plain sympy expressions in x and y.
"""
from __future__ import annotations

import functools
from fractions import Fraction

import sympy as sp

x, y, t = sp.symbols("x y t")


def sym(q: Fraction):
    return sp.Rational(q.numerator, q.denominator)


@functools.lru_cache(maxsize=None)
def local_xy(f_coeffs: tuple, point: tuple, order: int):
    """(x(t), y(t)) truncated series at a rational point.

    ``point`` is (x0, y0) with y0 != 0, or ("inf",) for the single point at
    infinity of an odd model with leading coefficient 1.
    """
    f = sum(sp.Rational(c) * x**k for k, c in enumerate(f_coeffs))
    if point[0] == "inf":
        deg = len(f_coeffs) - 1
        X = t**-2
        # y = t^-deg * sqrt(t^(2 deg) f(t^-2))
        inner = sp.expand(t ** (2 * deg) * f.subs(x, X))
        Y = t**-deg * sp.series(sp.sqrt(inner), t, 0, order + deg + 2).removeO()
        return X, sp.expand(Y)
    x0, y0 = sp.Rational(point[0]), sp.Rational(point[1])
    X = x0 + t
    u = sp.expand(f.subs(x, X) / y0**2)
    Y = y0 * sp.series(sp.sqrt(u), t, 0, order + 2).removeO()
    return X, sp.expand(Y)


def _terms(e) -> dict:
    e = sp.expand(e)
    out = {}
    for term in sp.Add.make_args(e):
        c, k = term.as_coeff_exponent(t)
        out[int(k)] = out.get(int(k), 0) + c
    return {k: c for k, c in out.items() if c != 0}


def _divide(num: dict, den: dict, upto: int) -> dict:
    """Laurent quotient, exact for exponents below ``upto``."""
    d0 = min(den)
    lead = den[d0]
    out = {}
    rem = dict(num)
    while rem:
        k = min(rem)
        e = k - d0
        if e >= upto:
            break
        c = rem[k] / lead
        out[e] = c
        for j, dj in den.items():
            key = j + e
            v = rem.get(key, 0) - c * dj
            if v == 0:
                rem.pop(key, None)
            else:
                rem[key] = v
    return out


def laurent(expr, f_coeffs, point, order: int = 12, shift: int = 16):
    """Laurent polynomial of expr at the point, exact below t^order.

    ``shift`` bounds the pole orders that can occur in numerator and
    denominator; it only controls truncation.
    """
    X, Y = local_xy(tuple(f_coeffs), tuple(point), order + 2 * shift + 12)
    num, den = sp.fraction(sp.together(expr))
    N = _terms(num.subs({x: X, y: Y}))
    D = _terms(den.subs({x: X, y: Y}))
    q = _divide(N, D, order)
    return sum((c * t**k for k, c in q.items()), sp.Integer(0))


def valuation(expr, f_coeffs, point, order: int = 6) -> int:
    s = sp.expand(laurent(expr, f_coeffs, point, order))
    if s == 0:
        raise ValueError("series vanished to the requested order")
    return min(sp.Poly(sp.expand(s * t**64), t).monoms())[0] - 64


def residue(h_expr, f_coeffs, point, order: int = 8):
    """Residue of h dx at the point."""
    X, _ = local_xy(tuple(f_coeffs), tuple(point), order + 12)
    s = sp.expand(laurent(h_expr, f_coeffs, point, order) * sp.diff(X, t))
    return Fraction(str(s.coeff(t, -1)))


def rr_dimension(f_coeffs, divisor: dict, order_pad: int = 4) -> int:
    """dim L(D) by brute force over (a(x) + b(x) y) / q(x).

    ``divisor`` maps (x0, y0) or ("inf",) to multiplicities; odd model with
    monic f of degree 2g+1 only.
    """
    deg_f = len(f_coeffs) - 1
    affine = [P for P in divisor if P[0] != "inf"]
    xs = sorted({P[0] for P in affine})
    q = sp.Integer(1)
    qdeg = 0
    for x0 in xs:
        k = max([max(divisor.get((x0, s), 0), 0) for s in (1, -1)] +
                [max(divisor.get(P, 0), 0) for P in affine if P[0] == x0])
        q *= (x - sp.Rational(x0)) ** k
        qdeg += k
    dinf = divisor.get(("inf",), 0)
    top = 2 * qdeg + dinf
    if top < 0:
        return 0
    cands = [x**i / q for i in range(top // 2 + 1)]
    cands += [x**i * y / q for i in range((top - deg_f) // 2 + 1) if top - deg_f >= 0]
    if not cands:
        return 0
    # every point where a candidate may have a pole, or where D asks for a zero
    check = set(divisor)
    for x0 in xs:
        y0sq = sum(sp.Rational(c) * sp.Rational(x0) ** k for k, c in enumerate(f_coeffs))
        y0 = sp.sqrt(y0sq)
        if y0.is_rational and y0 != 0:
            check |= {(x0, int(y0) if y0.is_integer else str(y0)), (x0, int(-y0) if y0.is_integer else str(-y0))}
    check.add(("inf",))
    rows = []
    for P in check:
        need = -divisor.get(P, 0)
        low = -top - 2 * deg_f if P[0] == "inf" else -2 * qdeg - 2
        series = [laurent(c, f_coeffs, P, need + order_pad, shift=-low) for c in cands]
        for j in range(low, need):
            rows.append([s.coeff(t, j) for s in series])
    M = sp.Matrix(rows) if rows else sp.zeros(0, len(cands))
    return len(cands) - M.rank()
