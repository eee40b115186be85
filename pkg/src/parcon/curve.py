"""Hyperelliptic curves y^2 = f(x) over QQ.

Function field elements are stored as (A + B*y)/C with polynomials A, B, C
(C monic, gcd(A, B, C) = 1). Valuations are computed algebraically at every
place; Laurent expansions (and hence residues) are available at rational
points, which is all the cohomology layer ever needs.
"""
from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping

from .exact import (
    ONE,
    ZERO,
    Poly,
    RatFunc,
    is_squarefree,
    poly_gcd,
    poly_inverse_mod,
    scalar_str,
    to_scalar,
)
from .series import Series, sqrt_one_plus

INF_VALUATION = float("inf")


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = to_scalar(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    a, b = isqrt(n), isqrt(d)
    if a * a == n and b * b == d:
        return Fraction(a, b)
    return None


# ---------------------------------------------------------------------------
# points, places, divisors
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CurvePoint:
    """A rational point: affine (x, y) or the point at infinity number ``inf``."""

    inf: int | None = None
    x: Fraction | None = None
    y: Fraction | None = None

    @classmethod
    def affine(cls, x, y) -> "CurvePoint":
        return cls(None, to_scalar(x), to_scalar(y))

    @classmethod
    def infinity(cls, k: int = 0) -> "CurvePoint":
        return cls(k, None, None)

    @property
    def is_infinite(self) -> bool:
        return self.inf is not None

    @property
    def degree(self) -> int:
        return 1

    def sort_key(self):
        return (0, self.x, self.y, 0) if self.inf is None else (1, 0, 0, self.inf)

    def __str__(self):
        if self.inf is not None:
            return "inf" if self.inf == 0 else f"inf{self.inf}"
        return f"({scalar_str(self.x)},{scalar_str(self.y)})"


@dataclass(frozen=True)
class ClosedPlace:
    """A place of degree > 1 lying over the irreducible monic ``p``.

    kind is 'ramified' (p | f), 'inert' (f not a square mod p) or 'split'
    (y = s mod p for the stored residue ``s``).
    """

    p: Poly
    kind: str
    s: Poly | None = None

    @property
    def degree(self) -> int:
        return 2 * self.p.degree if self.kind == "inert" else self.p.degree

    @property
    def is_infinite(self) -> bool:
        return False

    def sort_key(self):
        return (2, self.p.degree, self.p.coeffs, self.kind, self.s.coeffs if self.s else ())

    def __str__(self):
        tag = {"ramified": "W", "inert": "I", "split": "S"}[self.kind]
        extra = f", y={self.s}" if self.s is not None else ""
        return f"{tag}[{self.p}{extra}]"


Place = CurvePoint | ClosedPlace


class Divisor:
    """Finite Z-combination of places."""

    __slots__ = ("_items", "_hash")

    def __init__(self, items: Mapping | Iterable = ()):
        d: dict = {}
        pairs = items.items() if isinstance(items, Mapping) else items
        for P, m in pairs:
            m = int(m)
            if m:
                d[P] = d.get(P, 0) + m
                if d[P] == 0:
                    del d[P]
        self._items = dict(sorted(d.items(), key=lambda kv: kv[0].sort_key()))
        self._hash = None

    @classmethod
    def point(cls, P, m: int = 1) -> "Divisor":
        return cls({P: m})

    def __getitem__(self, P) -> int:
        return self._items.get(P, 0)

    def items(self):
        return self._items.items()

    @property
    def support(self) -> list:
        return list(self._items)

    @property
    def degree(self) -> int:
        return sum(P.degree * m for P, m in self._items.items())

    def is_zero(self) -> bool:
        return not self._items

    def is_effective(self) -> bool:
        return all(m >= 0 for m in self._items.values())

    def is_rational(self) -> bool:
        return all(isinstance(P, CurvePoint) for P in self._items)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self.items()) + list(other.items()))

    def __neg__(self):
        return Divisor({P: -m for P, m in self.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor({P: k * m for P, m in self.items()})

    def restrict(self, keep) -> "Divisor":
        return Divisor({P: m for P, m in self.items() if keep(P)})

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._items.items()))
        return self._hash

    def __repr__(self):
        if not self._items:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{m}*{P}" for P, m in self._items.items()) + ")"


# ---------------------------------------------------------------------------
# the curve
# ---------------------------------------------------------------------------

class CurveModel:
    """Smooth hyperelliptic model y^2 = f(x) with f squarefree."""

    def __init__(self, f: Poly | Iterable):
        f = f if isinstance(f, Poly) else Poly(f)
        if f.degree < 3:
            raise ValueError("need deg f >= 3 (genus >= 1)")
        if not is_squarefree(f):
            raise ValueError(f"f = {f} is not squarefree")
        self.f = f
        self.genus = (f.degree - 1) // 2
        self.odd = f.degree % 2 == 1
        if not self.odd:
            s = rational_sqrt(f.lc())
            if s is None:
                raise NotImplementedError("even-degree models need a square leading coefficient")
            self._inf_sqrt = s
        self.df = f.derivative()
        self._lock = threading.Lock()
        self._local: dict = {}

    def __repr__(self):
        return f"CurveModel(y^2 = {self.f})"

    def __eq__(self, other):
        return isinstance(other, CurveModel) and self.f == other.f

    def __hash__(self):
        return hash(("CurveModel", self.f))

    @property
    def infinity_points(self) -> list[CurvePoint]:
        return [CurvePoint.infinity(0)] if self.odd else [CurvePoint.infinity(0), CurvePoint.infinity(1)]

    @property
    def infinity_divisor(self) -> Divisor:
        return Divisor({P: 1 for P in self.infinity_points})

    def is_weierstrass(self, P: CurvePoint) -> bool:
        if P.is_infinite:
            return self.odd
        return P.y == 0

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinite:
            return P.inf in (0,) if self.odd else P.inf in (0, 1)
        return P.y * P.y == self.f(P.x)

    def points_over(self, x0) -> list[CurvePoint]:
        """Rational points with the given x-coordinate."""
        x0 = to_scalar(x0)
        v = self.f(x0)
        if v == 0:
            return [CurvePoint.affine(x0, 0)]
        s = rational_sqrt(v)
        if s is None:
            return []
        return [CurvePoint.affine(x0, s), CurvePoint.affine(x0, -s)]

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint.affine(x, y)
        if not self.contains(P):
            raise ValueError(f"{P} is not on {self}")
        return P

    def canonical_K0(self) -> Divisor:
        """div(dx/y), supported at infinity; Omega^1 = O(K0) * dx/y."""
        if self.odd:
            return Divisor({CurvePoint.infinity(0): 2 * self.genus - 2})
        return Divisor({CurvePoint.infinity(0): self.genus - 1, CurvePoint.infinity(1): self.genus - 1})

    # element constructors -------------------------------------------------
    def element(self, a=0, b=0) -> "FunctionFieldElement":
        return FunctionFieldElement.from_parts(self, a, b)

    @property
    def x(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, Poly.x(), Poly(), Poly.const(1))

    @property
    def y(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, Poly(), Poly.const(1), Poly.const(1))

    def one(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, Poly.const(1), Poly(), Poly.const(1))

    def zero(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, Poly(), Poly(), Poly.const(1))

    @property
    def dx(self) -> "DifferentialForm":
        return DifferentialForm(self.one())

    def omega0(self) -> "DifferentialForm":
        """The form dx/y."""
        return DifferentialForm(self.y.inverse())

    def local(self, P: CurvePoint) -> "LocalExpansion":
        with self._lock:
            loc = self._local.get(P)
            if loc is None:
                loc = LocalExpansion(self, P)
                self._local[P] = loc
        return loc


# ---------------------------------------------------------------------------
# function field
# ---------------------------------------------------------------------------

def _gcd3(a: Poly, b: Poly, c: Poly) -> Poly:
    if c.degree <= 0:
        return Poly.const(1)
    g = poly_gcd(c, a) if not a.is_zero() else c.monic()
    if g.degree <= 0:
        return g
    return poly_gcd(g, b) if not b.is_zero() else g


class FunctionFieldElement:
    """(A + B y) / C in QQ(x)[y]/(y^2 - f)."""

    __slots__ = ("curve", "A", "B", "C", "_hash")

    def __init__(self, curve: CurveModel, A: Poly, B: Poly, C: Poly, _normalized: bool = False):
        if C.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if A.is_zero() and B.is_zero():
                C = Poly.const(1)
            else:
                g = _gcd3(A, B, C)
                if g.degree > 0:
                    A, B, C = A // g, B // g, C // g
                lc = C.lc()
                if lc != 1:
                    inv = 1 / lc
                    A, B, C = A * inv, B * inv, C * inv
        self.curve = curve
        self.A, self.B, self.C = A, B, C
        self._hash = None

    @classmethod
    def from_parts(cls, curve: CurveModel, a, b) -> "FunctionFieldElement":
        a = a if isinstance(a, RatFunc) else RatFunc(a if isinstance(a, Poly) else Poly.const(a))
        b = b if isinstance(b, RatFunc) else RatFunc(b if isinstance(b, Poly) else Poly.const(b))
        g = poly_gcd(a.den, b.den)
        C = (a.den // g) * b.den
        return cls(curve, a.num * (C // a.den), b.num * (C // b.den), C)

    @property
    def a(self) -> RatFunc:
        return RatFunc(self.A, self.C)

    @property
    def b(self) -> RatFunc:
        return RatFunc(self.B, self.C)

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero()

    def __eq__(self, other):
        if isinstance(other, FunctionFieldElement):
            return self.A == other.A and self.B == other.B and self.C == other.C
        if isinstance(other, (int, Fraction)):
            return self == self.curve.element(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.A, self.B, self.C))
        return self._hash

    def __repr__(self):
        num = str(self.A) if self.B.is_zero() else (f"({self.B})*y" if self.A.is_zero() else f"{self.A} + ({self.B})*y")
        if self.C.degree == 0:
            return f"<{num}>"
        return f"<({num})/({self.C})>"

    def _lift(self, o) -> "FunctionFieldElement":
        if isinstance(o, FunctionFieldElement):
            if o.curve is not self.curve and o.curve != self.curve:
                raise ValueError("elements live on different curves")
            return o
        if isinstance(o, (int, Fraction)):
            return FunctionFieldElement(self.curve, Poly.const(o), Poly(), Poly.const(1))
        if isinstance(o, (Poly, RatFunc)):
            return FunctionFieldElement.from_parts(self.curve, o, 0)
        raise TypeError(f"cannot combine function field element with {type(o).__name__}")

    def __add__(self, other):
        if isinstance(other, DifferentialForm):
            return NotImplemented
        o = self._lift(other)
        if self.C == o.C:
            return FunctionFieldElement(self.curve, self.A + o.A, self.B + o.B, self.C)
        g = poly_gcd(self.C, o.C)
        s, t = o.C // g, self.C // g
        return FunctionFieldElement(self.curve, self.A * s + o.A * t, self.B * s + o.B * t, self.C * s)

    __radd__ = __add__

    def __neg__(self):
        return FunctionFieldElement(self.curve, -self.A, -self.B, self.C, _normalized=True)

    def __sub__(self, other):
        if isinstance(other, DifferentialForm):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, DifferentialForm):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.curve.zero()
            return FunctionFieldElement(self.curve, self.A * other, self.B * other, self.C, _normalized=True)
        o = self._lift(other)
        f = self.curve.f
        A = self.A * o.A + self.B * o.B * f
        B = self.A * o.B + self.B * o.A
        return FunctionFieldElement(self.curve, A, B, self.C * o.C)

    __rmul__ = __mul__

    def conj(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self.curve, self.A, -self.B, self.C, _normalized=True)

    def norm(self) -> RatFunc:
        return RatFunc(self.A * self.A - self.B * self.B * self.curve.f, self.C * self.C)

    def inverse(self) -> "FunctionFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero function")
        n = self.A * self.A - self.B * self.B * self.curve.f
        return FunctionFieldElement(self.curve, self.A * self.C, -self.B * self.C, n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.curve.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def d(self) -> "DifferentialForm":
        """Exterior derivative."""
        a, b = self.a, self.b
        f = self.curve.f
        da = a.derivative()
        db = b.derivative() + b * RatFunc(self.curve.df, f * 2)
        return DifferentialForm(FunctionFieldElement.from_parts(self.curve, da, db))

    def __call__(self, P: CurvePoint) -> Fraction:
        """Value at a rational point where the element is regular."""
        v = valuation(self, P)
        if v < 0:
            raise ZeroDivisionError(f"pole at {P}")
        return expand(self, P, 1).coefficient(0)


class DifferentialForm:
    """A rational differential h*dx."""

    __slots__ = ("h",)

    def __init__(self, h: FunctionFieldElement):
        self.h = h

    @property
    def curve(self) -> CurveModel:
        return self.h.curve

    @classmethod
    def from_dxy(cls, rho: FunctionFieldElement) -> "DifferentialForm":
        """rho * dx/y."""
        return cls(rho / rho.curve.y)

    def dxy_coefficient(self) -> FunctionFieldElement:
        """rho with self = rho * dx/y."""
        return self.h * self.curve.y

    def is_zero(self) -> bool:
        return self.h.is_zero()

    def __eq__(self, other):
        return isinstance(other, DifferentialForm) and self.h == other.h

    def __hash__(self):
        return hash(("form", self.h))

    def __repr__(self):
        return f"{self.h!r}*dx"

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return DifferentialForm(self.h + other.h)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialForm(-self.h)

    def __sub__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return DifferentialForm(self.h - other.h)

    def __mul__(self, other):
        if isinstance(other, DifferentialForm):
            raise TypeError("product of two differentials")
        if isinstance(other, FunctionFieldElement):
            return DifferentialForm(self.h * other)
        if isinstance(other, (int, Fraction)):
            return DifferentialForm(self.h * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, DifferentialForm):
            return self.h / other.h
        return DifferentialForm(self.h / other)


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------

def _split_valuation(A: Poly, B: Poly, p: Poly, s, f: Poly) -> int:
    """v_P(A + B y) at the unramified place over p where y = s (mod p)."""
    if A.is_zero() and B.is_zero():
        raise ValueError("zero")
    ka = A.valuation_at(p) if not A.is_zero() else None
    kb = B.valuation_at(p) if not B.is_zero() else None
    k = min(v for v in (ka, kb) if v is not None)
    pk = p ** k
    A1, B1 = A // pk, B // pk
    if p.degree == 1:
        x0 = -p[0]
        r = A1(x0) + B1(x0) * s
        zero = r == 0
    else:
        zero = ((A1 + B1 * s) % p).is_zero()
    if not zero:
        return k
    return k + (A1 * A1 - B1 * B1 * f).valuation_at(p)


def _ramified_valuation(A: Poly, B: Poly, p: Poly) -> int:
    vals = []
    if not A.is_zero():
        vals.append(2 * A.valuation_at(p))
    if not B.is_zero():
        vals.append(2 * B.valuation_at(p) + 1)
    return min(vals)


def _inert_valuation(A: Poly, B: Poly, p: Poly) -> int:
    return min(P.valuation_at(p) for P in (A, B) if not P.is_zero())


def _numerator_valuation(curve: CurveModel, A: Poly, B: Poly, P) -> int:
    """Valuation of the integral element A + B*y at P."""
    f = curve.f
    if isinstance(P, ClosedPlace):
        if P.kind == "ramified":
            return _ramified_valuation(A, B, P.p)
        if P.kind == "inert":
            return _inert_valuation(A, B, P.p)
        return _split_valuation(A, B, P.p, P.s, f)
    if P.is_infinite:
        N = f.degree
        g = curve.genus
        if curve.odd:
            vals = []
            if not A.is_zero():
                vals.append(-2 * A.degree)
            if not B.is_zero():
                vals.append(-2 * B.degree - N)
            return min(vals)
        ka = -A.degree if not A.is_zero() else None
        kb = -B.degree - (g + 1) if not B.is_zero() else None
        if ka is None:
            return kb
        if kb is None or ka != kb:
            return ka if kb is None else min(ka, kb)
        sign = 1 if P.inf == 0 else -1
        lead = A.lc() + sign * curve._inf_sqrt * B.lc()
        if lead != 0:
            return ka
        n = A * A - B * B * f
        return -n.degree - ka
    p = Poly.linear_root(P.x)
    if P.y == 0:
        return _ramified_valuation(A, B, p)
    return _split_valuation(A, B, p, P.y, f)


def _denominator_valuation(curve: CurveModel, C: Poly, P) -> int:
    if isinstance(P, ClosedPlace):
        k = C.valuation_at(P.p)
        return 2 * k if P.kind == "ramified" else k
    if P.is_infinite:
        return -(2 if curve.odd else 1) * C.degree
    k = C.valuation_at(Poly.linear_root(P.x))
    return 2 * k if P.y == 0 else k


def valuation(e: FunctionFieldElement, P) -> int | float:
    """Order of vanishing of ``e`` at ``P``; the zero element gives +inf."""
    if e.is_zero():
        return INF_VALUATION
    return _numerator_valuation(e.curve, e.A, e.B, P) - _denominator_valuation(e.curve, e.C, P)


def dx_valuation(curve: CurveModel, P) -> int:
    if isinstance(P, ClosedPlace):
        return 1 if P.kind == "ramified" else 0
    if P.is_infinite:
        return -3 if curve.odd else -2
    return 1 if P.y == 0 else 0


def form_valuation(w: DifferentialForm, P) -> int | float:
    if w.is_zero():
        return INF_VALUATION
    return valuation(w.h, P) + dx_valuation(w.curve, P)


# ---------------------------------------------------------------------------
# places over a polynomial and principal divisors
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=4096)
def factor_rational(p: Poly) -> tuple[tuple[Poly, int], ...]:
    """Monic irreducible factorization over QQ (backed by sympy)."""
    import sympy

    if p.degree <= 0:
        return ()
    if p.degree == 1:
        return ((p.monic(), 1),)
    x = sympy.Symbol("x")
    _, ints = p.content_integer()
    expr = sum(c * x ** k for k, c in enumerate(ints))
    _, facs = sympy.factor_list(expr, x)
    out = []
    for fac, m in facs:
        coeffs = [Fraction(int(c)) for c in reversed(sympy.Poly(fac, x).all_coeffs())]
        out.append((Poly(coeffs).monic(), int(m)))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return tuple(out)


def sqrt_mod(c: Poly, p: Poly) -> Poly | None:
    """A square root of c in QQ[x]/(p) for irreducible p, or None."""
    c = c % p
    if p.degree == 1:
        r = rational_sqrt(c[0])
        return None if r is None else Poly.const(r)
    import sympy
    from sympy import QQ

    x, Y = sympy.symbols("x Y")
    _, pint = p.content_integer()
    pexpr = sum(int(a) * x ** k for k, a in enumerate(pint))
    theta = sympy.CRootOf(pexpr, 0)
    K = QQ.algebraic_field(theta)
    gen = K.from_sympy(theta)
    el = K.zero
    for a in reversed(c.coeffs):
        el = el * gen + K.from_sympy(sympy.Rational(a.numerator, a.denominator))
    _, facs = sympy.Poly([K.one, K.zero, -el], Y, domain=K).factor_list()
    for fac, _m in facs:
        if fac.degree() == 1:
            a1, a0 = fac.all_coeffs()
            root = K.to_sympy(-a0 / a1)
            rp = sympy.Poly(sympy.expand(root.subs(theta, x)), x)
            coeffs = [Fraction(int(q.p), int(q.q)) for q in reversed(rp.all_coeffs())]
            s = Poly(coeffs) % p
            if ((s * s - c) % p).is_zero():
                return s
    return None


def places_over(curve: CurveModel, p: Poly, hint: Poly | None = None) -> list:
    """All places over the monic irreducible ``p``.

    ``hint`` is an optional residue s with s^2 = f mod p (avoids a square root).
    """
    f = curve.f
    if (f % p).is_zero():
        if p.degree == 1:
            return [CurvePoint.affine(-p[0], 0)]
        return [ClosedPlace(p, "ramified")]
    s = hint if hint is not None else sqrt_mod(f, p)
    if s is None:
        return [ClosedPlace(p, "inert")]
    if p.degree == 1:
        y0 = (s % p)[0]
        return [CurvePoint.affine(-p[0], y0), CurvePoint.affine(-p[0], -y0)]
    s = s % p
    return [ClosedPlace(p, "split", s), ClosedPlace(p, "split", (-s) % p)]


def principal_divisor(e: FunctionFieldElement) -> Divisor:
    """div(e) = zeros minus poles, over all places (including non-rational ones)."""
    if e.is_zero():
        raise ValueError("principal divisor of zero")
    curve = e.curve
    f = curve.f
    candidates: dict = {}
    G = poly_gcd(e.A, e.B)
    A1, B1 = e.A // G, e.B // G
    norm = A1 * A1 - B1 * B1 * f
    for p, _ in factor_rational(norm):
        hint = None
        if not (f % p).is_zero():
            b_mod = B1 % p
            if not b_mod.is_zero():
                hint = ((-A1) * poly_inverse_mod(b_mod, p)) % p
        candidates[p] = hint
    for poly in (G, e.C):
        for p, _ in factor_rational(poly):
            candidates.setdefault(p, None)
    out = {}
    for p, hint in candidates.items():
        for P in places_over(curve, p, hint):
            v = valuation(e, P)
            if v:
                out[P] = v
    for P in curve.infinity_points:
        v = valuation(e, P)
        if v:
            out[P] = v
    return Divisor(out)


def form_divisor(w: DifferentialForm) -> Divisor:
    return principal_divisor(w.h) + canonical_divisor(w.curve)


def canonical_divisor(curve: CurveModel) -> Divisor:
    """div(dx): the ramification points minus the polar part at infinity."""
    out = {}
    for p, _ in factor_rational(curve.f):
        for P in places_over(curve, p):
            out[P] = 1
    for P in curve.infinity_points:
        out[P] = dx_valuation(curve, P)
    return Divisor(out)


# ---------------------------------------------------------------------------
# local expansions at rational points
# ---------------------------------------------------------------------------

class LocalExpansion:
    """x(t), y(t) at a rational point for a fixed local parameter t.

    Affine non-Weierstrass: t = x - x0. Affine Weierstrass: t = y.
    Infinity (odd): x = lc/t^2. Infinity (even): x = 1/t.
    """

    def __init__(self, curve: CurveModel, P: CurvePoint):
        if not curve.contains(P):
            raise ValueError(f"{P} is not a point of {curve}")
        self.curve = curve
        self.P = P
        self._cache: tuple[int, Series, Series] | None = None
        self._lock = threading.Lock()

    def xy(self, prec: int) -> tuple[Series, Series]:
        with self._lock:
            if self._cache is not None and self._cache[0] >= prec:
                return self._cache[1], self._cache[2]
            prec = max(prec, 8, (self._cache[0] * 2) if self._cache else 0)
            X, Y = self._compute(prec)
            self._cache = (prec, X, Y)
            return X, Y

    def _compute(self, prec: int) -> tuple[Series, Series]:
        curve, P, f = self.curve, self.P, self.curve.f
        if P.is_infinite:
            N = f.degree
            g = curve.genus
            lc = f.lc()
            if curve.odd:
                X = Series(-2, [lc], None)
                r = [ZERO] * (2 * N + 1)
                for i, fi in enumerate(f.coeffs):
                    r[2 * (N - i)] += fi * lc ** (i - N - 1)
                root = sqrt_one_plus(Series(0, r, None), prec + N)
                Y = Series(-N, [lc ** (g + 1)], None) * root
                return X, Y
            X = Series(-1, [1], None)
            r = [fi / lc for fi in reversed(f.coeffs)]
            root = sqrt_one_plus(Series(0, r, None), prec + g + 1)
            s = curve._inf_sqrt * (1 if P.inf == 0 else -1)
            Y = Series(-(g + 1), [s], None) * root
            return X, Y
        x0, y0 = P.x, P.y
        if y0 != 0:
            X = Series(0, [x0, 1], None)
            shifted = f.shift(x0)
            c = Series(0, [a / (y0 * y0) for a in shifted.coeffs], None)
            Y = sqrt_one_plus(c, prec) * y0
            return X, Y
        # Weierstrass point: t = y, solve f(x0 + u) = t^2 for u as a series in s = t^2
        shifted = f.shift(x0)
        a = shifted.coeffs
        nterms = prec // 2 + 2
        a1 = a[1]
        u = Series(1, [1 / a1], nterms)
        S = Series(1, [1], None)
        for _ in range(nterms):
            acc = Series(0, [], None)
            power = u
            for k in range(2, len(a)):
                power = power * u
                if a[k] != 0:
                    acc = acc + power * a[k]
            u = (S - acc) * (1 / a1)
            u = u.truncate(nterms + 1)
        coeffs = [ZERO] * (2 * (u.val + len(u.coeffs)))
        for i, ci in enumerate(u.coeffs):
            coeffs[2 * (u.val + i)] = ci
        X = Series(0, coeffs, 2 * (u.prec if u.prec is not None else nterms)) + x0
        Y = Series(1, [1], None)
        return X, Y

    def dx(self, prec: int) -> Series:
        X, _ = self.xy(prec + 2)
        return X.derivative()


def _poly_series(p: Poly, X: Series) -> Series:
    if p.is_zero():
        return Series(0, [], None)
    out = p(X)
    return out if isinstance(out, Series) else Series.const(out)


def expand(e: FunctionFieldElement, P: CurvePoint, prec: int) -> Series:
    """Laurent expansion of e at the rational point P, correct below t^prec."""
    if e.is_zero():
        return Series(0, [], None)
    curve = e.curve
    loc = curve.local(P)
    vC = _denominator_valuation(curve, e.C, P)
    vN = _numerator_valuation(curve, e.A, e.B, P)
    need_N = prec + vC
    need_C = prec + 2 * vC - vN
    q = max(need_N, need_C, 1) + 2
    while True:
        X, Y = loc.xy(q)
        N = _poly_series(e.A, X) + _poly_series(e.B, X) * Y
        Cs = _poly_series(e.C, X)
        if (N.prec is None or N.prec >= need_N) and (Cs.prec is None or Cs.prec >= need_C):
            rel = prec - (vN - vC)
            num = N.truncate(need_N) if N.prec is None else N
            if Cs.prec is None:
                out = num * Cs.inverse(max(rel, 1))
            else:
                out = num * Cs.inverse()
            if out.prec is None or out.prec >= prec:
                return out
        q = 2 * q + 4


def residue(w: DifferentialForm, P: CurvePoint) -> Fraction:
    """Coefficient of dt/t in the expansion of w at the rational point P."""
    if not isinstance(P, CurvePoint):
        raise NotImplementedError("residues are computed at rational points only")
    if w.is_zero():
        return ZERO
    vh = valuation(w.h, P)
    vdx = dx_valuation(w.curve, P)
    if vh + vdx >= 0:
        return ZERO
    loc = w.curve.local(P)
    hs = expand(w.h, P, -vdx)
    X, _ = loc.xy(-vh + 4)
    dX = X.derivative()
    while dX.prec is not None and dX.prec < -vh:
        X, _ = loc.xy(2 * (-vh + 4))
        dX = X.derivative()
    return (hs * dX).coefficient(-1)


def poles(w: DifferentialForm) -> list:
    """Places where the form has a pole."""
    h = w.h
    curve = w.curve
    out = []
    seen = set()
    for p, _ in factor_rational(h.C):
        for P in places_over(curve, p):
            if P not in seen and form_valuation(w, P) < 0:
                out.append(P)
            seen.add(P)
    for P in curve.infinity_points:
        if form_valuation(w, P) < 0:
            out.append(P)
    return out


def polar_places_of_element(e: FunctionFieldElement) -> list:
    curve = e.curve
    out = []
    for p, _ in factor_rational(e.C):
        for P in places_over(curve, p):
            if valuation(e, P) < 0:
                out.append(P)
    for P in curve.infinity_points:
        if valuation(e, P) < 0:
            out.append(P)
    return out
