"""Exact arithmetic over QQ: scalars, dense univariate polynomials,
rational functions and row reduction.

Scalars are :class:`fractions.Fraction`. Everything here is immutable and
pure; nothing ever touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(v) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"cannot interpret {v!r} as an exact rational")


def scalar_str(q: Fraction) -> str:
    q = to_scalar(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Dense polynomial in x, coefficients lowest degree first.

    The zero polynomial has ``degree == -1``.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = [to_scalar(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, a) -> "Poly":
        return cls([a])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, a=1) -> "Poly":
        return cls([0] * k + [a])

    @classmethod
    def linear_root(cls, x0) -> "Poly":
        """``x - x0``."""
        return cls([-to_scalar(x0), 1])

    # basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return Poly([a / lc for a in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Poly({[scalar_str(a) for a in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k, a in enumerate(self.coeffs):
            if a == 0:
                continue
            s = scalar_str(a)
            if k == 0:
                terms.append(s)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                terms.append(mono if a == 1 else ("-" + mono if a == -1 else f"{s}*{mono}"))
        return " + ".join(reversed(terms)).replace("+ -", "- ")

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        o = Poly._lift(other).coeffs
        a = self.coeffs
        n = max(len(a), len(o))
        return Poly([(a[i] if i < len(a) else 0) + (o[i] if i < len(o) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        return self + (-Poly._lift(other))

    def __rsub__(self, other):
        return Poly._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly()
            return Poly([a * other for a in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        other = Poly._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lcb = other.coeffs[-1]
        if len(rem) - 1 < db:
            return Poly(), self
        if db == 1 and lcb == 1:
            # synthetic division by x - r
            r = -other.coeffs[0]
            acc = ZERO
            out = []
            for a in reversed(rem):
                acc = acc * r + a
                out.append(acc)
            rem_c = out.pop()
            return Poly(reversed(out)), Poly([rem_c])
        quo = [ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lcb
            quo[k] = c
            if c != 0:
                for j, bj in enumerate(other.coeffs):
                    rem[k + j] -= c * bj
        return Poly(quo), Poly(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, v):
        """Horner evaluation; works for any ring element supporting + and *."""
        if not self.coeffs:
            return v * 0 if not isinstance(v, (int, Fraction)) else ZERO
        acc = None
        for a in reversed(self.coeffs):
            acc = a if acc is None else acc * v + a
        if isinstance(acc, (int, Fraction)):
            return Fraction(acc)
        return acc

    def derivative(self) -> "Poly":
        return Poly([k * a for k, a in enumerate(self.coeffs)][1:])

    def shift(self, x0) -> "Poly":
        """Return p(x + x0)."""
        return self.compose(Poly([x0, 1]))

    def compose(self, q: "Poly") -> "Poly":
        acc = Poly()
        for a in reversed(self.coeffs):
            acc = acc * q + a
        return acc

    def reversed_(self, n: int) -> "Poly":
        """x^n p(1/x) for n >= degree."""
        if n < self.degree:
            raise ValueError("reversal length smaller than degree")
        c = list(self.coeffs) + [ZERO] * (n + 1 - len(self.coeffs))
        return Poly(reversed(c))

    def content_integer(self) -> tuple[int, list[int]]:
        """Scale to a primitive integer coefficient list; returns (lcm of dens, ints)."""
        from math import lcm
        den = 1
        for a in self.coeffs:
            den = lcm(den, a.denominator)
        return den, [int(a * den) for a in self.coeffs]

    def valuation_at(self, p: "Poly") -> int:
        """Multiplicity of the irreducible ``p`` in ``self`` (zero -> large sentinel)."""
        if self.is_zero():
            raise ValueError("valuation of the zero polynomial")
        k = 0
        cur = self
        while True:
            q, r = divmod(cur, p)
            if not r.is_zero():
                return k
            cur = q
            k += 1


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; ``gcd(p, 0) = monic(p)`` and ``gcd(0, 0) = 0``.

    Nontrivial cases go through sympy's heuristic integer gcd on the
    primitive parts, which avoids coefficient growth in the rational
    Euclidean algorithm.
    """
    if q.is_zero():
        return p.monic()
    if p.is_zero():
        return q.monic()
    if p.degree == 0 or q.degree == 0:
        return Poly.const(1)
    if p.degree == 1 or q.degree == 1:
        lin, other = (p, q) if p.degree == 1 else (q, p)
        root = -lin[0] / lin[1]
        return lin.monic() if other(root) == 0 else Poly.const(1)
    from sympy import ZZ
    from sympy.polys.euclidtools import dup_gcd

    _, a = p.content_integer()
    _, b = q.content_integer()
    g = dup_gcd([ZZ(c) for c in reversed(a)], [ZZ(c) for c in reversed(b)], ZZ)
    return Poly([int(c) for c in reversed(g)]).monic()


def poly_xgcd(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*p + t*q = g monic."""
    r0, r1 = p, q
    s0, s1 = Poly.const(1), Poly()
    t0, t1 = Poly(), Poly.const(1)
    while not r1.is_zero():
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lc()
    return r0 * (1 / lc), s0 * (1 / lc), t0 * (1 / lc)


def poly_inverse_mod(a: Poly, p: Poly) -> Poly:
    g, s, _ = poly_xgcd(a % p, p)
    if g.degree != 0:
        raise ZeroDivisionError("element not invertible modulo p")
    return s % p


def is_squarefree(p: Poly) -> bool:
    return poly_gcd(p, p.derivative()).degree == 0


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RatFunc:
    """num/den in lowest terms with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _normalized: bool = False):
        num = num if isinstance(num, Poly) else Poly._lift(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly._lift(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            if num.is_zero():
                den = Poly.const(1)
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lc = den.lc()
                if lc != 1:
                    num = num * (1 / lc)
                    den = den * (1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, a) -> "RatFunc":
        return cls(Poly.const(a), Poly.const(1), _normalized=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def degree(self) -> int:
        """deg num - deg den (the negated valuation at x = infinity)."""
        if self.is_zero():
            raise ValueError("degree of zero rational function")
        return self.num.degree - self.den.degree

    def lead(self) -> Fraction:
        return self.num.lc() / self.den.lc()

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction)):
            return self == RatFunc(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RatFunc", self.num, self.den))
        return self._hash

    def __repr__(self):
        if self.den.degree == 0:
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num})/({self.den}))"

    @staticmethod
    def _lift(o) -> "RatFunc":
        if isinstance(o, RatFunc):
            return o
        return RatFunc(o)

    def __add__(self, other):
        if not isinstance(other, (RatFunc, Poly, int, Fraction)):
            return NotImplemented
        o = RatFunc._lift(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        if not isinstance(other, (RatFunc, Poly, int, Fraction)):
            return NotImplemented
        return self + (-RatFunc._lift(other))

    def __rsub__(self, other):
        return RatFunc._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFunc(Poly())
            return RatFunc(self.num * other, self.den, _normalized=True)
        if not isinstance(other, (RatFunc, Poly)):
            return NotImplemented
        o = RatFunc._lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * RatFunc._lift(other).inverse()

    def __rtruediv__(self, other):
        return RatFunc._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _normalized=True)

    def derivative(self) -> "RatFunc":
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def __call__(self, v):
        return self.num(v) / self.den(v)

    def valuation_at(self, p: Poly) -> int:
        if self.is_zero():
            raise ValueError("valuation of zero")
        return self.num.valuation_at(p) - self.den.valuation_at(p)


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------

Matrix = list  # list of rows, each a list of Fractions


@dataclass(frozen=True)
class LinearSolution:
    """Result of :func:`solve_linear`; ``particular`` is None when inconsistent."""

    particular: tuple[Fraction, ...] | None
    kernel_basis: tuple[tuple[Fraction, ...], ...]

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def _rref(rows: list[list[Fraction]], ncols: int, order: Sequence[int]):
    """In-place reduced row echelon form following the column ``order``.

    Returns the list of (row index, pivot column) pairs.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in order:
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        if inv != 1:
            for j in range(len(pr)):
                if pr[j] != 0:
                    pr[j] *= inv
        for i in range(nrows):
            if i == r:
                continue
            fi = rows[i][c]
            if fi != 0:
                ri = rows[i]
                for j in range(len(pr)):
                    if pr[j] != 0:
                        ri[j] -= fi * pr[j]
        pivots.append((r, c))
        r += 1
    return pivots


def solve_linear(A: Sequence[Sequence], rhs: Sequence, column_order: Sequence[int] | None = None) -> LinearSolution:
    """Exact solve of ``A z = rhs`` by reduced row echelon form.

    ``column_order`` fixes the order in which columns are tried as pivots;
    it changes which particular solution is returned (free variables are
    set to zero) but never the solution set.
    """
    nrows = len(A)
    if len(rhs) != nrows:
        raise ValueError(f"rhs has length {len(rhs)} but matrix has {nrows} rows")
    ncols = len(A[0]) if nrows else 0
    for row in A:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    order = list(range(ncols)) if column_order is None else list(column_order)
    if sorted(order) != list(range(ncols)):
        raise ValueError("column_order must be a permutation of the columns")
    rows = [[to_scalar(a) for a in row] + [to_scalar(b)] for row, b in zip(A, rhs)]
    pivots = _rref(rows, ncols, order)
    rank = len(pivots)
    for i in range(rank, nrows):
        if rows[i][ncols] != 0:
            particular = None
            break
    else:
        part = [ZERO] * ncols
        for r, c in pivots:
            part[c] = rows[r][ncols]
        particular = tuple(part)
    pivot_cols = {c for _, c in pivots}
    kernel = []
    for fcol in order:
        if fcol in pivot_cols:
            continue
        v = [ZERO] * ncols
        v[fcol] = ONE
        for r, c in pivots:
            v[c] = -rows[r][fcol]
        kernel.append(tuple(v))
    return LinearSolution(particular, tuple(kernel))


def kernel(A: Sequence[Sequence], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    if not A:
        n = ncols or 0
        return [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    return list(solve_linear(A, [0] * len(A)).kernel_basis)


def rref(A: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if not A:
        return [], []
    ncols = len(A[0])
    rows = [[to_scalar(a) for a in row] for row in A]
    pivots = _rref(rows, ncols, range(ncols))
    return [rows[r] for r, _ in pivots], [c for _, c in pivots]


def rank(A: Sequence[Sequence]) -> int:
    return len(rref(A)[1])


def mat_mul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), ZERO) for j in range(len(B[0]))] for i in range(len(A))]


def mat_vec(A, v):
    return [sum((a * b for a, b in zip(row, v)), ZERO) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def mat_inv(A):
    n = len(A)
    rows = [[to_scalar(a) for a in row] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(A)]
    piv = _rref(rows, 2 * n, range(n))
    if len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in rows]


def det(A) -> Fraction:
    n = len(A)
    rows = [[to_scalar(a) for a in row] for row in A]
    d = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        d *= rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] / rows[c][c]
            if f != 0:
                for j in range(c, n):
                    rows[i][j] -= f * rows[c][j]
    return d


def reduce_mod_subspace(v: Sequence[Fraction], basis_rref: Sequence[Sequence[Fraction]], pivots: Sequence[int]) -> list[Fraction]:
    """Canonical representative of ``v`` modulo the row space of an RREF matrix:
    the pivot coordinates are cleared."""
    out = list(v)
    for row, c in zip(basis_rref, pivots):
        a = out[c]
        if a != 0:
            for j, rj in enumerate(row):
                if rj != 0:
                    out[j] -= a * rj
    return out
