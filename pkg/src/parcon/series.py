"""Truncated Laurent series in a local parameter t with exact coefficients.

A series carries an absolute precision ``prec``: coefficients of t^k are
known for k < prec (``prec is None`` means the series is exact, i.e. a
Laurent polynomial). Arithmetic propagates precision conservatively, so a
coefficient that is reported is always correct.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


class Series:
    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val: int, coeffs: Sequence, prec: int | None):
        c = [Fraction(a) for a in coeffs]
        if prec is not None:
            c = c[: max(0, prec - val)]
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        c = c[i:]
        val += i
        if prec is None:
            while c and c[-1] == 0:
                c.pop()
        if not c:
            val = prec if prec is not None else 0
        self.val = val
        self.coeffs = c
        self.prec = prec

    # -- construction ----------------------------------------------------
    @classmethod
    def const(cls, a) -> "Series":
        return cls(0, [a], None)

    @classmethod
    def monomial(cls, k: int, a=1) -> "Series":
        return cls(k, [a], None)

    # -- inspection ------------------------------------------------------
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero_known(self) -> bool:
        """True when all known coefficients vanish."""
        return not self.coeffs

    @property
    def low(self) -> float | int:
        """A lower bound for the valuation (exact when coefficients are known)."""
        if self.coeffs:
            return self.val
        return self.prec if self.prec is not None else float("inf")

    def coefficient(self, k: int) -> Fraction:
        if self.prec is not None and k >= self.prec:
            raise ArithmeticError(f"coefficient t^{k} requested beyond precision {self.prec}")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ZERO

    def __repr__(self):
        terms = [f"{a}*t^{self.val + i}" for i, a in enumerate(self.coeffs) if a != 0]
        tail = "" if self.prec is None else f" + O(t^{self.prec})"
        return "Series(" + (" + ".join(terms) or "0") + tail + ")"

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _lift(o) -> "Series":
        return o if isinstance(o, Series) else Series.const(o)

    def __add__(self, other):
        if not isinstance(other, (Series, int, Fraction)):
            return NotImplemented
        o = Series._lift(other)
        precs = [p for p in (self.prec, o.prec) if p is not None]
        prec = min(precs) if precs else None
        if not self.coeffs:
            lo = o.val if o.coeffs else (prec if prec is not None else 0)
        elif not o.coeffs:
            lo = self.val
        else:
            lo = min(self.val, o.val)
        hi = max(self.val + len(self.coeffs), o.val + len(o.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        out = [ZERO] * max(0, hi - lo)
        for s in (self, o):
            for i, a in enumerate(s.coeffs):
                k = s.val + i - lo
                if 0 <= k < len(out):
                    out[k] += a
        return Series(lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.val, [-a for a in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-Series._lift(other))

    def __rsub__(self, other):
        return Series._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0 and self.prec is None:
                return Series(0, [], None)
            return Series(self.val, [a * other for a in self.coeffs], self.prec)
        if not isinstance(other, Series):
            return NotImplemented
        a, b = self, other
        precs = []
        if a.prec is not None:
            precs.append(a.prec + b.low)
        if b.prec is not None:
            precs.append(b.prec + a.low)
        precs = [p for p in precs if p != float("inf")]
        prec = int(min(precs)) if precs else None
        if not a.coeffs or not b.coeffs:
            return Series(prec if prec is not None else 0, [], prec)
        val = a.val + b.val
        n = len(a.coeffs) + len(b.coeffs) - 1
        if prec is not None:
            n = min(n, prec - val)
        out = [ZERO] * max(0, n)
        for i, ai in enumerate(a.coeffs):
            if ai == 0 or i >= n:
                continue
            lim = min(len(b.coeffs), n - i)
            for j in range(lim):
                bj = b.coeffs[j]
                if bj != 0:
                    out[i + j] += ai * bj
        return Series(val, out, prec)

    __rmul__ = __mul__

    def inverse(self, rel_prec: int | None = None) -> "Series":
        """Multiplicative inverse. For exact input a relative precision must be given."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of a series with no known nonzero coefficient")
        own = None if self.prec is None else self.prec - self.val
        if own is None and rel_prec is None:
            raise ValueError("inverse of an exact series needs rel_prec")
        r = own if rel_prec is None else (rel_prec if own is None else min(own, rel_prec))
        c = self.coeffs
        inv0 = 1 / c[0]
        out = [inv0]
        for k in range(1, r):
            s = ZERO
            for j in range(1, min(k, len(c) - 1) + 1):
                s += c[j] * out[k - j]
            out.append(-s * inv0)
        return Series(-self.val, out, -self.val + r)

    def truediv(self, other: "Series", rel_prec: int | None = None) -> "Series":
        return self * Series._lift(other).inverse(rel_prec)

    def derivative(self) -> "Series":
        prec = None if self.prec is None else self.prec - 1
        return Series(self.val - 1, [(self.val + i) * a for i, a in enumerate(self.coeffs)], prec)

    def truncate(self, prec: int) -> "Series":
        p = prec if self.prec is None else min(prec, self.prec)
        return Series(self.val, self.coeffs, p)


def sqrt_one_plus(c: Series, terms: int) -> Series:
    """Square root of a series with constant term 1 (val 0), ``terms`` coefficients."""
    if c.coefficient(0) != 1:
        raise ValueError("sqrt_one_plus needs constant term 1")
    if c.prec is not None:
        terms = min(terms, c.prec)
    s = [Fraction(1)]
    for n in range(1, terms):
        acc = c.coefficient(n)
        for i in range(1, n):
            acc -= s[i] * s[n - i]
        s.append(acc / 2)
    return Series(0, s, terms)
