"""Exponents, weights, parabolic degree and the V0 test."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .cohomology import CechOneClass, LineBundleData, forget_twist, h0_pairing_map
from .curve import CurvePoint
from .exact import ZERO, det, to_scalar


@dataclass(frozen=True)
class ExponentData:
    """Local exponents (nu_plus, nu_minus) per marked point, with lambda and degree."""

    nu: tuple[tuple[Fraction, Fraction], ...]
    lam: Fraction = Fraction(1)
    degree: int = 0

    def __post_init__(self):
        nu = tuple((to_scalar(p), to_scalar(m)) for p, m in self.nu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "lam", to_scalar(self.lam))
        object.__setattr__(self, "degree", int(self.degree))

    @property
    def n(self) -> int:
        return len(self.nu)

    @property
    def nu_plus(self) -> tuple[Fraction, ...]:
        return tuple(p for p, _ in self.nu)

    @property
    def nu_minus(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self.nu)

    @property
    def total(self) -> Fraction:
        return sum((p + m for p, m in self.nu), ZERO)

    def trace_residues(self) -> tuple[Fraction, ...]:
        return tuple(p + m for p, m in self.nu)

    def with_nu(self, i: int, pair, degree: int) -> "ExponentData":
        nu = list(self.nu)
        nu[i] = pair
        return ExponentData(tuple(nu), self.lam, degree)


@dataclass(frozen=True)
class Weights:
    alpha: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        alpha = tuple((to_scalar(a), to_scalar(b)) for a, b in self.alpha)
        for i, (a1, a2) in enumerate(alpha):
            if not (0 < a1 < a2 < 1):
                raise ValueError(f"weights at point {i} must satisfy 0 < a1 < a2 < 1, got ({a1}, {a2})")
        object.__setattr__(self, "alpha", alpha)

    @property
    def w(self) -> tuple[Fraction, ...]:
        return tuple(a2 - a1 for a1, a2 in self.alpha)

    @property
    def total_w(self) -> Fraction:
        return sum(self.w, ZERO)


FlagIncidence = tuple[bool, ...]


def fuchs_check(e: ExponentData) -> bool:
    """Sum of all exponents equals -lambda * d."""
    return e.total == -e.lam * e.degree


def resonance_check(e: ExponentData) -> bool:
    """True iff no signed choice of exponents sums to an integer."""
    if e.lam != 1:
        raise ValueError("resonance is defined for lambda = 1")
    for choice in itertools.product((0, 1), repeat=e.n):
        s = sum((pair[c] for pair, c in zip(e.nu, choice)), ZERO)
        if s.denominator == 1:
            return False
    return True


def _check_lengths(inc: Sequence[bool], w: Weights):
    if len(inc) != len(w.alpha):
        raise ValueError(f"flag incidence has {len(inc)} entries for {len(w.alpha)} weights")


def parabolic_degree(degF: int, inc: Sequence[bool], w: Weights, rank1: bool = True) -> Fraction:
    """Parabolic degree of a line subbundle F (rank1) or of E itself.

    At a point where F meets the flag line, F sits in the second step of the
    filtration and picks up alpha_2; otherwise it picks up alpha_1.
    """
    _check_lengths(inc, w)
    out = Fraction(degF)
    for on_flag, (a1, a2) in zip(inc, w.alpha):
        if rank1:
            out += a2 if on_flag else a1
        else:
            out += a1 + a2
    return out


def stability_margin(degE: int, degF: int, inc: Sequence[bool], w: Weights) -> Fraction:
    """2 * (pardeg E / 2 - pardeg F); F destabilizes iff the margin is negative."""
    _check_lengths(inc, w)
    out = Fraction(degE - 2 * degF)
    for on_flag, wi in zip(inc, w.w):
        out += -wi if on_flag else wi
    return out


class ModuliDimensions(NamedTuple):
    parabolic_bundles: int
    parabolic_bundles_fixed_det: int
    connections: int
    connections_fixed_trace: int


def moduli_dimensions(g: int, n: int) -> ModuliDimensions:
    if g < 0 or n < 0:
        raise ValueError("g and n must be nonnegative")
    return ModuliDimensions(4 * g + n - 3, 3 * g + n - 3, 8 * g + 2 * n - 6, 6 * g + 2 * n - 6)


@dataclass(frozen=True)
class ParabolicBundleData:
    """Extension of L by O in normal form: transition (1, b; 0, c) and flags e2 at each t_i."""

    bprime: CechOneClass
    bundle: LineBundleData
    marked_points: tuple[CurvePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "marked_points", tuple(self.marked_points))
        D = self.bundle.marked_divisor(self.marked_points)
        if self.bprime.sheaf.E != -self.bundle.A - D or self.bprime.sheaf.forms:
            raise ValueError("extension class must lie in H^1(L^-1(-D))")
        for t in self.marked_points:
            if not self.bundle.cover.in_overlap(t):
                raise ValueError(f"marked point {t} must lie in both charts")


def pairing_matrix_for(pb: ParabolicBundleData) -> list[list[Fraction]]:
    return h0_pairing_map(forget_twist(pb.bprime, -pb.bundle.A), pb.bundle.A)


def v0_membership(pb: ParabolicBundleData) -> bool:
    """dim H^0(E) = 1, i.e. the cup product H^0(L) -> H^1(O) is an isomorphism."""
    M = pairing_matrix_for(pb)
    return bool(M) and det(M) != 0
