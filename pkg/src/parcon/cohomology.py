"""Riemann-Roch spaces and two-chart Cech cohomology of line bundles.

Sections of O(E) are represented globally: a rational function s with
div(s) + E >= 0 on the open set in question. Sections of Omega^1(E) are
forms; they are handled as rho * dx/y with rho a section of O(E + K0),
K0 = div(dx/y) being supported at infinity.

The cover is U0 = C - B, U1 = C - B'. An H^1 class is a single overlap
section m; it is a coboundary when m = g0 - g1 with g_k regular on U_k.
Classes are coordinatized by Serre duality: <m, s> = sum over B of res(m s).
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .curve import (
    CurveModel,
    CurvePoint,
    DifferentialForm,
    Divisor,
    FunctionFieldElement,
    expand,
    polar_places_of_element,
    principal_divisor,
    residue,
    valuation,
)
from .series import Series
from .exact import (
    ONE,
    ZERO,
    Poly,
    rank,
    reduce_mod_subspace,
    rref,
    solve_linear,
    transpose,
)


# ---------------------------------------------------------------------------
# Riemann-Roch spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RRBasis:
    divisor: Divisor
    basis: tuple[FunctionFieldElement, ...]
    q: Poly = Poly.const(1)
    da: int = -1
    ncols: int = 0
    pivots: tuple[int, ...] = ()

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __getitem__(self, i):
        return self.basis[i]

    def combine(self, coords: Sequence) -> FunctionFieldElement:
        if len(coords) != len(self.basis):
            raise ValueError(f"expected {len(self.basis)} coordinates, got {len(coords)}")
        out = None
        for c, e in zip(coords, self.basis):
            if c != 0:
                out = e * c if out is None else out + e * c
        if out is None:
            if not self.basis:
                raise ValueError("empty basis")
            return self.basis[0] * 0
        return out

    def coordinates(self, e: FunctionFieldElement) -> tuple[Fraction, ...]:
        """Coordinates of e in this basis; ValueError when e is not in the space."""
        if e.is_zero():
            return tuple(ZERO for _ in self.basis)
        t = e * self.q
        db = self.ncols - self.da - 2
        if t.C.degree != 0 or t.A.degree > self.da or t.B.degree > db:
            raise ValueError("element is not in the Riemann-Roch space")
        v = [t.A[i] for i in range(self.da + 1)] + [t.B[i] for i in range(db + 1)]
        coords = tuple(v[p] for p in self.pivots)
        if self.combine(coords) != e:
            raise ValueError("element is not in the Riemann-Roch space")
        return coords


def _require_rational(D: Divisor):
    for P in D.support:
        if not isinstance(P, CurvePoint):
            raise NotImplementedError(f"Riemann-Roch spaces need rational support; got {P}")


def _monomial_series(curve: CurveModel, P: CurvePoint, da: int, db: int, need: int):
    """Expansions of x^i (i <= da) and x^i y (i <= db) at P, correct below t^need."""
    shift = 2 * max(da, db, 0) + 2 if P.is_infinite else 0
    X, Y = curve.local(P).xy(need + shift + 2)
    powers = [Series.const(1)]
    for _ in range(max(da, db)):
        powers.append(powers[-1] * X)
    out = powers[: da + 1] + [powers[i] * Y for i in range(db + 1)]
    for s in out:
        if s.prec is not None and s.prec < need:
            raise ArithmeticError("insufficient local precision")
    return out


@functools.lru_cache(maxsize=2048)
def rr_space_basis(curve: CurveModel, D: Divisor) -> RRBasis:
    """Basis of L(D) = {e : div(e) + D >= 0}, in reduced echelon form.

    Candidates (a(x) + b(x) y)/q with q clearing the affine poles; the degree
    bounds handle infinity and the remaining conditions are Taylor
    coefficients at the affine points of the support.
    """
    _require_rational(D)
    f = curve.f
    g = curve.genus
    infs = curve.infinity_points
    groups: dict = {}
    for P, m in D.items():
        if not P.is_infinite:
            groups.setdefault(P.x, None)
    q = Poly.const(1)
    plan = []
    for x0 in sorted(groups):
        pts = curve.points_over(x0)
        e = 2 if len(pts) == 1 else 1
        k = max(0, max(-((-D[P]) // e) for P in pts))
        if k:
            q = q * Poly.linear_root(x0) ** k
        for P in pts:
            need = e * k - D[P]
            if need > 0:
                plan.append((P, need))
    dq = q.degree
    if curve.odd:
        m_inf = D[infs[0]]
        da = dq + m_inf // 2
        db = dq + (m_inf - f.degree) // 2
    else:
        M = max(D[infs[0]], D[infs[1]])
        da = dq + M
        db = dq + M - (g + 1)
        for P in infs:
            need = -D[P] - dq
            plan.append((P, need))
    da, db = max(da, -1), max(db, -1)
    n = (da + 1) + (db + 1)
    if n == 0:
        return RRBasis(D, ())
    rows = []
    for P, need in plan:
        series = _monomial_series(curve, P, da, db, need)
        lo = min((s.val for s in series if s.coeffs), default=need)
        for j in range(lo, need):
            rows.append([s.coefficient(j) for s in series])
    if rows:
        kern = list(solve_linear(rows, [0] * len(rows)).kernel_basis)
    else:
        kern = [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    if not kern:
        return RRBasis(D, ())
    red, piv = rref(kern)
    basis = []
    for v in red:
        a = Poly(v[: da + 1])
        b = Poly(v[da + 1:])
        basis.append(FunctionFieldElement(curve, a, b, q))
    return RRBasis(D, tuple(basis), q, da, n, tuple(piv))


def form_space_basis(curve: CurveModel, E: Divisor) -> tuple[DifferentialForm, ...]:
    """Forms w with div(w) + E >= 0."""
    return tuple(DifferentialForm.from_dxy(r) for r in rr_space_basis(curve, E + curve.canonical_K0()))


def h1_dim(curve: CurveModel, D: Divisor) -> int:
    """dim H^1(O(D)) = dim H^0(O(K - D))."""
    return len(rr_space_basis(curve, curve.canonical_K0() - D))


def in_section_space(e: FunctionFieldElement, D: Divisor) -> bool:
    """div(e) + D >= 0 (checked at every place)."""
    if e.is_zero():
        return True
    for P in polar_places_of_element(e):
        if valuation(e, P) < -D[P]:
            return False
    for P, m in D.items():
        if m < 0 and valuation(e, P) < -m:
            return False
    return True


# ---------------------------------------------------------------------------
# covers and sheaves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartCover:
    """U0 = C - B, U1 = C - B'."""

    B: tuple[CurvePoint, ...]
    Bp: tuple[CurvePoint, ...]

    def __post_init__(self):
        B = tuple(sorted(set(self.B), key=lambda P: P.sort_key()))
        Bp = tuple(sorted(set(self.Bp), key=lambda P: P.sort_key()))
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "Bp", Bp)
        if set(B) & set(Bp):
            raise ValueError("B and B' must be disjoint")
        if not B or not Bp:
            raise ValueError("both B and B' must be nonempty")

    def excluded(self, k: int) -> tuple[CurvePoint, ...]:
        return self.B if k == 0 else self.Bp

    def in_chart(self, P, k: int) -> bool:
        return P not in self.excluded(k)

    def in_overlap(self, P) -> bool:
        return P not in self.B and P not in self.Bp


@dataclass(frozen=True)
class Sheaf:
    """O(E) (forms=False) or Omega^1(E) (forms=True)."""

    curve: CurveModel
    E: Divisor
    forms: bool = False

    @property
    def rho_divisor(self) -> Divisor:
        return self.E + self.curve.canonical_K0() if self.forms else self.E

    def dual(self) -> "Sheaf":
        return Sheaf(self.curve, -self.E, not self.forms)

    def to_rho(self, s) -> FunctionFieldElement:
        if self.forms:
            if not isinstance(s, DifferentialForm):
                raise TypeError("expected a differential form")
            return s.dxy_coefficient()
        if not isinstance(s, FunctionFieldElement):
            raise TypeError("expected a function")
        return s

    def from_rho(self, r: FunctionFieldElement):
        return DifferentialForm.from_dxy(r) if self.forms else r

    def global_sections(self) -> tuple:
        return tuple(self.from_rho(r) for r in rr_space_basis(self.curve, self.rho_divisor))

    def contains(self, s) -> bool:
        return in_section_space(self.to_rho(s), self.rho_divisor)

    def __str__(self):
        return ("Omega1" if self.forms else "O") + f"({self.E})"


def _product_form(a, b) -> DifferentialForm:
    if isinstance(a, DifferentialForm) and isinstance(b, FunctionFieldElement):
        return a * b
    if isinstance(b, DifferentialForm) and isinstance(a, FunctionFieldElement):
        return b * a
    raise TypeError("pairing needs one function and one form")


def residue_sum_functional(w: DifferentialForm, cover: ChartCover) -> Fraction:
    """Sum of residues over B: the trace H^1(Omega^1) -> QQ."""
    return sum((residue(w, P) for P in cover.B), ZERO)


def serre_pairing(m, s, cover: ChartCover) -> Fraction:
    if m.is_zero() or s.is_zero():
        return ZERO
    return residue_sum_functional(_product_form(m, s), cover)


@functools.lru_cache(maxsize=512)
def dual_basis(sheaf: Sheaf) -> tuple:
    """Fixed basis of H^0 of the Serre dual; functional coordinates refer to it."""
    return sheaf.dual().global_sections()


def functional_coordinates(m, sheaf: Sheaf, cover: ChartCover) -> tuple[Fraction, ...]:
    return tuple(serre_pairing(m, s, cover) for s in dual_basis(sheaf))


def overlap_regular(m, sheaf: Sheaf, cover: ChartCover) -> bool:
    """m is a section of the sheaf on U0 n U1."""
    r = sheaf.to_rho(m)
    if r.is_zero():
        return True
    E = sheaf.rho_divisor
    excl = set(cover.B) | set(cover.Bp)
    for P in polar_places_of_element(r):
        if P not in excl and valuation(r, P) < -E[P]:
            return False
    for P, k in E.items():
        if P not in excl and k < 0 and valuation(r, P) < -k:
            return False
    return True


# ---------------------------------------------------------------------------
# classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CechOneClass:
    """An H^1 class: overlap cocycle plus its Serre-dual coordinates."""

    sheaf: Sheaf
    cover: ChartCover
    cocycle: object
    functional: tuple[Fraction, ...]

    @classmethod
    def from_cocycle(cls, m, sheaf: Sheaf, cover: ChartCover, check: bool = True) -> "CechOneClass":
        if check and not overlap_regular(m, sheaf, cover):
            raise ValueError(f"cocycle is not a section of {sheaf} on the overlap")
        return cls(sheaf, cover, m, functional_coordinates(m, sheaf, cover))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.functional)

    def __add__(self, other: "CechOneClass") -> "CechOneClass":
        if other.sheaf != self.sheaf or other.cover != self.cover:
            raise ValueError("classes of different sheaves")
        return CechOneClass(self.sheaf, self.cover, self.cocycle + other.cocycle,
                            tuple(a + b for a, b in zip(self.functional, other.functional)))

    def scale(self, c) -> "CechOneClass":
        c = Fraction(c)
        return CechOneClass(self.sheaf, self.cover, self.cocycle * c, tuple(a * c for a in self.functional))


def combine_classes(classes: Sequence[CechOneClass], coords: Sequence) -> CechOneClass:
    if len(classes) != len(coords) or not classes:
        raise ValueError("coordinate count mismatch")
    sheaf, cover = classes[0].sheaf, classes[0].cover
    m = None
    func = [ZERO] * len(classes[0].functional)
    for c, k in zip(coords, classes):
        c = Fraction(c)
        if c == 0:
            continue
        term = k.cocycle * c
        m = term if m is None else m + term
        for i, a in enumerate(k.functional):
            func[i] += c * a
    if m is None:
        m = classes[0].cocycle * 0
    return CechOneClass(sheaf, cover, m, tuple(func))


@functools.lru_cache(maxsize=128)
def h1_basis(sheaf: Sheaf, cover: ChartCover) -> tuple[CechOneClass, ...]:
    """A basis of H^1 made of simple cocycles.

    Candidates are sections over the overlap with poles at B and B' of
    growing order; the first ones whose functional coordinates are
    independent are kept, so the functional matrix is invertible.
    """
    curve = sheaf.curve
    duals = dual_basis(sheaf)
    h = len(duals)
    if h == 0:
        return ()
    ends = Divisor({P: 1 for P in cover.B + cover.Bp})
    N = 1
    while True:
        cands = [sheaf.from_rho(r) for r in rr_space_basis(curve, sheaf.rho_divisor + N * ends)]
        mat = [[serre_pairing(m, s, cover) for s in duals] for m in cands]
        if mat and rank(mat) == h:
            break
        N += 1
        if N > 64:
            raise RuntimeError("could not span H^1; pairing appears degenerate")
    _, rows = rref(transpose(mat))
    return tuple(CechOneClass(sheaf, cover, cands[r], tuple(mat[r])) for r in rows)


# ---------------------------------------------------------------------------
# Mittag-Leffler splitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitResult:
    """Either (g0, g1) with m = g0 - g1, or the obstruction coordinates."""

    g0: object | None
    g1: object | None
    obstruction: tuple[Fraction, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.obstruction is None


def _column_order(n: int, rng: random.Random | None):
    if rng is None:
        return None
    order = list(range(n))
    rng.shuffle(order)
    return order


def split_cocycle(m, sheaf: Sheaf, cover: ChartCover, *, rng: random.Random | None = None,
                  canonical: bool = True) -> SplitResult:
    """Solve m = g0 - g1 with g_k sections of the sheaf over U_k.

    g1 ranges over L(E off B' + sum_Q max(E_Q, -v_Q(m)) Q); the conditions
    are the principal parts of m + g1 at B'. With ``canonical`` the answer is
    reduced modulo global sections. ``rng`` permutes the pivot order and,
    without ``canonical``, adds a random global section: any valid split.
    """
    curve = sheaf.curve
    mu = sheaf.to_rho(m)
    E = sheaf.rho_divisor
    if mu.is_zero():
        z = sheaf.from_rho(curve.zero())
        return SplitResult(z, z)
    bound = {P: k for P, k in E.items() if P not in cover.Bp}
    for Q in cover.Bp:
        bound[Q] = max(E[Q], -valuation(mu, Q))
    basis = rr_space_basis(curve, Divisor(bound)).basis
    rows, rhs = [], []
    for Q in cover.Bp:
        need = -E[Q]
        vm = valuation(mu, Q)
        if vm >= need:
            lo_m = None
        else:
            lo_m = vm
        ms = expand(mu, Q, need) if lo_m is not None else None
        bs = [expand(e, Q, need) for e in basis]
        lows = [s.val for s in bs if s.coeffs]
        if lo_m is not None:
            lows.append(lo_m)
        if not lows:
            continue
        for j in range(min(lows), need):
            rows.append([s.coefficient(j) for s in bs])
            rhs.append(-(ms.coefficient(j)) if ms is not None else ZERO)
    if not basis:
        coeffs: tuple = ()
        consistent = all(r == 0 for r in rhs)
    elif rows:
        sol = solve_linear(rows, rhs, _column_order(len(basis), rng))
        consistent = sol.consistent
        coeffs = sol.particular if consistent else ()
        if consistent and sol.kernel_basis:
            if canonical:
                red, piv = rref(list(sol.kernel_basis))
                coeffs = tuple(reduce_mod_subspace(coeffs, red, piv))
            elif rng is not None:
                shift = random_combination(rng, len(sol.kernel_basis), nonzero=False)
                coeffs = tuple(c + sum(a * k[i] for a, k in zip(shift, sol.kernel_basis))
                               for i, c in enumerate(coeffs))
    else:
        consistent = True
        coeffs = tuple(ZERO for _ in basis)
    if not consistent:
        return SplitResult(None, None, functional_coordinates(m, sheaf, cover))
    g1 = curve.zero()
    for c, e in zip(coeffs, basis):
        if c != 0:
            g1 = g1 + e * c
    g0 = mu + g1
    return SplitResult(sheaf.from_rho(g0), sheaf.from_rho(g1))


def is_coboundary(m, sheaf: Sheaf, cover: ChartCover) -> bool:
    return split_cocycle(m, sheaf, cover).ok


# ---------------------------------------------------------------------------
# pairings
# ---------------------------------------------------------------------------

def cup_pair(s, b: CechOneClass) -> Fraction:
    """<s, b> for s in H^0 of the Serre dual of b's sheaf."""
    dual = b.sheaf.dual()
    if dual.forms != isinstance(s, DifferentialForm):
        raise TypeError(f"section does not live in {dual}")
    if not s.is_zero() and not dual.contains(s):
        raise ValueError(f"section is not in H^0({dual})")
    return serre_pairing(b.cocycle, s, b.cover)


def forget_twist(b: CechOneClass, E: Divisor) -> CechOneClass:
    """Image of b under H^1(O(E')) -> H^1(O(E)) for E' <= E."""
    if not (E - b.sheaf.E).is_effective():
        raise ValueError("target twist must dominate the source twist")
    target = Sheaf(b.sheaf.curve, E, b.sheaf.forms)
    return CechOneClass(target, b.cover, b.cocycle, functional_coordinates(b.cocycle, target, b.cover))


def h0_pairing_map(b: CechOneClass, A: Divisor) -> list[list[Fraction]]:
    """Matrix of s -> [s b] from H^0(O(A)) to H^1(O), b in H^1(O(-A)).

    Entry (j, i) pairs the i-th basis section of L(A) against the j-th
    holomorphic form.
    """
    curve = b.sheaf.curve
    if b.sheaf.forms or b.sheaf.E != -A:
        raise ValueError("class must lie in H^1(O(-A))")
    sections = rr_space_basis(curve, A).basis
    omegas = form_space_basis(curve, Divisor())
    return [[serre_pairing(b.cocycle * s, w, b.cover) for s in sections] for w in omegas]


def random_combination(rng: random.Random, k: int, num=(-9, 9), den=(1, 9), nonzero: bool = True) -> list[Fraction]:
    """Small-height rational coordinates."""
    if k == 0:
        return []
    while True:
        v = [Fraction(rng.randint(*num), rng.randint(*den)) for _ in range(k)]
        if not nonzero or any(v):
            return v


# ---------------------------------------------------------------------------
# line bundles O(A) with chart frames
# ---------------------------------------------------------------------------

def _frame_atoms(curve: CurveModel, points) -> list[FunctionFieldElement]:
    xs = sorted({P.x for P in points if not P.is_infinite})
    atoms = [curve.x - x0 for x0 in xs]
    if curve.odd:
        atoms.append(curve.y)
    return atoms


def find_frame(curve: CurveModel, A: Divisor, excluded, bound: int | None = None) -> FunctionFieldElement | None:
    """A function e with div(e) + A supported on ``excluded`` (a frame of O(A) off it).

    Searches products of the atoms x - x0 (x0 running over the relevant
    x-coordinates) and y, with exponents in [-bound, bound].
    """
    excluded = set(excluded)
    pts = set(A.support) | excluded
    atoms = _frame_atoms(curve, [P for P in pts if isinstance(P, CurvePoint)])
    divs = [principal_divisor(a) for a in atoms]
    if bound is None:
        bound = max(3, abs(A.degree) + 2)
    rng = range(-bound, bound + 1)
    best = None
    for exps in itertools.product(rng, repeat=len(atoms)):
        total = A
        for e, d in zip(exps, divs):
            if e:
                total = total + e * d
        if all(P in excluded for P in total.support):
            cost = sum(abs(e) for e in exps)
            if best is None or cost < best[0]:
                best = (cost, exps)
    if best is None:
        return None
    out = curve.one()
    for e, a in zip(best[1], atoms):
        if e:
            out = out * a ** e
    return out


@dataclass(frozen=True)
class LineBundleData:
    """L = O(A) with frames triv_k: div(triv_k) + A vanishes on U_k.

    Local coordinates of a section s are c_k * s with c_k = 1/triv_k, and the
    transition function is c_01 = c_0/c_1.
    """

    curve: CurveModel
    A: Divisor
    cover: ChartCover
    triv0: FunctionFieldElement
    triv1: FunctionFieldElement

    def __post_init__(self):
        outside = set(self.cover.B) | set(self.cover.Bp)
        for P in list(self.A.support) + self.curve.infinity_points:
            if P not in outside:
                raise ValueError(f"{P} must be excluded from one chart")
        for k, e in ((0, self.triv0), (1, self.triv1)):
            if e.is_zero():
                raise ValueError("frame must be nonzero")
            div = principal_divisor(e) + self.A
            bad = [P for P in div.support if self.cover.in_chart(P, k)]
            if bad:
                raise ValueError(f"frame {k} does not trivialize O(A) on its chart (fails at {bad[0]})")

    @classmethod
    def with_found_frames(cls, curve: CurveModel, A: Divisor, cover: ChartCover) -> "LineBundleData":
        e0 = find_frame(curve, A, cover.B)
        e1 = find_frame(curve, A, cover.Bp)
        if e0 is None or e1 is None:
            raise ValueError("no rational frame found for this cover; supply frames explicitly")
        return cls(curve, A, cover, e0, e1)

    def frame(self, k: int) -> FunctionFieldElement:
        return self.triv0 if k == 0 else self.triv1

    def c(self, k: int) -> FunctionFieldElement:
        return self.frame(k).inverse()

    @property
    def c01(self) -> FunctionFieldElement:
        return self.triv1 / self.triv0

    @property
    def degree(self) -> int:
        return self.A.degree

    def marked_divisor(self, points) -> Divisor:
        return Divisor({P: 1 for P in points})
