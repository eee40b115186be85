"""Parabolic lambda-connections in the adapted frames of the normal form.

On chart U_k the connection is lambda*d + A_k with A_k = [[alpha, beta],
[gamma, delta]] acting on column coordinates; the flag at each t_i is the
second frame vector. The frames glue by M = [[1, b], [0, c]] on the
overlap, where c = c_01 is the transition function of L and b = m * triv_1
for the global cocycle m of the extension class.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cohomology import (
    CechOneClass,
    LineBundleData,
    RRBasis,
    Sheaf,
    functional_coordinates,
    rr_space_basis,
)
from .curve import CurveModel, CurvePoint, DifferentialForm, Divisor, FunctionFieldElement, form_valuation, poles, residue
from .errors import InvalidConnectionError, PreconditionError
from .exact import ZERO, reduce_mod_subspace, rref, solve_linear, to_scalar
from .parabolic import ExponentData, ParabolicBundleData


# ---------------------------------------------------------------------------
# forms with prescribed simple poles
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=256)
def _form_with_residues(curve: CurveModel, items: tuple) -> DifferentialForm:
    pts = [P for P, _ in items]
    basis = rr_space_basis(curve, curve.canonical_K0() + Divisor({P: 1 for P in pts})).basis
    forms = [DifferentialForm.from_dxy(r) for r in basis]
    rows = [[residue(w, P) for w in forms] for P in pts]
    rhs = [r for _, r in items]
    sol = solve_linear(rows, rhs)
    if not sol.consistent:
        raise PreconditionError("residues must sum to zero")
    coeffs = sol.particular
    if sol.kernel_basis:
        red, piv = rref(list(sol.kernel_basis))
        coeffs = reduce_mod_subspace(coeffs, red, piv)
    out = DifferentialForm(curve.zero())
    for c, w in zip(coeffs, forms):
        if c != 0:
            out = out + w * c
    return out


def form_with_residues(curve: CurveModel, residues: dict) -> DifferentialForm:
    """The canonical form with simple poles at the given rational points
    carrying the given residues, holomorphic elsewhere (defined up to a
    holomorphic form; fixed by reduction against the echelon basis)."""
    items = tuple(sorted(((P, to_scalar(r)) for P, r in residues.items() if r != 0), key=lambda t: t[0].sort_key()))
    if sum((r for _, r in items), ZERO) != 0:
        raise PreconditionError("residues must sum to zero")
    if not items:
        return DifferentialForm(curve.zero())
    return _form_with_residues(curve, items)


# ---------------------------------------------------------------------------
# the trace connection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineConnectionData:
    """nabla_L = lam*d + omega_k on U_k in the frame triv_k."""

    bundle: LineBundleData
    marked_points: tuple[CurvePoint, ...]
    Omega: DifferentialForm
    omega0: DifferentialForm
    omega1: DifferentialForm
    lam: Fraction = Fraction(1)

    def omega(self, k: int) -> DifferentialForm:
        return self.omega0 if k == 0 else self.omega1

    def check(self) -> list[tuple[str, bool, str]]:
        """Gluing identity lam*dc + c*omega0 = c*omega1 and regularity on each chart."""
        c = self.bundle.c01
        out = []
        glue = (c.d() * self.lam + self.omega0 * c - self.omega1 * c).is_zero() if self.lam else \
            (self.omega0 - self.omega1).is_zero()
        out.append(("line-compatibility", glue, ""))
        for k in (0, 1):
            ok = _poles_allowed(self.omega(k), self.bundle.cover.excluded(k), self.marked_points, 1)
            out.append((f"line-poles[{k}]", ok, ""))
        return out


def build_line_connection(bundle: LineBundleData, trace_residues: Sequence, marked_points: Sequence[CurvePoint],
                          lam=1) -> LineConnectionData:
    """Omega with residues tr_i at t_i and lam*mult at supp(A); omega_k = Omega + lam*d(triv_k)/triv_k."""
    lam = to_scalar(lam)
    marked_points = tuple(marked_points)
    tr = [to_scalar(r) for r in trace_residues]
    if len(tr) != len(marked_points):
        raise PreconditionError("one trace residue per marked point")
    if sum(tr, ZERO) != -lam * bundle.A.degree:
        raise PreconditionError(f"trace residues sum to {sum(tr, ZERO)}, expected {-lam * bundle.A.degree}")
    res: dict = {}
    for t, r in zip(marked_points, tr):
        res[t] = res.get(t, ZERO) + r
    for P, mult in bundle.A.items():
        res[P] = res.get(P, ZERO) + lam * mult
    Omega = form_with_residues(bundle.curve, res)
    omegas = []
    for k in (0, 1):
        e = bundle.frame(k)
        omegas.append(Omega + (e.d() / e) * lam if lam else Omega)
    return LineConnectionData(bundle, marked_points, Omega, omegas[0], omegas[1], lam)


# ---------------------------------------------------------------------------
# connection data
# ---------------------------------------------------------------------------

Matrix = tuple[tuple[DifferentialForm, DifferentialForm], tuple[DifferentialForm, DifferentialForm]]


@dataclass(frozen=True)
class ConnectionData:
    pb: ParabolicBundleData
    A0: Matrix
    A1: Matrix
    lam: Fraction
    exponents: ExponentData

    def chart(self, k: int) -> Matrix:
        return self.A0 if k == 0 else self.A1

    @property
    def curve(self) -> CurveModel:
        return self.pb.bundle.curve

    @property
    def b(self) -> FunctionFieldElement:
        """Upper-right transition entry."""
        return self.pb.bprime.cocycle * self.pb.bundle.triv1

    @property
    def c(self) -> FunctionFieldElement:
        return self.pb.bundle.c01

    def alpha(self, k): return self.chart(k)[0][0]
    def beta(self, k): return self.chart(k)[0][1]
    def gamma(self, k): return self.chart(k)[1][0]
    def delta(self, k): return self.chart(k)[1][1]

    def scaled(self, s) -> "ConnectionData":
        """(lam, A) -> (s*lam, s*A); exponents unchanged."""
        s = to_scalar(s)
        sc = lambda M: tuple(tuple(w * s for w in row) for row in M)  # noqa: E731
        return ConnectionData(self.pb, sc(self.A0), sc(self.A1), self.lam * s, self.exponents)


def _poles_allowed(w: DifferentialForm, excluded, marked, max_order: int) -> bool:
    """Poles only at excluded places, plus order <= max_order at marked points."""
    if w.is_zero():
        return True
    excl = set(excluded)
    marked = set(marked)
    for P in poles(w):
        if P in excl:
            continue
        if P in marked and form_valuation(w, P) >= -max_order:
            continue
        return False
    return True


@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def failures(self) -> list[str]:
        return [name for name, ok, _ in self.checks if not ok]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [{"name": n, "ok": ok, **({"detail": d} if d else {})} for n, ok, d in self.checks]}


def validate_connection(c: ConnectionData, lc: LineConnectionData) -> ValidationReport:
    """Check gluing, residues, trace and pole orders as exact identities."""
    rep = ValidationReport()
    lam = c.lam
    b, cc = c.b, c.c
    a0, b0, g0, d0 = c.alpha(0), c.beta(0), c.gamma(0), c.delta(0)
    a1, b1, g1, d1 = c.alpha(1), c.beta(1), c.gamma(1), c.delta(1)
    db = b.d() * lam if lam else None
    dc = cc.d() * lam if lam else None
    e11 = a0 - (a1 + g1 * b)
    e12 = a0 * b + b0 * cc - (b1 + d1 * b)
    if db is not None:
        e12 = e12 + db
    e21 = g0 - g1 * cc
    e22 = g0 * b + d0 * cc - d1 * cc
    if dc is not None:
        e22 = e22 + dc
    for name, e in (("compatibility[alpha]", e11), ("compatibility[beta]", e12),
                    ("compatibility[gamma]", e21), ("compatibility[delta]", e22)):
        rep.add(name, e.is_zero())
    lc_lam = lc.lam
    for k in (0, 1):
        trace = c.alpha(k) + c.delta(k)
        if lc_lam == 1:
            expected = lc.omega(k) * lam
        else:
            raise PreconditionError("trace connection must be a connection (lam = 1)")
        rep.add(f"trace[{k}]", (trace - expected).is_zero())
    pts = c.pb.marked_points
    nu = c.exponents
    for k in (0, 1):
        excl = c.pb.bundle.cover.excluded(k)
        for i, t in enumerate(pts):
            rr = residue_matrix(c, k, i)
            want = ((lam * nu.nu_minus[i], ZERO), (None, lam * nu.nu_plus[i]))
            ok = rr[0][0] == want[0][0] and rr[0][1] == 0 and rr[1][1] == want[1][1]
            rep.add(f"residue[{k}][t{i}]", ok, "" if ok else f"got {[[str(a) for a in row] for row in rr]}")
        for name, w in (("alpha", c.alpha(k)), ("beta", c.beta(k)), ("gamma", c.gamma(k)), ("delta", c.delta(k))):
            rep.add(f"poles[{k}][{name}]", _poles_allowed(w, excl, pts, 1))
    from .curve import valuation
    rep.add("transition-vanishes-on-D", all(valuation(b, t) >= 1 for t in pts))
    return rep


def residue_matrix(c: ConnectionData, k: int, i: int):
    t = c.pb.marked_points[i]
    M = c.chart(k)
    return tuple(tuple(residue(w, t) for w in row) for row in M)


def local_exponents(c: ConnectionData, i: int) -> tuple[Fraction, Fraction]:
    """(flag eigenvalue, other eigenvalue) of the residue at t_i, i.e. lam*(nu+, nu-)."""
    r = residue_matrix(c, 0, i)
    if r[0][1] != 0:
        raise InvalidConnectionError("residue is not lower triangular in the adapted frame")
    return r[1][1], r[0][0]


# ---------------------------------------------------------------------------
# App and Bun
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectiveClass:
    """A nonzero vector up to scaling, normalized so the first nonzero entry is 1."""

    coords: tuple[Fraction, ...]

    @classmethod
    def of(cls, v: Sequence) -> "ProjectiveClass":
        v = [to_scalar(a) for a in v]
        lead = next((a for a in v if a != 0), None)
        if lead is None:
            raise ValueError("zero vector has no projective class")
        return cls(tuple(a / lead for a in v))


def gamma_space(bundle: LineBundleData, marked_points) -> RRBasis:
    """rho-basis of H^0(L (x) Omega^1(D)): forms gamma = rho dx/y with div + A + D >= 0."""
    D = bundle.marked_divisor(marked_points)
    return rr_space_basis(bundle.curve, bundle.A + D + bundle.curve.canonical_K0())


def gamma_coordinates(gamma: DifferentialForm, bundle: LineBundleData, marked_points) -> tuple[Fraction, ...]:
    return gamma_space(bundle, marked_points).coordinates(gamma.dxy_coefficient())


def global_gamma(c: ConnectionData) -> DifferentialForm:
    """gamma_0/c_0, the section of L (x) Omega^1(D) behind App."""
    return c.gamma(0) * c.pb.bundle.triv0


def app_map(c: ConnectionData) -> ProjectiveClass:
    g = global_gamma(c)
    if g.is_zero():
        raise InvalidConnectionError("App is undefined: the subbundle O is invariant")
    return ProjectiveClass.of(gamma_coordinates(g, c.pb.bundle, c.pb.marked_points))


def bun_map(c: ConnectionData) -> ParabolicBundleData:
    return c.pb


def bundle_class(pb: ParabolicBundleData) -> ProjectiveClass:
    """Projective class of the extension, read off its functional coordinates."""
    b = pb.bprime
    return ProjectiveClass.of(functional_coordinates(b.cocycle, b.sheaf, b.cover))


def extension_sheaf(bundle: LineBundleData, marked_points) -> Sheaf:
    return Sheaf(bundle.curve, -bundle.A - bundle.marked_divisor(marked_points))


def make_parabolic_bundle(bundle: LineBundleData, marked_points, m: FunctionFieldElement) -> ParabolicBundleData:
    sheaf = extension_sheaf(bundle, marked_points)
    return ParabolicBundleData(CechOneClass.from_cocycle(m, sheaf, bundle.cover), bundle, tuple(marked_points))
