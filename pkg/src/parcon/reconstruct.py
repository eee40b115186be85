"""Rebuild the parabolic lambda-connection with prescribed App and Bun.

Input: gamma in H^0(L (x) Omega^1(D)) and the extension class b' in
H^1(L^-1(-D)). The output is the unique lam and lambda-connection in the
adapted frames (see ``connection``). The four steps:

1. gamma_k = c_k * gamma.
2. alpha_k = lam * alpha0_k + alpha~_k where alpha0_k are reference forms
   with residues nu- at the marked points, lam makes m*gamma - lam*(alpha0_0 -
   alpha0_1) a coboundary in Omega^1 and alpha~ splits it.
3. delta_k = lam * omega_k - alpha_k.
4. A global form zeta corrects alpha and delta so that the upper-right
   gluing cocycle becomes a coboundary in L^-1 (x) Omega^1; its (unique)
   splitting gives beta.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from fractions import Fraction

from .cohomology import (
    Sheaf,
    cup_pair,
    form_space_basis,
    h0_pairing_map,
    forget_twist,
    residue_sum_functional,
    rr_space_basis,
    serre_pairing,
    split_cocycle,
)
from .connection import (
    ConnectionData,
    LineConnectionData,
    ValidationReport,
    form_with_residues,
    validate_connection,
)
from .curve import DifferentialForm, Divisor
from .errors import InternalConsistencyError, NotInvertibleError, PreconditionError, UnsupportedRegimeError
from .exact import ZERO, det, solve_linear
from .parabolic import ExponentData, ParabolicBundleData


@dataclass(frozen=True)
class ReconstructionResult:
    lam: Fraction
    connection: ConnectionData
    zeta: DifferentialForm
    certificates: ValidationReport | None
    alpha_tilde: tuple[DifferentialForm, DifferentialForm]


def reference_forms(pb: ParabolicBundleData, nu: ExponentData) -> tuple[DifferentialForm, DifferentialForm]:
    """alpha0_k: residue nu-_i at t_i, balanced at the first point of the complement of U_k."""
    return _reference_forms(pb.bundle.curve, pb.bundle.cover, pb.marked_points, nu.nu_minus)


@functools.lru_cache(maxsize=64)
def _reference_forms(curve, cover, pts, nu_minus):
    total = sum(nu_minus, ZERO)
    out = []
    for k in (0, 1):
        res = {t: r for t, r in zip(pts, nu_minus)}
        anchor = cover.excluded(k)[0]
        res[anchor] = res.get(anchor, ZERO) - total
        out.append(form_with_residues(curve, res))
    return tuple(out)


def _check_exponents(pb: ParabolicBundleData, nu: ExponentData):
    if nu.n != len(pb.marked_points):
        raise PreconditionError("one exponent pair per marked point")
    if sum(nu.nu_minus, ZERO) == 0:
        raise UnsupportedRegimeError("sum of nu- vanishes; this regime is not supported")
    if nu.total != -pb.bundle.A.degree:
        raise PreconditionError("exponents violate the Fuchs relation for deg L")


def lambda_value(gamma: DifferentialForm, pb: ParabolicBundleData, nu: ExponentData) -> Fraction:
    """The ratio F(m gamma) / F(alpha0_0 - alpha0_1) of residue sums over B."""
    _check_exponents(pb, nu)
    a0, a1 = reference_forms(pb, nu)
    cover = pb.bundle.cover
    den = residue_sum_functional(a0 - a1, cover)
    if den == 0:
        raise InternalConsistencyError("reference cocycle has zero functional")
    num = residue_sum_functional(gamma * pb.bprime.cocycle, cover)
    return num / den


def _zeta_system(pb: ParabolicBundleData):
    curve = pb.bundle.curve
    A = pb.bundle.A
    sigmas = rr_space_basis(curve, A).basis
    omegas = form_space_basis(curve, Divisor())
    m = pb.bprime.cocycle
    cover = pb.bundle.cover
    mat = [[serre_pairing(m * 2 * w, s, cover) for w in omegas] for s in sigmas]
    return sigmas, omegas, mat


def reconstruct(gamma: DifferentialForm, pb: ParabolicBundleData, nu: ExponentData, lc: LineConnectionData, *,
                rng: random.Random | None = None, pin: bool = True, check: bool = True,
                check_preconditions: bool = True) -> ReconstructionResult:
    """Steps 1-4. ``rng`` permutes pivot choices inside the splittings and
    ``pin`` canonicalizes the intermediate alpha~; neither changes the output."""
    bundle = pb.bundle
    curve, cover = bundle.curve, bundle.cover
    if gamma.is_zero():
        raise PreconditionError("gamma must be nonzero")
    _check_exponents(pb, nu)
    D = bundle.marked_divisor(pb.marked_points)
    if check_preconditions:
        if not Sheaf(curve, bundle.A + D, forms=True).contains(gamma):
            raise PreconditionError("gamma is not a section of L (x) Omega^1(D)")
        if det(h0_pairing_map(forget_twist(pb.bprime, -bundle.A), bundle.A)) == 0:
            raise PreconditionError("parabolic bundle is outside V0")
    m = pb.bprime.cocycle
    e0, e1 = bundle.triv0, bundle.triv1

    # step 1
    g0, g1 = gamma / e0, gamma / e1

    # step 2
    lam = lambda_value(gamma, pb, nu)
    ref0, ref1 = reference_forms(pb, nu)
    mg = gamma * m
    w = mg - (ref0 - ref1) * lam if lam else mg
    omega_sheaf = Sheaf(curve, Divisor(), forms=True)
    sp = split_cocycle(w, omega_sheaf, cover, rng=rng, canonical=pin)
    if not sp.ok:
        raise InternalConsistencyError(f"alpha cocycle is not a coboundary: {sp.obstruction}")
    at0, at1 = sp.g0, sp.g1
    al0 = ref0 * lam + at0 if lam else at0
    al1 = ref1 * lam + at1 if lam else at1

    # step 3
    de0 = lc.omega0 * lam - al0
    de1 = lc.omega1 * lam - al1

    # step 4
    b = m * e1
    c1 = e1.inverse()
    r = (al0 - de1) * m
    if lam:
        r = r + b.d() * c1 * lam
    r = -r
    sigmas, omegas, mat = _zeta_system(pb)
    rhs = [serre_pairing(r, s, cover) for s in sigmas]
    sol = solve_linear(mat, rhs)
    if not sol.consistent or sol.kernel_basis:
        raise NotInvertibleError("cup product H^0(L) -> H^1(O) is not an isomorphism")
    zeta = DifferentialForm(curve.zero())
    for z, wj in zip(sol.particular, omegas):
        if z != 0:
            zeta = zeta + wj * z
    al0, al1 = al0 + zeta, al1 + zeta
    de0, de1 = de0 - zeta, de1 - zeta
    r = r - zeta * m * 2
    beta_sheaf = Sheaf(curve, -bundle.A, forms=True)
    sp = split_cocycle(r, beta_sheaf, cover, rng=rng, canonical=True)
    if not sp.ok:
        raise InternalConsistencyError(f"beta cocycle is not a coboundary: {sp.obstruction}")
    be0, be1 = sp.g0 * e0, sp.g1 * e1

    conn = ConnectionData(pb, ((al0, be0), (g0, de0)), ((al1, be1), (g1, de1)), lam, nu)
    cert = validate_connection(conn, lc) if check else None
    if cert is not None and not cert.ok:
        raise InternalConsistencyError(f"reconstructed connection fails {cert.failures}")
    return ReconstructionResult(lam, conn, zeta, cert, (at0, at1))


def sigma_test(gamma: DifferentialForm, bprime) -> bool:
    """True iff the pair lies on the degeneracy locus (cup product zero)."""
    return cup_pair(gamma, bprime) == 0


def invert_app_bun(gamma: DifferentialForm, pb: ParabolicBundleData, nu: ExponentData, lc: LineConnectionData, *,
                   rng: random.Random | None = None, check: bool = True) -> ConnectionData:
    """The connection (lam = 1) with App = [gamma] and Bun = pb."""
    lam = lambda_value(gamma, pb, nu)
    if lam == 0:
        raise NotInvertibleError("pair lies on the degeneracy locus: cup product vanishes")
    res = reconstruct(gamma * (1 / lam), pb, nu, lc, rng=rng, check=check)
    if res.lam != 1:
        raise InternalConsistencyError(f"normalized run gave lam = {res.lam}")
    return res.connection
