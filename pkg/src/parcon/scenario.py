"""Scenarios: a curve, a cover, L = O(A), marked points, exponents and weights.

Also the sampling and round-trip drivers used by the command line.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from fractions import Fraction

from .cohomology import (
    ChartCover,
    CechOneClass,
    LineBundleData,
    Sheaf,
    combine_classes,
    cup_pair,
    h1_basis,
    h1_dim,
    random_combination,
)
from .connection import (
    ConnectionData,
    LineConnectionData,
    ProjectiveClass,
    app_map,
    build_line_connection,
    bun_map,
    bundle_class,
    extension_sheaf,
    gamma_space,
)
from .curve import CurveModel, CurvePoint, DifferentialForm, Divisor
from .errors import PreconditionError, UnsupportedRegimeError
from .exact import ZERO
from .parabolic import ExponentData, ParabolicBundleData, Weights, fuchs_check, moduli_dimensions, v0_membership
from .serialize import (
    SchemaError,
    curve_from_json,
    curve_to_json,
    divisor_from_json,
    divisor_to_json,
    element_from_json,
    element_to_json,
    field,
    form_from_json,
    form_to_json,
    pairs_from_json,
    pairs_to_json,
    parse_int,
    parse_list,
    parse_q,
    point_from_json,
    point_to_json,
    q,
    vector_from_json,
    vector_to_json,
)


@dataclass(frozen=True)
class Scenario:
    curve: CurveModel
    cover: ChartCover
    bundle: LineBundleData
    marked_points: tuple[CurvePoint, ...]
    nu: ExponentData
    weights: Weights | None = None
    seed: int = 0
    gamma_coords: tuple[Fraction, ...] | None = None
    bprime_coords: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        g = self.curve.genus
        if g < 2:
            raise SchemaError("curve.f", "genus must be at least 2")
        if not self.marked_points:
            raise SchemaError("t", "at least one marked point is required")
        if len(set(self.marked_points)) != len(self.marked_points):
            raise SchemaError("t", "marked points must be distinct")
        for i, t in enumerate(self.marked_points):
            if t.is_infinite or t.y == 0:
                raise SchemaError(f"t[{i}]", "marked points must be affine and non-Weierstrass")
            if not self.cover.in_overlap(t):
                raise SchemaError(f"t[{i}]", "marked points must lie in both charts")
            if t in self.bundle.A.support:
                raise SchemaError(f"t[{i}]", "marked points must avoid supp(A)")
        if self.bundle.A.degree != 2 * g - 1:
            raise SchemaError("A", f"deg A must be 2g-1 = {2 * g - 1}, got {self.bundle.A.degree}")
        if self.nu.n != len(self.marked_points):
            raise SchemaError("nu", "one exponent pair per marked point")
        if not fuchs_check(self.nu):
            raise SchemaError("nu", f"exponents sum to {self.nu.total}, expected {-self.nu.degree}")
        if self.weights is not None and len(self.weights.alpha) != len(self.marked_points):
            raise SchemaError("weights", "one weight pair per marked point")

    # -- derived data ------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.marked_points)

    @property
    def D(self) -> Divisor:
        return self.bundle.marked_divisor(self.marked_points)

    @functools.cached_property
    def lc(self) -> LineConnectionData:
        return build_line_connection(self.bundle, self.nu.trace_residues(), self.marked_points)

    @functools.cached_property
    def gamma_basis(self):
        return gamma_space(self.bundle, self.marked_points)

    @property
    def extension_sheaf(self) -> Sheaf:
        return extension_sheaf(self.bundle, self.marked_points)

    @functools.cached_property
    def bprime_basis(self) -> tuple[CechOneClass, ...]:
        return h1_basis(self.extension_sheaf, self.cover)

    def gamma_from(self, coords) -> DifferentialForm:
        return DifferentialForm.from_dxy(self.gamma_basis.combine(list(coords)))

    def pb_from(self, coords) -> ParabolicBundleData:
        return ParabolicBundleData(combine_classes(self.bprime_basis, list(coords)), self.bundle, self.marked_points)

    def require_supported(self):
        if sum(self.nu.nu_minus, ZERO) == 0:
            raise UnsupportedRegimeError("sum of nu- is zero: the inverse map is not supported in this regime")

    def require_stability_weights(self):
        if self.weights is None:
            raise SchemaError("weights", "weights are required")
        if self.weights.total_w >= 1:
            raise PreconditionError("sum of weight gaps must be < 1")

    def info(self) -> dict:
        g, n = self.curve.genus, self.n
        dims = moduli_dimensions(g, n)
        return {
            "genus": g,
            "n": n,
            "degree": self.bundle.A.degree,
            "moduli_dimensions": dims._asdict(),
            "h0_L": len(self.bundle_sections()),
            "h1_Linv": h1_dim(self.curve, -self.bundle.A),
            "h0_L_omega_D": len(self.gamma_basis),
            "h1_Linv_minus_D": h1_dim(self.curve, -self.bundle.A - self.D),
            "target_identity": {
                "lhs": (3 * g - 3 + n) + (3 * g + n - 3),
                "rhs": 6 * g + 2 * n - 6,
                "holds": (3 * g - 3 + n) + (3 * g + n - 3) == 6 * g + 2 * n - 6,
            },
        }

    def bundle_sections(self):
        from .cohomology import rr_space_basis

        return rr_space_basis(self.curve, self.bundle.A).basis

    # -- json --------------------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "curve": curve_to_json(self.curve),
            "cover": {"B": [point_to_json(P) for P in self.cover.B], "Bp": [point_to_json(P) for P in self.cover.Bp]},
            "A": divisor_to_json(self.bundle.A),
            "frames": {"triv0": element_to_json(self.bundle.triv0), "triv1": element_to_json(self.bundle.triv1)},
            "t": [point_to_json(P) for P in self.marked_points],
            "nu": pairs_to_json(self.nu.nu),
            "seed": self.seed,
        }
        if self.weights is not None:
            out["weights"] = pairs_to_json(self.weights.alpha)
        if self.gamma_coords is not None:
            out["gamma"] = vector_to_json(self.gamma_coords)
        if self.bprime_coords is not None:
            out["bprime"] = vector_to_json(self.bprime_coords)
        return out

    @classmethod
    def from_json(cls, v) -> "Scenario":
        if not isinstance(v, dict):
            raise SchemaError("", "scenario must be a JSON object")
        curve = curve_from_json(field(v, "curve", ""), "curve")
        cov = field(v, "cover", "")
        B = [point_from_json(curve, p, f"cover.B[{i}]") for i, p in enumerate(parse_list(field(cov, "B", "cover"), "cover.B"))]
        Bp = [point_from_json(curve, p, f"cover.Bp[{i}]") for i, p in enumerate(parse_list(field(cov, "Bp", "cover"), "cover.Bp"))]
        try:
            cover = ChartCover(tuple(B), tuple(Bp))
        except ValueError as exc:
            raise SchemaError("cover", str(exc)) from None
        A = divisor_from_json(curve, field(v, "A", ""), "A")
        frames = field(v, "frames", "", required=False)
        try:
            if frames is None:
                bundle = LineBundleData.with_found_frames(curve, A, cover)
            else:
                e0 = element_from_json(curve, field(frames, "triv0", "frames"), "frames.triv0")
                e1 = element_from_json(curve, field(frames, "triv1", "frames"), "frames.triv1")
                bundle = LineBundleData(curve, A, cover, e0, e1)
        except ValueError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError("frames" if frames is not None else "cover", str(exc)) from None
        pts = tuple(point_from_json(curve, p, f"t[{i}]") for i, p in enumerate(parse_list(field(v, "t", ""), "t")))
        nu_pairs = pairs_from_json(field(v, "nu", ""), "nu")
        nu = ExponentData(tuple(nu_pairs), 1, A.degree)
        weights = None
        w = field(v, "weights", "", required=False)
        if w is not None:
            try:
                weights = Weights(tuple(pairs_from_json(w, "weights")))
            except ValueError as exc:
                if isinstance(exc, SchemaError):
                    raise
                raise SchemaError("weights", str(exc)) from None
        seed = field(v, "seed", "", required=False)
        seed = 0 if seed is None else parse_int(seed, "seed")
        gc = field(v, "gamma", "", required=False)
        bc = field(v, "bprime", "", required=False)
        return cls(curve, cover, bundle, pts, nu, weights, seed,
                   tuple(vector_from_json(gc, "gamma")) if gc is not None else None,
                   tuple(vector_from_json(bc, "bprime")) if bc is not None else None)


# ---------------------------------------------------------------------------
# reference scenarios on y^2 = x^5 - x + 1
# ---------------------------------------------------------------------------

REFERENCE_F = (1, -1, 0, 0, 0, 1)


@functools.lru_cache(maxsize=8)
def reference_scenario(n: int = 1) -> Scenario:
    """A = 3*(0,-1), U0 = C - {(0,-1)}, U1 = C - {(0,1), inf}; frames 1 and x^-3."""
    curve = CurveModel(REFERENCE_F)
    P, Q = curve.point(0, 1), curve.point(0, -1)
    inf = CurvePoint.infinity(0)
    cover = ChartCover((Q,), (P, inf))
    A = Divisor({Q: 3})
    bundle = LineBundleData(curve, A, cover, curve.one(), curve.x ** -3)
    if n == 1:
        pts = (curve.point(1, 1),)
        nu = ExponentData(((-1, -2),), 1, 3)
        w = Weights(((Fraction(1, 10), Fraction(2, 10)),))
    elif n == 2:
        pts = (curve.point(1, 1), curve.point(-1, 1))
        nu = ExponentData(((Fraction(1, 2), Fraction(-3, 2)), (-1, -1)), 1, 3)
        w = Weights(((Fraction(1, 10), Fraction(2, 10)), (Fraction(1, 10), Fraction(2, 10))))
    else:
        raise ValueError("reference scenarios exist for n = 1 and n = 2")
    return Scenario(curve, cover, bundle, pts, nu, w)


# ---------------------------------------------------------------------------
# sampling and round trips
# ---------------------------------------------------------------------------

@dataclass
class SampleCounts:
    sigma_hits: int = 0
    non_v0_hits: int = 0


def sample_admissible(sc: Scenario, rng: random.Random, counts: SampleCounts):
    """Draw (gamma coords, b' coords) off Sigma and inside V0; resample otherwise."""
    while True:
        bc = random_combination(rng, len(sc.bprime_basis))
        gc = random_combination(rng, len(sc.gamma_basis))
        pb = sc.pb_from(bc)
        if not v0_membership(pb):
            counts.non_v0_hits += 1
            continue
        gamma = sc.gamma_from(gc)
        pairing = cup_pair(gamma, pb.bprime)
        if pairing == 0:
            counts.sigma_hits += 1
            continue
        return gc, bc, gamma, pb, pairing


def connection_to_json(c: ConnectionData) -> dict:
    charts = []
    for k in (0, 1):
        M = c.chart(k)
        charts.append({"alpha": form_to_json(M[0][0]), "beta": form_to_json(M[0][1]),
                       "gamma": form_to_json(M[1][0]), "delta": form_to_json(M[1][1])})
    return {
        "lambda": q(c.lam),
        "transition": {"b": element_to_json(c.b), "c": element_to_json(c.c)},
        "charts": charts,
        "nu": pairs_to_json(c.exponents.nu),
    }


def connection_from_json(sc: Scenario, v, path: str = "matrices") -> ConnectionData:
    """Inverse of :func:`connection_to_json` relative to a scenario."""
    from .connection import make_parabolic_bundle

    curve = sc.curve
    lam = parse_q(field(v, "lambda", path), f"{path}.lambda")
    tr = field(v, "transition", path)
    b = element_from_json(curve, field(tr, "b", f"{path}.transition"), f"{path}.transition.b")
    m = b / sc.bundle.triv1
    try:
        pb = make_parabolic_bundle(sc.bundle, sc.marked_points, m)
    except ValueError as exc:
        raise SchemaError(f"{path}.transition.b", str(exc)) from None
    charts = parse_list(field(v, "charts", path), f"{path}.charts")
    if len(charts) != 2:
        raise SchemaError(f"{path}.charts", "expected two charts")
    mats = []
    for k, ch in enumerate(charts):
        p = f"{path}.charts[{k}]"
        e = {name: form_from_json(curve, field(ch, name, p), f"{p}.{name}") for name in ("alpha", "beta", "gamma", "delta")}
        mats.append(((e["alpha"], e["beta"]), (e["gamma"], e["delta"])))
    nu = ExponentData(sc.nu.nu, 1, sc.nu.degree)
    return ConnectionData(pb, mats[0], mats[1], lam, nu)


def roundtrip(sc: Scenario, samples: int, seed: int | None = None) -> dict:
    """Sample admissible pairs, invert App x Bun and compare the classes."""
    from .reconstruct import invert_app_bun

    sc.require_supported()
    sc.require_stability_weights()
    rng = random.Random(sc.seed if seed is None else seed)
    counts = SampleCounts()
    results = []
    passed = 0
    for i in range(samples):
        gc, bc, gamma, pb, pairing = sample_admissible(sc, rng, counts)
        entry = {"index": i, "gamma": vector_to_json(gc), "bprime": vector_to_json(bc), "pairing": q(pairing)}
        try:
            conn = invert_app_bun(gamma, pb, sc.nu, sc.lc)
            app_ok = app_map(conn) == ProjectiveClass.of(gc)
            bun_ok = bundle_class(bun_map(conn)) == bundle_class(pb)
            entry.update({"lambda": q(conn.lam), "app_ok": app_ok, "bun_ok": bun_ok})
            ok = app_ok and bun_ok and conn.lam == 1
        except Exception as exc:  # report, do not hide
            entry["error"] = f"{type(exc).__name__}: {exc}"
            ok = False
            conn = None
        entry["ok"] = ok
        if not ok:
            entry["state"] = {"scenario": sc.to_json(), "connection": connection_to_json(conn) if conn else None}
        passed += ok
        results.append(entry)
    return {
        "samples": samples,
        "passed": passed,
        "sigma_hits": counts.sigma_hits,
        "non_v0_hits": counts.non_v0_hits,
        "results": results,
    }
