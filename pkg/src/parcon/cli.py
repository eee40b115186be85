"""Command-line workbench.

Exit codes: 0 success, 1 a checked assertion failed, 2 bad input or an
unmet precondition.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .cohomology import Sheaf, h1_basis, h1_dim, rr_space_basis
from .connection import validate_connection
from .curve import DifferentialForm
from .errors import InternalConsistencyError, PreconditionError
from .parabolic import ExponentData, fuchs_check, moduli_dimensions, pairing_matrix_for, resonance_check, v0_membership
from .scenario import Scenario, SampleCounts, connection_from_json, connection_to_json, reference_scenario, roundtrip, sample_admissible
from .serialize import (
    SchemaError,
    divisor_from_json,
    element_to_json,
    form_to_json,
    pairs_from_json,
    pairs_to_json,
    q,
    vector_to_json,
)
from .transform import elm_minus_exponents, elm_plus_exponents, twist_exponents

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class CommandFailed(Exception):
    def __init__(self, payload):
        super().__init__("assertion failed")
        self.payload = payload


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError("--scenario", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError("--scenario", f"invalid JSON: {exc.msg} at line {exc.lineno}") from None


def _parse_inline(text: str, flag: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(flag, f"invalid JSON: {exc.msg}") from None


def _scenario(args) -> tuple[Scenario, dict]:
    if args.scenario:
        raw = _load_json(args.scenario)
        return Scenario.from_json(raw), raw
    sc = reference_scenario(args.reference)
    return sc, sc.to_json()


def _exponents(args, sc_loader) -> ExponentData:
    if args.nu is not None:
        nu = pairs_from_json(_parse_inline(args.nu, "--nu"), "--nu")
        lam = Fraction(args.lam)
        if args.degree is None:
            raise SchemaError("--degree", "required together with --nu")
        return ExponentData(tuple(nu), lam, args.degree)
    sc, _ = sc_loader()
    return sc.nu


def _rng(args, sc: Scenario) -> random.Random:
    return random.Random(sc.seed if args.seed is None else args.seed)


# -- commands -----------------------------------------------------------------

def cmd_info(args):
    sc, _ = _scenario(args)
    return sc.info()


def cmd_dims(args):
    d = moduli_dimensions(args.g, args.n)
    return {"g": args.g, "n": args.n, **d._asdict(),
            "target_identity": (3 * args.g - 3 + args.n) + (3 * args.g + args.n - 3) == 6 * args.g + 2 * args.n - 6}


def cmd_rr_basis(args):
    sc, _ = _scenario(args)
    D = divisor_from_json(sc.curve, _parse_inline(args.divisor, "--divisor"), "--divisor") if args.divisor else sc.bundle.A
    if args.forms:
        basis = [DifferentialForm.from_dxy(r) for r in rr_space_basis(sc.curve, D + sc.curve.canonical_K0())]
        return {"dimension": len(basis), "forms": [form_to_json(w) for w in basis]}
    basis = rr_space_basis(sc.curve, D).basis
    return {"dimension": len(basis), "basis": [element_to_json(e) for e in basis]}


def cmd_h1_basis(args):
    sc, _ = _scenario(args)
    if args.divisor:
        D = divisor_from_json(sc.curve, _parse_inline(args.divisor, "--divisor"), "--divisor")
    else:
        D = -sc.bundle.A - sc.D
    classes = h1_basis(Sheaf(sc.curve, D), sc.cover)
    return {"h1_dim": h1_dim(sc.curve, D),
            "classes": [{"cocycle": element_to_json(c.cocycle), "functional": vector_to_json(c.functional)} for c in classes]}


def _pair_inputs(args, sc: Scenario):
    rng = _rng(args, sc)
    gc = sc.gamma_coords
    bc = sc.bprime_coords
    if args.gamma:
        gc = [Fraction(a) for a in _parse_inline(args.gamma, "--gamma")]
    if args.bprime:
        bc = [Fraction(a) for a in _parse_inline(args.bprime, "--bprime")]
    if gc is None or bc is None:
        sgc, sbc, *_ = sample_admissible(sc, rng, SampleCounts())
        gc = sgc if gc is None else gc
        bc = sbc if bc is None else bc
    if len(gc) != len(sc.gamma_basis):
        raise SchemaError("gamma", f"expected {len(sc.gamma_basis)} coordinates")
    if len(bc) != len(sc.bprime_basis):
        raise SchemaError("bprime", f"expected {len(sc.bprime_basis)} coordinates")
    return list(gc), list(bc)


def cmd_pair(args):
    from .cohomology import cup_pair

    sc, _ = _scenario(args)
    gc, bc = _pair_inputs(args, sc)
    value = cup_pair(sc.gamma_from(gc), sc.pb_from(bc).bprime)
    return {"gamma": vector_to_json(gc), "bprime": vector_to_json(bc), "pairing": q(value), "in_sigma": value == 0}


def cmd_fuchs(args):
    e = _exponents(args, lambda: _scenario(args))
    out = {"nu": pairs_to_json(e.nu), "lambda": q(e.lam), "degree": e.degree, "fuchs": fuchs_check(e)}
    if e.lam == 1:
        out["nonresonant"] = resonance_check(e)
    return out


def cmd_elm(args):
    e = _exponents(args, lambda: _scenario(args))
    op = {"minus": elm_minus_exponents, "plus": elm_plus_exponents, "twist": twist_exponents}[args.op]
    r = op(e, args.point)
    return {"operation": args.op, "point": args.point, "nu": pairs_to_json(r.nu), "degree": r.degree,
            "fuchs": fuchs_check(r), "weights": "unchanged"}


def cmd_v0_check(args):
    sc, _ = _scenario(args)
    bc = sc.bprime_coords
    if args.bprime:
        bc = [Fraction(a) for a in _parse_inline(args.bprime, "--bprime")]
    if bc is None:
        _, bc, *_ = sample_admissible(sc, _rng(args, sc), SampleCounts())
    pb = sc.pb_from(bc)
    M = pairing_matrix_for(pb)
    return {"bprime": vector_to_json(bc), "pairing_matrix": [vector_to_json(r) for r in M], "in_V0": v0_membership(pb)}


def cmd_validate(args):
    sc, raw = _scenario(args)
    src = _load_json(args.input) if args.input else raw
    mats = src.get("matrices") if isinstance(src, dict) else None
    if mats is None:
        raise SchemaError("matrices", "missing field")
    if "lambda" in src and isinstance(mats, dict) and "lambda" not in mats:
        mats = {**mats, "lambda": src["lambda"]}
    conn = connection_from_json(sc, mats)
    rep = validate_connection(conn, sc.lc)
    out = rep.to_json()
    if not rep.ok:
        raise CommandFailed(out)
    return out


def cmd_reconstruct(args):
    from .reconstruct import reconstruct

    sc, _ = _scenario(args)
    sc.require_supported()
    gc, bc = _pair_inputs(args, sc)
    res = reconstruct(sc.gamma_from(gc), sc.pb_from(bc), sc.nu, sc.lc)
    return {"gamma": vector_to_json(gc), "bprime": vector_to_json(bc), "lambda": q(res.lam),
            "zeta": form_to_json(res.zeta), "matrices": connection_to_json(res.connection),
            "certificates": res.certificates.to_json()}


def cmd_roundtrip(args):
    sc, _ = _scenario(args)
    rep = roundtrip(sc, args.samples, args.seed)
    if rep["passed"] != rep["samples"]:
        raise CommandFailed(rep)
    if not args.verbose:
        for r in rep["results"]:
            r.pop("state", None)
    return rep


# -- driver ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="FILE", help="scenario JSON (default: built-in reference)")
    common.add_argument("--reference", type=int, choices=(1, 2), default=1,
                        help="built-in reference scenario with this many marked points")
    common.add_argument("--seed", type=int, default=None, help="sampling seed (default: scenario seed)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON output (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON output")
    common.set_defaults(pretty=False)

    p = argparse.ArgumentParser(prog="parcon", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"parcon {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="genus, moduli dimensions and cohomology dimensions").set_defaults(fn=cmd_info)

    s = sub.add_parser("dims", parents=[common], help="moduli dimension constants")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(fn=cmd_dims)

    s = sub.add_parser("rr-basis", parents=[common], help="basis of L(D)")
    s.add_argument("--divisor", help="divisor JSON [[point, mult], ...] (default: A)")
    s.add_argument("--forms", action="store_true", help="forms w with div(w) + D >= 0 instead")
    s.set_defaults(fn=cmd_rr_basis)

    s = sub.add_parser("h1-basis", parents=[common], help="basis of H^1(O(D)) on the scenario cover")
    s.add_argument("--divisor", help="divisor JSON (default: -A-D)")
    s.set_defaults(fn=cmd_h1_basis)

    for name, fn, hlp in (("pair", cmd_pair, "cup product of gamma and b'"),
                          ("reconstruct", cmd_reconstruct, "rebuild the connection from (gamma, b')")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--gamma", help="gamma coordinates (JSON list)")
        s.add_argument("--bprime", help="b' coordinates (JSON list)")
        s.set_defaults(fn=fn)

    for name, fn, hlp in (("fuchs", cmd_fuchs, "Fuchs relation and resonance"),
                          ("elm", cmd_elm, "elementary transformation of exponent data")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--nu", help='exponent pairs JSON [["nu+","nu-"], ...] (default: scenario)')
        s.add_argument("--lambda", dest="lam", default="1")
        s.add_argument("--degree", type=int)
        if name == "elm":
            g = s.add_mutually_exclusive_group(required=True)
            g.add_argument("--minus", dest="op", action="store_const", const="minus")
            g.add_argument("--plus", dest="op", action="store_const", const="plus")
            g.add_argument("--twist", dest="op", action="store_const", const="twist")
            s.add_argument("--point", type=int, required=True)
        s.set_defaults(fn=fn)

    s = sub.add_parser("v0-check", parents=[common], help="is the extension in V0")
    s.add_argument("--bprime", help="b' coordinates (JSON list)")
    s.set_defaults(fn=cmd_v0_check)

    s = sub.add_parser("validate", parents=[common], help="validate a connection bundle")
    s.add_argument("--input", metavar="FILE", help="connection JSON (default: the scenario file)")
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("roundtrip", parents=[common], help="sampled App x Bun inversion round trips")
    s.add_argument("--samples", type=int, default=25)
    s.add_argument("--verbose", action="store_true", help="keep full state for every sample")
    s.set_defaults(fn=cmd_roundtrip)
    return p


def _emit(payload, pretty: bool, stream=None):
    stream = stream or sys.stdout
    if pretty:
        stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        stream.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.fn(args)
    except CommandFailed as exc:
        _emit(exc.payload, args.pretty)
        return EXIT_FAIL
    except SchemaError as exc:
        _emit({"error": "schema", "field": exc.path, "message": str(exc)}, args.pretty, sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        _emit({"error": "precondition", "kind": type(exc).__name__, "message": str(exc)}, args.pretty, sys.stderr)
        return EXIT_INPUT
    except (ValueError, IndexError, TypeError) as exc:
        _emit({"error": "input", "message": str(exc)}, args.pretty, sys.stderr)
        return EXIT_INPUT
    except InternalConsistencyError as exc:
        _emit({"error": "internal", "message": str(exc)}, args.pretty, sys.stderr)
        return EXIT_FAIL
    _emit(payload, args.pretty)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
