"""JSON encodings. Rationals are strings "p/q" (or "p")."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .curve import CurveModel, CurvePoint, DifferentialForm, Divisor, FunctionFieldElement
from .errors import PreconditionError
from .exact import Poly, RatFunc, scalar_str


class SchemaError(PreconditionError):
    """Malformed input; ``path`` names the offending field."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def q(a) -> str:
    return scalar_str(Fraction(a))


def parse_q(v, path: str) -> Fraction:
    if isinstance(v, bool):
        raise SchemaError(path, "expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"not a rational: {v!r}") from None
    raise SchemaError(path, f"expected a rational string, got {type(v).__name__}")


def parse_int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(path, "expected an integer")
    return v


def parse_list(v, path: str) -> list:
    if not isinstance(v, list):
        raise SchemaError(path, "expected a list")
    return v


def field(obj, key: str, path: str, required: bool = True):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}" if path else key, "missing field")
        return None
    return obj[key]


# -- polynomials and elements -------------------------------------------------

def poly_to_json(p: Poly) -> list[str]:
    return [q(a) for a in p.coeffs]


def poly_from_json(v, path: str) -> Poly:
    return Poly([parse_q(a, f"{path}[{i}]") for i, a in enumerate(parse_list(v, path))])


def ratfunc_to_json(r: RatFunc) -> dict:
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def ratfunc_from_json(v, path: str) -> RatFunc:
    num = poly_from_json(field(v, "num", path), f"{path}.num")
    den = poly_from_json(field(v, "den", path), f"{path}.den")
    if den.is_zero():
        raise SchemaError(f"{path}.den", "zero denominator")
    return RatFunc(num, den)


def element_to_json(e: FunctionFieldElement) -> dict:
    return {"a": ratfunc_to_json(e.a), "b": ratfunc_to_json(e.b)}


def element_from_json(curve: CurveModel, v, path: str) -> FunctionFieldElement:
    a = ratfunc_from_json(field(v, "a", path), f"{path}.a")
    b = ratfunc_from_json(field(v, "b", path), f"{path}.b")
    return FunctionFieldElement.from_parts(curve, a, b)


def form_to_json(w: DifferentialForm) -> dict:
    return {"dx": element_to_json(w.h)}


def form_from_json(curve: CurveModel, v, path: str) -> DifferentialForm:
    return DifferentialForm(element_from_json(curve, field(v, "dx", path), f"{path}.dx"))


# -- curve, points, divisors -----------------------------------------------------

def curve_to_json(c: CurveModel) -> dict:
    return {"f": poly_to_json(c.f)}


def curve_from_json(v, path: str = "curve") -> CurveModel:
    f = poly_from_json(field(v, "f", path), f"{path}.f")
    try:
        return CurveModel(f)
    except (ValueError, NotImplementedError) as exc:
        raise SchemaError(f"{path}.f", str(exc)) from None


def point_to_json(P: CurvePoint) -> dict:
    if P.is_infinite:
        return {"inf": P.inf}
    return {"x": q(P.x), "y": q(P.y)}


def point_from_json(curve: CurveModel, v, path: str) -> CurvePoint:
    if isinstance(v, dict) and "inf" in v:
        k = parse_int(v["inf"], f"{path}.inf")
        P = CurvePoint.infinity(k)
        if P not in curve.infinity_points:
            raise SchemaError(f"{path}.inf", f"curve has {len(curve.infinity_points)} point(s) at infinity")
        return P
    x = parse_q(field(v, "x", path), f"{path}.x")
    y = parse_q(field(v, "y", path), f"{path}.y")
    P = CurvePoint.affine(x, y)
    if not curve.contains(P):
        raise SchemaError(path, f"{P} is not on the curve")
    return P


def divisor_to_json(D: Divisor) -> list:
    return [[point_to_json(P), m] for P, m in D.items()]


def divisor_from_json(curve: CurveModel, v, path: str) -> Divisor:
    items = []
    for i, entry in enumerate(parse_list(v, path)):
        p = f"{path}[{i}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError(p, "expected [point, multiplicity]")
        items.append((point_from_json(curve, entry[0], f"{p}[0]"), parse_int(entry[1], f"{p}[1]")))
    return Divisor(items)


def pairs_to_json(pairs) -> list:
    return [[q(a), q(b)] for a, b in pairs]


def pairs_from_json(v, path: str) -> list[tuple[Fraction, Fraction]]:
    out = []
    for i, entry in enumerate(parse_list(v, path)):
        p = f"{path}[{i}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError(p, "expected a pair")
        out.append((parse_q(entry[0], f"{p}[0]"), parse_q(entry[1], f"{p}[1]")))
    return out


def vector_to_json(v) -> list[str]:
    return [q(a) for a in v]


def vector_from_json(v, path: str) -> list[Fraction]:
    return [parse_q(a, f"{path}[{i}]") for i, a in enumerate(parse_list(v, path))]


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
