"""Elementary transformations on exponent data and on a local frame model."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import ZERO, to_scalar
from .parabolic import ExponentData


def _need_lambda_one(e: ExponentData):
    if e.lam != 1:
        raise ValueError("elementary transformations are defined for lambda = 1")


def _check_index(e: ExponentData, i: int):
    if not 0 <= i < e.n:
        raise IndexError(f"point index {i} out of range for {e.n} points")


def elm_minus_exponents(e: ExponentData, i: int) -> ExponentData:
    """(nu+, nu-) -> (nu- + 1, nu+) at t_i; degree drops by one."""
    _need_lambda_one(e)
    _check_index(e, i)
    p, m = e.nu[i]
    return e.with_nu(i, (m + 1, p), e.degree - 1)


def elm_plus_exponents(e: ExponentData, i: int) -> ExponentData:
    """(nu+, nu-) -> (nu-, nu+ - 1) at t_i; degree rises by one."""
    _need_lambda_one(e)
    _check_index(e, i)
    p, m = e.nu[i]
    return e.with_nu(i, (m, p - 1), e.degree + 1)


def twist_exponents(e: ExponentData, i: int) -> ExponentData:
    """Tensor with O(t_i): both exponents drop by one, degree rises by two."""
    _need_lambda_one(e)
    _check_index(e, i)
    p, m = e.nu[i]
    return e.with_nu(i, (p - 1, m - 1), e.degree + 2)


Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def _mat(m) -> Matrix2:
    return tuple(tuple(to_scalar(a) for a in row) for row in m)


@dataclass(frozen=True)
class LocalModel:
    """Connection matrix near t_i: (terms[0]/z + terms[1] + terms[2] z + ...) dz.

    Columns give the images of the frame vectors; the flag line is spanned by
    the frame vector ``flag`` (1 = second), so the residue is lower triangular
    with the flag exponent in the lower-right slot.
    """

    terms: tuple[Matrix2, ...]
    flag: int = 1

    def __post_init__(self):
        terms = tuple(_mat(t) for t in self.terms)
        if not terms:
            raise ValueError("a local model needs at least its residue")
        if self.flag != 1:
            raise ValueError("only the adapted frame (flag = second vector) is supported")
        if terms[0][0][1] != 0:
            raise ValueError("residue must be lower triangular in the adapted frame")
        object.__setattr__(self, "terms", terms)

    @property
    def residue_matrix(self) -> Matrix2:
        return self.terms[0]

    @property
    def spectrum(self) -> tuple[Fraction, Fraction]:
        """(flag eigenvalue, other eigenvalue)."""
        r = self.residue_matrix
        return r[1][1], r[0][0]

    @classmethod
    def from_residue(cls, residue, *higher) -> "LocalModel":
        return cls((residue,) + tuple(higher))


def elm_minus_local(m: LocalModel, nu) -> tuple[LocalModel, tuple[Fraction, Fraction]]:
    """Lower transformation in the frame (f2, z f1) for the adapted frame (f1, f2).

    The gauge diag(z, 1) adds dz/z to the first diagonal entry, divides the
    upper-right entry by z and multiplies the lower-left one by z; reordering
    the frame puts the new flag (the image of z f1) second again. One Laurent
    term is consumed by the division.
    """
    nu_p, nu_m = to_scalar(nu[0]), to_scalar(nu[1])
    r = m.residue_matrix
    if r[0][0] != nu_m or r[1][1] != nu_p:
        raise ValueError(f"residue diagonal ({r[0][0]}, {r[1][1]}) does not match (nu-, nu+) = ({nu_m}, {nu_p})")
    if len(m.terms) < 2:
        raise ValueError("need at least one Laurent term beyond the residue")
    L = len(m.terms)
    new = []
    for k in range(L - 1):
        T = m.terms[k]
        a11 = T[0][0] + (1 if k == 0 else 0)
        a12 = m.terms[k + 1][0][1]
        a21 = m.terms[k - 1][1][0] if k >= 1 else ZERO
        a22 = T[1][1]
        # reorder the frame: (f2, z f1)
        new.append(((a22, a21), (a12, a11)))
    out = LocalModel(tuple(new))
    return out, (nu_m + 1, nu_p)
