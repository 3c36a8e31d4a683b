"""Exact arithmetic in F_q, F_q[t], residue rings and F_q((1/t))."""

from .field import GF, FieldError
from .laurent import DEFAULT_PREC, Laurent, PrecisionError
from .poly import (
    Poly,
    PolyError,
    crt,
    factor,
    format_poly,
    gcd_many,
    gcd_monic,
    inv_mod,
    is_irreducible,
    is_squarefree,
    iter_irreducible,
    iter_monic,
    iter_monic_upto,
    iter_polys,
    jacobi,
    m_part,
    omega,
    parse_poly,
    valuation,
    xgcd,
)
from .residue import ResidueRing, ResidueRingElem, residue_field


def norm(p: Poly) -> int:
    """|p| = q**deg p for p != 0 and |0| = 0."""
    return p.norm()


__all__ = [
    "GF",
    "FieldError",
    "Laurent",
    "PrecisionError",
    "DEFAULT_PREC",
    "Poly",
    "PolyError",
    "crt",
    "factor",
    "format_poly",
    "gcd_many",
    "gcd_monic",
    "inv_mod",
    "is_irreducible",
    "is_squarefree",
    "iter_irreducible",
    "iter_monic",
    "iter_monic_upto",
    "iter_polys",
    "jacobi",
    "m_part",
    "norm",
    "omega",
    "parse_poly",
    "valuation",
    "xgcd",
    "ResidueRing",
    "ResidueRingElem",
    "residue_field",
]
