"""Local solubility statistics for families of diagonal conics."""

from .family import MonomialConicFamily, builtin, load_family, parse_family
from .f2res import build_residue_data
from .localdens import leading_constant

__all__ = [
    "MonomialConicFamily",
    "build_residue_data",
    "builtin",
    "leading_constant",
    "load_family",
    "parse_family",
]
