"""Galois groups W(B)/V(B) of finite pre-special groups, with GF(2) bitset kernels."""

from .errors import (
    DimensionError,
    GuardrailError,
    MalformedPsgError,
    NotHomomorphismError,
    PreconditionError,
    SgError,
)
from .kernels import BACKEND
from .gf2 import BitVec, Gf2Matrix, Gf2Subspace
from .psg import Character, Psg, catalog, catalog_names, orderings, validate
from .ktheory import relation_module, is_k_stable
from .galois import GalGroup, gal_group, is_standard, orderings_via_galois
from .cohomology import cup, h0, h1, h2_dim, is_coboundary, milnor_map_experiment

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BitVec",
    "Character",
    "DimensionError",
    "GalGroup",
    "Gf2Matrix",
    "Gf2Subspace",
    "GuardrailError",
    "MalformedPsgError",
    "NotHomomorphismError",
    "PreconditionError",
    "Psg",
    "SgError",
    "catalog",
    "catalog_names",
    "cup",
    "gal_group",
    "h0",
    "h1",
    "h2_dim",
    "is_coboundary",
    "is_k_stable",
    "is_standard",
    "milnor_map_experiment",
    "orderings",
    "orderings_via_galois",
    "relation_module",
    "validate",
]
