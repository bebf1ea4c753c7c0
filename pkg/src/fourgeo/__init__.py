"""Exact-integer geography of simply connected 4-manifolds: branched-cover
towers, symplectic sums and Einstein-metric verdicts."""

__version__ = "0.1.0"

from .covers import CoverTower, canonical_divisibility, chern, einstein_flag
from .invariants import CharNumbers, HomeoType, from_chi_c1sq, from_e_sigma, hitchin_thorpe, homeo_type
from .salvetti import KTupleSpec, salvetti_represent, synthesize
from .symplectic import SumRecipe, plan_point, sum_invariants

__all__ = [
    "CharNumbers",
    "CoverTower",
    "HomeoType",
    "KTupleSpec",
    "SumRecipe",
    "canonical_divisibility",
    "chern",
    "einstein_flag",
    "from_chi_c1sq",
    "from_e_sigma",
    "hitchin_thorpe",
    "homeo_type",
    "plan_point",
    "salvetti_represent",
    "sum_invariants",
    "synthesize",
]
