"""Search stage: reconstruction-driven parameter and order search."""

from fxsearch.search.estimate import estimate, iterate_last
from fxsearch.search.order import (
    M0_FIRST_STAGE,
    M0_SECOND_STAGE,
    derive_seed,
    permutations_of,
    search_order_and_params,
)
from fxsearch.search.params import ReconstructionObjective, reconstruct, search_params

__all__ = [
    "M0_FIRST_STAGE",
    "M0_SECOND_STAGE",
    "ReconstructionObjective",
    "derive_seed",
    "estimate",
    "iterate_last",
    "permutations_of",
    "reconstruct",
    "search_order_and_params",
    "search_params",
]
