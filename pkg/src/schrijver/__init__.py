"""Monochromatic edges in Schrijver graphs under oracle colorings.

The main entry point is :func:`solve`; the combinatorics, oracle and lemma
modules are usable on their own.
"""

from .combinatorics import (
    GroundSet,
    are_disjoint,
    count_stable_cycle,
    count_stable_path,
    enumerate_stable,
    is_stable,
    rank_stable,
    sample_uniform_stable,
    unrank_stable,
    vertex_count_lower_bound,
)
from .errors import (
    BudgetExceeded,
    NotStableError,
    OracleContractError,
    OracleError,
    OracleProtocolError,
    PreconditionError,
    PremiseError,
    SchrijverError,
)
from .oracles import (
    ColoringOracle,
    ExternalOracleConfig,
    connect_external_oracle,
    make_hash_random_coloring,
    make_merged_min_coloring,
    make_oracle,
    make_permuted_merged_min_coloring,
)
from .records import ResultRecord
from .solver import (
    B_DEFAULT,
    B_STRICT,
    Edge,
    Failure,
    OffPalette,
    Popular,
    SamplingParams,
    SolveResult,
    brute_force_solve,
    element_elimination,
    query_budget,
    solve,
    verify_edge,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
