"""Combinatorial batch codes: construction, verification, bounds, and search.

A layout stores n items on m servers with replication only; it is valid
for batch size k when any k items can be fetched reading at most one item
per server.  This package builds such layouts, certifies them against
Hall's condition, evaluates the known storage bounds, and brute-forces
ground truth on tiny instances.
"""

from .bounds import (
    BoundResult,
    b_value,
    check_inequality,
    cwc_bounds,
    known_n,
    lower_bound,
    u_value,
    uniform_n_ceiling,
)
from .construct import (
    ConstructionTrace,
    construct_best,
    construct_large_n,
    construct_m_equals_k,
    construct_m_plus_1,
    construct_range_a,
    construct_range_b,
    construct_trivial,
    construct_uniform,
    serialize_trace,
)
from .core import (
    Params,
    Profile,
    Rational,
    SetSystem,
    parse,
    profile,
    serialize,
    total_storage,
    truncate_to_k,
)
from .cwc import (
    ConstantWeightCode,
    best_d4_code,
    graham_sloane_d4,
    greedy_code,
    min_distance,
    parse_code,
    serialize_code,
)
from .hall import (
    CrowdedSubset,
    Deficiency,
    RetrievalPlan,
    ValidityReport,
    find_sdr,
    plan_batch,
    verify_hc1,
    verify_hc2,
)
from .oracle import SearchResult, canonical_systems, search_optimal, settle_gap

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "ConstantWeightCode",
    "ConstructionTrace",
    "CrowdedSubset",
    "Deficiency",
    "Params",
    "Profile",
    "Rational",
    "RetrievalPlan",
    "SearchResult",
    "SetSystem",
    "ValidityReport",
    "b_value",
    "best_d4_code",
    "canonical_systems",
    "check_inequality",
    "construct_best",
    "construct_large_n",
    "construct_m_equals_k",
    "construct_m_plus_1",
    "construct_range_a",
    "construct_range_b",
    "construct_trivial",
    "construct_uniform",
    "cwc_bounds",
    "find_sdr",
    "graham_sloane_d4",
    "greedy_code",
    "known_n",
    "lower_bound",
    "min_distance",
    "parse",
    "parse_code",
    "plan_batch",
    "profile",
    "search_optimal",
    "serialize",
    "serialize_code",
    "serialize_trace",
    "settle_gap",
    "total_storage",
    "truncate_to_k",
    "u_value",
    "uniform_n_ceiling",
    "verify_hc1",
    "verify_hc2",
]
