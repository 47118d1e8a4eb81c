"""Shared fixtures, strategies and independent oracles for the test suite."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from cbckit.core import SetSystem, bits, mask_of, total_storage, truncate_to_k
from cbckit.bounds import u_value

settings.register_profile("suite", max_examples=100, deadline=None, derandomize=True)
settings.load_profile("suite")


# Published worked example at n=43, k=4, m=6: the multiset obtained by
# replaying the example's construction steps (auxiliary pairs
# {0,1},{1,2},{2,3},{3,4},{4,5}, then a partial step on {0,5} deleting
# {0,1,5} and {0,2,5}).  Totals: 38 triples + 5 pairs, storage 124.
_TABLE1_COUNTS = {
    (0, 1, 2): 1, (0, 1, 3): 2, (0, 1, 4): 2, (0, 1, 5): 1,
    (0, 2, 3): 2, (0, 2, 4): 3, (0, 2, 5): 2, (0, 3, 4): 2,
    (0, 3, 5): 3, (0, 4, 5): 2, (1, 2, 3): 1, (1, 2, 4): 2,
    (1, 2, 5): 2, (1, 3, 4): 2, (1, 3, 5): 3, (1, 4, 5): 2,
    (2, 3, 4): 1, (2, 3, 5): 2, (2, 4, 5): 2, (3, 4, 5): 1,
    (0, 1): 1, (1, 2): 1, (2, 3): 1, (3, 4): 1, (4, 5): 1,
}


@pytest.fixture(scope="session")
def table1_system() -> SetSystem:
    items = []
    for subset, mult in sorted(_TABLE1_COUNTS.items(), key=lambda kv: mask_of(kv[0])):
        items.extend([mask_of(subset)] * mult)
    return SetSystem(6, tuple(items))


@pytest.fixture(scope="session")
def intro_example_system() -> SetSystem:
    # The three-item running example: ({s1,s2}, {s1,s2,s3}, {s1}) on m=3.
    return SetSystem.from_sets(3, [(0, 1), (0, 1, 2), (0,)])


@st.composite
def set_systems(draw, max_m=7, max_n=9, max_set_size=4, min_n=0):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(min_n, max_n))
    items = [
        mask_of(draw(st.sets(st.integers(0, m - 1), min_size=1, max_size=min(max_set_size, m))))
        for _ in range(n)
    ]
    return SetSystem(m, tuple(items))


def brute_force_valid(system: SetSystem, k: int) -> bool:
    """Ground truth: every k-subset of items has an injective server choice.

    Tries all assignment functions (one server from each replica set) and
    looks for one with pairwise-distinct servers.  Exponential; only for
    tiny systems.
    """
    r = min(k, system.n)
    if r == 0:
        return True
    for combo in combinations(range(system.n), r):
        choices = [tuple(bits(system.items[j])) for j in combo]
        if not any(len(set(pick)) == r for pick in product(*choices)):
            return False
    return True


def assert_storage_bound(system: SetSystem, k: int) -> None:
    """Profile-level storage inequality every valid layout must satisfy.

    For every c in 1..k-1:
    N >= n*c - (k-c)*(U(m,k,c)-n)/(m-k+1) + (k-c)*(m-k)/(m-k+1)*A_k,
    checked on the k-truncated layout (whose storage is <= the original's
    only because truncation can only shrink sets, so the original N
    satisfies the bound a fortiori).
    """
    m = system.m
    if not 2 <= k <= m:
        raise ValueError("bound needs 2 <= k <= m")
    trunc = truncate_to_k(system, k)
    n = trunc.n
    storage = total_storage(trunc)
    a_k = sum(1 for it in trunc.items if it.bit_count() == k)
    for c in range(1, k):
        rhs = (
            n * c
            - Fraction(k - c) * (u_value(m, k, c) - n) / (m - k + 1)
            + Fraction((k - c) * (m - k), m - k + 1) * a_k
        )
        assert storage >= rhs, (c, storage, rhs)
        assert total_storage(system) >= math.ceil(rhs)
