"""Exhaustive ground truth for tiny instances.

Searches target storage values in increasing order and, within each
target, enumerates candidate layouts as canonical multisets of masks, so
the first valid hit is optimal by construction; no best-so-far
bookkeeping.  Intended for roughly m <= 5, k <= 4, n <= 10: the node
budget counts validity checks and the default refuses to run away.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from . import bounds, construct
from .core import Params, SetSystem, serialize, total_storage
from .errors import BudgetExceeded, CbcError, ParamError, RangeError, Unknown
from .hall import verify_hc2

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class SearchResult:
    n: int
    k: int
    m: int
    optimal_n_storage: int
    witness: SetSystem
    nodes_explored: int


def render_search_result(result: SearchResult) -> str:
    """Text form: parameters and value, then the witness layout."""
    head = (
        f"n={result.n} k={result.k} m={result.m} "
        f"optimal N={result.optimal_n_storage} "
        f"nodes={result.nodes_explored}\n"
    )
    return head + serialize(result.witness)


def _swap_bits(mask: int, i: int, j: int) -> int:
    if (mask >> i & 1) != (mask >> j & 1):
        mask ^= (1 << i) | (1 << j)
    return mask


def _transposition_reducible(items: list[int], m: int) -> bool:
    """True if relabeling two servers yields a strictly smaller encoding."""
    for i in range(m - 1):
        for j in range(i + 1, m):
            swapped = sorted(_swap_bits(v, i, j) for v in items)
            if swapped < items:
                return True
    return False


def canonical_systems(
    n_items: int, m: int, storage: int, max_size: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Canonical multisets of n non-empty masks over m servers with given total size.

    Items are emitted in non-decreasing mask order (colex on subsets), and
    any multiset that a single server-label transposition would make
    strictly smaller is pruned.  The pruning is partial symmetry reduction:
    at least one representative of every relabeling class survives, since
    the class minimum cannot be improved by any permutation.
    """
    if max_size is None:
        max_size = m
    masks = [v for v in range(1, 1 << m) if v.bit_count() <= max_size]
    cur: list[int] = []

    def rec(lo: int, left: int, budget: int) -> Iterator[tuple[int, ...]]:
        if left == 0:
            if budget == 0 and not _transposition_reducible(cur, m):
                yield tuple(cur)
            return
        if budget < left or budget > left * max_size:
            return
        for idx in range(lo, len(masks)):
            weight = masks[idx].bit_count()
            if budget - weight < left - 1:
                continue
            cur.append(masks[idx])
            yield from rec(idx, left - 1, budget - weight)
            cur.pop()

    yield from rec(0, n_items, storage)


def _constructive_upper(n: int, k: int, m: int) -> int | None:
    try:
        system, _ = construct.construct_best(n, k, m)
    except CbcError:
        return None
    return total_storage(system)


def _search_targets(
    n: int, k: int, m: int, start: int, stop: int | None, budget: int
) -> tuple[SearchResult | None, int]:
    """Scan storage targets in [start, stop); None if no valid layout there."""
    nodes = 0
    targets = range(start, stop) if stop is not None else itertools.count(start)
    for target in targets:
        for candidate in canonical_systems(n, m, target, min(k, m)):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(nodes, best_upper=_constructive_upper(n, k, m))
            system = SetSystem(m, candidate)
            if verify_hc2(system, k).valid:
                return SearchResult(n, k, m, target, system, nodes), nodes
    return None, nodes


def search_optimal(n: int, k: int, m: int, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """True optimal storage for (n,k,m) by exhaustive canonical enumeration.

    Starts at the counting lower bound (or n, whichever is larger; storage
    can never be below one copy per item) and ascends.  Only masks of at
    most k servers are enumerated: any valid layout can be truncated to
    that size without increasing storage, so the optimum is reachable.
    """
    if not 1 <= k <= m:
        raise ParamError(f"need 1 <= k <= m, got k={k} m={m}")
    if n < 1:
        raise ParamError(f"need n >= 1, got n={n}")
    start = n
    if k >= 2:
        try:
            start = max(n, bounds.lower_bound(n, k, m).lower)
        except RangeError:
            pass
    result, _ = _search_targets(n, k, m, start, None, budget)
    assert result is not None  # a fully replicated layout is valid at N = k*n
    return result


def settle_gap(n: int, k: int, m: int, budget: int = DEFAULT_BUDGET) -> int:
    """Exact N(n,k,m) for instances where the formulas leave a gap of one.

    Pass-through when a regime already pins the value.  Otherwise searches
    storage targets between the certified lower bound and the constructive
    upper bound; if nothing smaller exists the upper bound is exact
    (a construction achieves it).  Raises Unknown on budget exhaustion.
    """
    verdict = bounds.known_n(Params(n, k, m))
    if verdict.exact is not None:
        return verdict.exact
    if verdict.upper is None:
        raise ParamError(
            f"n={n} k={k} m={m} has no constructive upper bound to settle against"
        )
    try:
        result, _ = _search_targets(n, k, m, verdict.lower, verdict.upper, budget)
    except BudgetExceeded as exc:
        raise Unknown(
            f"gap for n={n} k={k} m={m} unresolved after {exc.nodes_explored} checks"
        ) from exc
    if result is not None:
        return result.optimal_n_storage
    return verdict.upper
