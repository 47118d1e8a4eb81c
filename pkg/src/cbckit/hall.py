"""Layout validity and retrieval planning via Hall's theorem.

A layout serves any batch of k items with one read per server iff the
requested items' replica sets admit a system of distinct representatives
(SDR).  Restricted to batches of size k, Hall's condition has two
equivalent forms:

* union form: every subcollection of r <= k items covers >= r servers;
* counting form: every subset of at most k-1 servers contains at most
  that many whole replica sets.

``verify_hc2`` checks the counting form by enumerating server subsets and
is the cheap default (the item collection may be huge, the server set is
small).  ``verify_hc1`` independently checks the union form by running a
matching on every k-subset of items; the two must always agree and are
kept free of shared logic so that one can cross-validate the other.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

from .core import SetSystem, bits
from .errors import NoPlan, ParamError

# Above this server count the 2^m containment table is not worth building
# and verify_hc2 falls back to per-subset counting.
_TABLE_MAX_M = 16


@dataclass(frozen=True)
class CrowdedSubset:
    """A server subset that fully contains more replica sets than it has servers."""

    servers: tuple[int, ...]
    items: tuple[int, ...]


@dataclass(frozen=True)
class Deficiency:
    """Items whose combined replica sets cover fewer servers than there are items."""

    items: tuple[int, ...]
    servers: tuple[int, ...]


@dataclass(frozen=True)
class RetrievalPlan:
    """One distinct server per requested item, chosen inside its replica set."""

    assignment: dict[int, int]

    def __post_init__(self):
        servers = list(self.assignment.values())
        if len(set(servers)) != len(servers):
            raise ParamError("plan reads one server twice")


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    witness: Union[CrowdedSubset, Deficiency, None] = None

    def __post_init__(self):
        if self.valid != (self.witness is None):
            raise ParamError("validity verdict and witness disagree")


def _check_batch_size(sys: SetSystem, k: int) -> None:
    if not 1 <= k <= sys.m:
        raise ParamError(f"need 1 <= k <= m, got k={k} m={sys.m}")


def _containment_counts(items: Sequence[int], m: int) -> list[int]:
    """count[mask] = number of items whose replica set is contained in mask."""
    cnt = [0] * (1 << m)
    for it in items:
        cnt[it] += 1
    for b in range(m):
        bit = 1 << b
        for mask in range(1 << m):
            if mask & bit:
                cnt[mask] += cnt[mask ^ bit]
    return cnt


def verify_hc2(sys: SetSystem, k: int) -> ValidityReport:
    """Check the counting form of the restricted Hall condition.

    Valid iff every server subset T with |T| <= k-1 contains at most |T|
    replica sets.  On failure, returns the first violating subset in
    size-then-lexicographic order together with the items inside it.
    """
    _check_batch_size(sys, k)
    m = sys.m
    if m <= _TABLE_MAX_M:
        cnt = _containment_counts(sys.items, m)

        def contained(mask: int) -> int:
            return cnt[mask]

    else:
        by_mask = Counter(sys.items)

        def contained(mask: int) -> int:
            total = 0
            sub = mask
            while True:
                total += by_mask.get(sub, 0)
                if sub == 0:
                    break
                sub = (sub - 1) & mask
            return total

    for r in range(k):
        for combo in itertools.combinations(range(m), r):
            mask = 0
            for s in combo:
                mask |= 1 << s
            if contained(mask) > r:
                inside = tuple(
                    j for j, it in enumerate(sys.items) if it & ~mask == 0
                )
                return ValidityReport(False, CrowdedSubset(combo, inside))
    return ValidityReport(True)


def find_sdr(sets: Sequence[int]) -> Union[RetrievalPlan, Deficiency]:
    """Match each replica set to a distinct server, or exhibit why none exists.

    Repeated augmenting-path matching; servers are scanned in ascending
    index, so the result is deterministic (but not canonical).  On failure
    returns the standard Hall violator: the sets reachable by alternating
    paths from the first unmatched one, whose union is too small.
    """
    owner: dict[int, int] = {}  # server -> position in `sets`

    def augment(pos: int, seen: set[int]) -> bool:
        for s in bits(sets[pos]):
            if s in seen:
                continue
            seen.add(s)
            if s not in owner or augment(owner[s], seen):
                owner[s] = pos
                return True
        return False

    for pos in range(len(sets)):
        seen: set[int] = set()
        if not augment(pos, seen):
            # On failure `seen` is exactly the union of the replica sets of
            # all positions reachable by alternating paths, each of which is
            # matched except `pos` itself.
            reachable = sorted({pos} | {owner[s] for s in seen})
            return Deficiency(tuple(reachable), tuple(sorted(seen)))
    assignment = {pos: s for s, pos in owner.items()}
    return RetrievalPlan(dict(sorted(assignment.items())))


def verify_hc1(sys: SetSystem, k: int) -> ValidityReport:
    """Check the union form of the restricted Hall condition.

    Runs find_sdr on every k-subset of items (every smaller subcollection
    inherits its SDR), memoized on the multiset of replica sets since
    duplicated items are common.  Must always agree with verify_hc2.
    """
    _check_batch_size(sys, k)
    n = sys.n
    r = min(k, n)
    if r == 0:
        return ValidityReport(True)
    verdict_cache: dict[tuple[int, ...], bool] = {}
    for combo in itertools.combinations(range(n), r):
        key = tuple(sorted(sys.items[j] for j in combo))
        ok = verdict_cache.get(key)
        if ok is None:
            ok = isinstance(find_sdr(key), RetrievalPlan)
            verdict_cache[key] = ok
        if not ok:
            local = find_sdr([sys.items[j] for j in combo])
            assert isinstance(local, Deficiency)
            items = tuple(combo[j] for j in local.items)
            return ValidityReport(False, Deficiency(items, local.servers))
    return ValidityReport(True)


def plan_batch(sys: SetSystem, request: Sequence[int]) -> RetrievalPlan:
    """Plan one distinct server read per requested item.

    Always succeeds on a layout that verifies at a batch size >= the
    request length; otherwise raises NoPlan carrying the deficiency.
    """
    seen = set()
    for j in request:
        if not 0 <= j < sys.n:
            raise ParamError(f"item index {j} outside 0..{sys.n - 1}")
        if j in seen:
            raise ParamError(f"item index {j} requested twice")
        seen.add(j)
    result = find_sdr([sys.items[j] for j in request])
    if isinstance(result, Deficiency):
        items = tuple(request[j] for j in result.items)
        raise NoPlan(Deficiency(items, result.servers))
    return RetrievalPlan({request[j]: s for j, s in result.assignment.items()})
