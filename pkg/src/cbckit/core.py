"""Set-system model of a replication-based storage layout.

A layout of n items over m servers is kept in dual form: each item carries
the subset of servers that hold a copy of it.  Subsets are bit masks over
server indices 0..m-1, so unions, containment tests and cardinalities are
single word operations; this is what makes the exhaustive checks elsewhere
in the package feasible.  Items form an ordered multiset (repeated subsets
are meaningful: they are distinct items replicated the same way).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import (
    EmptyItemSet,
    MalformedHeader,
    MalformedItemLine,
    OversizedSet,
    ParamError,
    ServerIndexOutOfRange,
)

# Exact fraction type used by the bounds module; threshold values such as
# (k-1)*C(m,c)/C(k-1,c) are generally not integers and must never be
# rounded implicitly.
Rational = Fraction


def mask_of(indices: Iterable[int]) -> int:
    """Bit mask with the given server indices set."""
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SetSystem:
    """m servers plus one server-subset bit mask per item.

    Immutable after construction; safe to share between threads.
    """

    m: int
    items: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.m < 1:
            raise ParamError(f"need at least one server, got m={self.m}")
        full = (1 << self.m) - 1
        for j, it in enumerate(self.items):
            if it == 0:
                raise ParamError(f"item {j} is stored on no server")
            if it & ~full:
                raise ParamError(f"item {j} uses servers outside 0..{self.m - 1}")

    @classmethod
    def from_sets(cls, m: int, sets: Iterable[Iterable[int]]) -> "SetSystem":
        return cls(m, tuple(mask_of(s) for s in sets))

    @property
    def n(self) -> int:
        return len(self.items)

    def item_sets(self) -> tuple[tuple[int, ...], ...]:
        """Items as tuples of ascending server indices (for display/tests)."""
        return tuple(tuple(bits(it)) for it in self.items)


@dataclass(frozen=True)
class Profile:
    """Cardinality census of a layout: counts[j-1] items use exactly j servers."""

    k: int
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))
        if self.k < 1:
            raise ParamError(f"batch size must be positive, got k={self.k}")
        if len(self.counts) != self.k:
            raise ParamError(f"expected {self.k} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ParamError("negative count in profile")

    @property
    def n(self) -> int:
        return sum(self.counts)

    def a(self, j: int) -> int:
        """Number of items stored on exactly j servers (1-based j)."""
        if not 1 <= j <= self.k:
            raise ParamError(f"j={j} outside 1..{self.k}")
        return self.counts[j - 1]


@dataclass(frozen=True)
class Params:
    """Problem parameters: n items, batches of k, m servers."""

    n: int
    k: int
    m: int

    def __post_init__(self):
        if not 1 <= self.k <= self.m:
            raise ParamError(f"need 1 <= k <= m, got k={self.k} m={self.m}")
        if self.n < 0:
            raise ParamError(f"negative item count n={self.n}")


def total_storage(sys: SetSystem) -> int:
    """Total number of stored copies: sum of replica-set sizes."""
    return sum(it.bit_count() for it in sys.items)


def profile(sys: SetSystem, k: int) -> Profile:
    """Count items by replica-set size, up to size k.

    Raises OversizedSet if any item uses more than k servers; callers that
    want a profile anyway should truncate_to_k first.
    """
    if k < 1:
        raise ParamError(f"batch size must be positive, got k={k}")
    counts = [0] * k
    for j, it in enumerate(sys.items):
        w = it.bit_count()
        if w > k:
            raise OversizedSet(j, w, k)
        counts[w - 1] += 1
    return Profile(k, tuple(counts))


def truncate_to_k(sys: SetSystem, k: int) -> SetSystem:
    """Shrink every replica set larger than k to its k smallest servers.

    For a layout that is valid at batch size k this preserves validity (a
    k-subset still satisfies every union condition it participates in) and
    never increases total storage.  The k smallest indices are the
    lexicographically least k-subset, so the result is deterministic.
    """
    if k < 1:
        raise ParamError(f"batch size must be positive, got k={k}")
    out = []
    for it in sys.items:
        while it.bit_count() > k:
            it &= ~(1 << (it.bit_length() - 1))
        out.append(it)
    return SetSystem(sys.m, tuple(out))


def serialize(sys: SetSystem) -> str:
    """Render a layout in the "cbc" text format.

    Header ``cbc m=<m> n=<n>``, then one line per item:
    ``<item-index>: <server indices ascending>``.  UTF-8, LF endings,
    zero-based server indices.  Output is canonical: byte-identical for
    equal systems.
    """
    lines = [f"cbc m={sys.m} n={sys.n}"]
    for j, it in enumerate(sys.items):
        lines.append(f"{j}: " + " ".join(str(s) for s in bits(it)))
    return "\n".join(lines) + "\n"


def _header_int(token: str, key: str) -> int:
    prefix = key + "="
    if not token.startswith(prefix):
        raise MalformedHeader(f"expected {prefix}<int>, got {token!r}")
    try:
        value = int(token[len(prefix):])
    except ValueError:
        raise MalformedHeader(f"expected {prefix}<int>, got {token!r}") from None
    if value < 0:
        raise MalformedHeader(f"{key} must be non-negative, got {value}")
    return value


def parse(text: str) -> SetSystem:
    """Parse the "cbc" text format back into a SetSystem.

    Raises MalformedHeader / MalformedItemLine / ServerIndexOutOfRange /
    EmptyItemSet on malformed input.  Round-trips: parse(serialize(s)) == s.
    """
    lines = text.splitlines()
    if not lines:
        raise MalformedHeader("empty input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "cbc":
        raise MalformedHeader(f"bad header line {lines[0]!r}")
    m = _header_int(head[1], "m")
    n = _header_int(head[2], "n")
    if m < 1:
        raise MalformedHeader(f"need at least one server, got m={m}")
    body = lines[1:]
    if len(body) != n:
        raise MalformedHeader(f"header says n={n} but found {len(body)} item lines")
    items = []
    for pos, line in enumerate(body):
        idx_str, sep, rest = line.partition(":")
        if not sep:
            raise MalformedItemLine(f"line {pos + 2}: missing ':'")
        try:
            idx = int(idx_str)
        except ValueError:
            raise MalformedItemLine(f"line {pos + 2}: bad item index {idx_str!r}") from None
        if idx != pos:
            raise MalformedItemLine(f"line {pos + 2}: expected item {pos}, got {idx}")
        tokens = rest.split()
        if not tokens:
            raise EmptyItemSet(f"item {pos} has no servers")
        mask = 0
        for tok in tokens:
            try:
                s = int(tok)
            except ValueError:
                raise MalformedItemLine(f"item {pos}: bad server index {tok!r}") from None
            if not 0 <= s < m:
                raise ServerIndexOutOfRange(f"item {pos}: server {s} outside 0..{m - 1}")
            mask |= 1 << s
        items.append(mask)
    return SetSystem(m, tuple(items))
