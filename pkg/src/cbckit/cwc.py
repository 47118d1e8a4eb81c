"""Binary constant-weight codes viewed as families of w-subsets.

Codewords are bit masks of weight w over positions 0..m-1; the Hamming
distance between two words equals the size of the symmetric difference of
the underlying subsets and is always even for equal weights.  The
constructions here feed the layout builders: a fixed-residue-sum class
gives distance 4, and a greedy scan covers arbitrary even distances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import bits
from .errors import InsufficientCode, ParamError


def w_masks_colex(m: int, w: int):
    """All weight-w masks over m positions, ascending numerically (= colex)."""
    if w < 0 or w > m:
        return
    if w == 0:
        yield 0
        return
    v = (1 << w) - 1
    limit = 1 << m
    while v < limit:
        yield v
        low = v & -v
        ripple = v + low
        v = (((ripple ^ v) >> 2) // low) | ripple


@dataclass(frozen=True)
class ConstantWeightCode:
    """A set of weight-w words with declared minimum pairwise distance d2."""

    m: int
    w: int
    d2: int
    words: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        if not 1 <= self.w <= self.m:
            raise ParamError(f"need 1 <= w <= m, got w={self.w} m={self.m}")
        if self.d2 < 2 or self.d2 % 2:
            raise ParamError(f"distance must be even and >= 2, got {self.d2}")
        full = (1 << self.m) - 1
        for word in self.words:
            if word & ~full:
                raise ParamError(f"word {word:#x} uses positions outside 0..{self.m - 1}")
            if word.bit_count() != self.w:
                raise ParamError(f"word {word:#x} has weight {word.bit_count()}, not {self.w}")
        for a, b in itertools.combinations(self.words, 2):
            if (a ^ b).bit_count() < self.d2:
                raise ParamError(
                    f"words {a:#x} and {b:#x} are closer than distance {self.d2}"
                )

    @property
    def size(self) -> int:
        return len(self.words)


def graham_sloane_d4(m: int, w: int) -> ConstantWeightCode:
    """Distance-4 code: the largest class of w-subsets with a fixed element-sum mod m.

    Swapping a single element changes the sum by a nonzero residue, so any
    two distinct words in one class differ in at least two elements on each
    side, i.e. are at distance >= 4.  The largest class has at least
    C(m,w)/m words; ties between classes break to the smallest residue.
    """
    if not 1 <= w <= m:
        raise ParamError(f"need 1 <= w <= m, got w={w} m={m}")
    classes: dict[int, list[int]] = {r: [] for r in range(m)}
    for mask in w_masks_colex(m, w):
        classes[sum(bits(mask)) % m].append(mask)
    best = max(range(m), key=lambda r: (len(classes[r]), -r))
    return ConstantWeightCode(m, w, 4, tuple(classes[best]))


def _greedy_scan(m: int, d2: int, w: int, limit: int | None) -> list[int]:
    kept: list[int] = []
    if limit == 0:
        return kept
    for v in w_masks_colex(m, w):
        if all((v ^ u).bit_count() >= d2 for u in kept):
            kept.append(v)
            if limit is not None and len(kept) == limit:
                break
    return kept


def greedy_code(m: int, d2: int, w: int, target: int) -> ConstantWeightCode:
    """First-fit code: scan w-subsets in colex order, keep words at distance >= d2.

    Stops once ``target`` words are collected; raises InsufficientCode
    (carrying the words found) if the scan is exhausted first.
    """
    if d2 < 2 or d2 % 2:
        raise ParamError(f"distance must be even and >= 2, got {d2}")
    if not 1 <= w <= m:
        raise ParamError(f"need 1 <= w <= m, got w={w} m={m}")
    if target < 0:
        raise ParamError(f"negative target {target}")
    kept = _greedy_scan(m, d2, w, target)
    if len(kept) < target:
        raise InsufficientCode(
            achieved=len(kept),
            needed=target,
            code=ConstantWeightCode(m, w, d2, tuple(kept)),
        )
    return ConstantWeightCode(m, w, d2, tuple(kept))


def best_d4_code(m: int, w: int) -> ConstantWeightCode:
    """The larger of the residue-class and greedy distance-4 codes.

    Used wherever a construction needs "as many distance-4 words of weight
    w as we can actually build"; exact-value claims downstream are tied to
    this constructible size, not to the abstract maximum.
    """
    residue = graham_sloane_d4(m, w)
    greedy = _greedy_scan(m, 4, w, None)
    if len(greedy) > residue.size:
        return ConstantWeightCode(m, w, 4, tuple(greedy))
    return residue


def min_distance(code: ConstantWeightCode) -> int:
    """Minimum pairwise distance actually achieved (always even)."""
    if code.size < 2:
        raise ParamError("min_distance needs at least two words")
    return min((a ^ b).bit_count() for a, b in itertools.combinations(code.words, 2))


def serialize_code(code: ConstantWeightCode) -> str:
    """Render a code in the "cwc" text format (same line shape as layouts)."""
    lines = [f"cwc m={code.m} w={code.w} d={code.d2} size={code.size}"]
    for j, word in enumerate(code.words):
        lines.append(f"{j}: " + " ".join(str(s) for s in bits(word)))
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> ConstantWeightCode:
    """Parse the "cwc" text format back into a ConstantWeightCode."""
    # Local import: core's parser helpers stay private to each format.
    from .core import _header_int
    from .errors import (
        EmptyItemSet,
        MalformedHeader,
        MalformedItemLine,
        ServerIndexOutOfRange,
    )

    lines = text.splitlines()
    if not lines:
        raise MalformedHeader("empty input")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "cwc":
        raise MalformedHeader(f"bad header line {lines[0]!r}")
    m = _header_int(head[1], "m")
    w = _header_int(head[2], "w")
    d2 = _header_int(head[3], "d")
    size = _header_int(head[4], "size")
    body = lines[1:]
    if len(body) != size:
        raise MalformedHeader(f"header says size={size} but found {len(body)} lines")
    words = []
    for pos, line in enumerate(body):
        idx_str, sep, rest = line.partition(":")
        if not sep:
            raise MalformedItemLine(f"line {pos + 2}: missing ':'")
        try:
            idx = int(idx_str)
        except ValueError:
            raise MalformedItemLine(f"line {pos + 2}: bad word index {idx_str!r}") from None
        if idx != pos:
            raise MalformedItemLine(f"line {pos + 2}: expected word {pos}, got {idx}")
        tokens = rest.split()
        if not tokens:
            raise EmptyItemSet(f"word {pos} is empty")
        mask = 0
        for tok in tokens:
            try:
                s = int(tok)
            except ValueError:
                raise MalformedItemLine(f"word {pos}: bad position {tok!r}") from None
            if not 0 <= s < m:
                raise ServerIndexOutOfRange(f"word {pos}: position {s} outside 0..{m - 1}")
            mask |= 1 << s
        words.append(mask)
    return ConstantWeightCode(m, w, d2, tuple(words))
