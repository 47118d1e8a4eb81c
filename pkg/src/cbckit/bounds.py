"""Closed-form storage bounds and exact-value dispatch.

Everything here is exact big-integer / rational arithmetic: binomial
coefficients overflow machine words quickly, and the optimality claims
ride on floors and ceilings being applied exactly where the formulas put
them, nowhere else.

Regime tags used in results (and by the CLI):

* ``trivial``        n <= m, one server per item suffices
* ``m=k``            as many servers as the batch size
* ``n=m+1``          one item more than servers
* ``n=m+2``          two items more than servers (two-case formula)
* ``large-n``        n >= (k-1)*C(m,k-1), fully replicated batches
* ``range-a``        deletion construction range, C(m,k-2) <= n
* ``range-b``        constant-weight-code range below C(m,k-2), k >= 5
* ``counting-bound`` general double-counting lower bound (no exact value)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Optional

from . import cwc
from .core import Params, Profile, Rational
from .errors import ParamError, RangeError


@dataclass(frozen=True)
class BoundResult:
    """Certified bracket on the optimal total storage N(n,k,m).

    ``lower`` is always a proven lower bound; ``exact`` is set when some
    regime pins the value; ``upper`` is set when a construction in this
    package achieves it.  ``chosen_c`` records the index selected by the
    counting bound, when that bound was evaluated.
    """

    lower: int
    exact: Optional[int] = None
    upper: Optional[int] = None
    source: str = ""
    chosen_c: Optional[int] = None

    def __post_init__(self):
        if self.exact is not None and self.lower > self.exact:
            raise ParamError(f"lower {self.lower} exceeds exact {self.exact}")
        hi = self.exact if self.exact is not None else self.lower
        if self.upper is not None and hi > self.upper:
            raise ParamError(f"upper {self.upper} below {hi}")


def u_value(m: int, k: int, c: int) -> Rational:
    """The threshold (k-1)*C(m,c)/C(k-1,c); strictly increasing in c."""
    if not (1 <= c <= k - 1 <= m - 1):
        raise ParamError(f"need 1 <= c <= k-1 <= m-1, got m={m} k={k} c={c}")
    return Fraction((k - 1) * comb(m, c), comb(k - 1, c))


def check_inequality(p: Profile, m: int, i: int) -> bool:
    """Necessary counting condition at index i for a valid layout's profile.

    sum_{j=1..i} C(m-j, i-j) * A_j <= i * C(m, i).  Each i-server subset
    can fully contain at most i replica sets; summing over all i-subsets
    counts each j-replica item C(m-j, i-j) times.
    """
    if not 1 <= i <= p.k - 1:
        raise ParamError(f"need 1 <= i <= k-1, got i={i} k={p.k}")
    if m < 1:
        raise ParamError(f"need at least one server, got m={m}")
    lhs = sum(comb(m - j, i - j) * p.a(j) for j in range(1, i + 1))
    return lhs <= i * comb(m, i)


def b_value(n: int, k: int, m: int, c: int) -> Rational:
    """Unfloored counting bound n*c - (k-c)*(U(m,k,c) - n)/(m-k+1)."""
    if not (1 <= c <= k - 1):
        raise ParamError(f"need 1 <= c <= k-1, got c={c} k={k}")
    if m <= k - 1:
        raise ParamError(f"need m >= k, got m={m} k={k}")
    return n * c - Fraction(k - c) * (u_value(m, k, c) - n) / (m - k + 1)


def lower_bound(n: int, k: int, m: int) -> BoundResult:
    """Floored counting lower bound on N(n,k,m) for n up to (k-1)*C(m,k-1).

    Picks the least c with n <= U(m,k,c) and returns
    n*c - floor((k-c)*(U - n)/(m-k+1)).  The unfloored b-values are
    checked to peak exactly at this c (they rise up to it and fall after).
    """
    if not 2 <= k <= m:
        raise ParamError(f"need 2 <= k <= m, got k={k} m={m}")
    if n < 1:
        raise ParamError(f"need n >= 1, got n={n}")
    ceiling = (k - 1) * comb(m, k - 1)
    if n > ceiling:
        raise RangeError(
            f"n={n} above (k-1)*C(m,k-1)={ceiling}; the bulk-replication "
            "formula applies there instead"
        )
    c = next(c for c in range(1, k) if n <= u_value(m, k, c))
    value = n * c - math.floor(Fraction(k - c) * (u_value(m, k, c) - n) / (m - k + 1))
    b_all = [b_value(n, k, m, i) for i in range(1, k)]
    if max(b_all) != b_all[c - 1]:
        raise AssertionError(f"b(n,k,m,.) not maximal at c={c} for n={n} k={k} m={m}")
    return BoundResult(lower=value, source="counting-bound", chosen_c=c)


def _ceil_sqrt(x: int) -> int:
    s = isqrt(x)
    return s if s * s == x else s + 1


def _n_m_plus_2(k: int, m: int) -> int:
    """Exact N(m+2, k, m): two cases split on m+1-k vs ceil(sqrt(k+1))."""
    threshold = _ceil_sqrt(k + 1)
    if m + 1 - k >= threshold:
        return m + k - 2 + _ceil_sqrt(4 * (k + 1))
    return 2 * m - 2 + 1 + -((k + 1) // -(m + 1 - k))


def uniform_n_ceiling(m: int, c: int, k: int) -> Rational:
    """Maximum item count supported by any layout storing every item on c servers."""
    return u_value(m, k, c)


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def _least_prime_power(m: int) -> int:
    q = max(m, 2)
    while not _is_prime_power(q):
        q += 1
    return q


def cwc_bounds(m: int, d2: int, w: int) -> Rational:
    """Existence lower bound on the size of a constant-weight code.

    C(m,w) for distance 2 (automatic), C(m,w)/m for distance 4, and
    C(m,w)/q^(d-1) with q the least prime power >= m for distance 2d.
    Informational: the cwc module builds concrete codes separately.
    """
    if d2 < 2 or d2 % 2:
        raise ParamError(f"distance must be even and >= 2, got {d2}")
    if not 1 <= w <= m:
        raise ParamError(f"need 1 <= w <= m, got w={w} m={m}")
    d = d2 // 2
    if d == 1:
        return Fraction(comb(m, w))
    if d == 2:
        return Fraction(comb(m, w), m)
    return Fraction(comb(m, w), _least_prime_power(m) ** (d - 1))


# Regimes whose exact value is achieved by a construction in this package.
_CONSTRUCTIVE = {"trivial", "m=k", "n=m+1", "large-n", "range-a", "range-b"}


def known_n(params: Params) -> BoundResult:
    """Dispatch every applicable closed-form regime for N(n,k,m).

    Most specific regimes first; when several apply their values must
    agree (asserted).  Falls back to the counting lower bound when no
    regime pins the value; in the code-construction range the result may
    instead be an exact lower/upper pair one apart.
    """
    n, k, m = params.n, params.k, params.m
    if not 2 <= k <= m:
        raise ParamError(f"need 2 <= k <= m, got k={k} m={m}")
    if n < 1:
        raise ParamError(f"need n >= 1, got n={n}")

    hits: list[tuple[str, int]] = []
    if n <= m:
        hits.append(("trivial", n))
    if m == k and n >= k:
        hits.append(("m=k", k * n - k * (k - 1)))
    if n == m + 1:
        hits.append(("n=m+1", m + k))
    if n == m + 2:
        hits.append(("n=m+2", _n_m_plus_2(k, m)))
    ceiling = (k - 1) * comb(m, k - 1)
    if n >= ceiling:
        hits.append(("large-n", k * n - ceiling))
    if k >= 3 and comb(m, k - 2) <= n <= ceiling:
        gap = ceiling - n
        hits.append(("range-a", n * (k - 1) - gap // (m - k + 1)))

    range_b_upper: Optional[int] = None
    if k >= 5 and n <= comb(m, k - 2):
        code = cwc.best_d4_code(m, k - 3)
        width = m - k + 1
        if n >= comb(m, k - 2) - width * code.size:
            gap = comb(m, k - 2) - n
            built = n * (k - 2) - 2 * (gap // width)
            if 2 * (gap % width) < width:
                hits.append(("range-b", built))
            else:
                range_b_upper = built

    if hits:
        exact = hits[0][1]
        if any(value != exact for _, value in hits):
            raise AssertionError(f"regimes disagree for n={n} k={k} m={m}: {hits}")
        source = ",".join(tag for tag, _ in hits)
        constructive = any(tag in _CONSTRUCTIVE for tag, _ in hits)
        return BoundResult(
            lower=exact,
            exact=exact,
            upper=exact if constructive else None,
            source=source,
        )

    base = lower_bound(n, k, m)
    if range_b_upper is not None:
        return BoundResult(
            lower=base.lower,
            upper=range_b_upper,
            source="counting-bound,range-b",
            chosen_c=base.chosen_c,
        )
    return BoundResult(lower=base.lower, source="counting-bound", chosen_c=base.chosen_c)
