"""Exception types shared across the toolkit."""

from __future__ import annotations


class CbcError(Exception):
    """Base class for every toolkit-specific error."""


class ParamError(CbcError, ValueError):
    """A parameter is outside the domain an operation is defined on."""


class RangeError(CbcError, ValueError):
    """Parameters are well-formed but outside a construction's covered range."""


class OversizedSet(CbcError, ValueError):
    """An item's replica set is larger than the batch size allows."""

    def __init__(self, index: int, size: int, k: int):
        self.index = index
        self.size = size
        self.k = k
        super().__init__(f"item {index} has {size} replicas, more than k={k}")


class FormatError(CbcError, ValueError):
    """Serialized input does not follow the text format."""


class MalformedHeader(FormatError):
    pass


class MalformedItemLine(FormatError):
    pass


class ServerIndexOutOfRange(FormatError):
    pass


class EmptyItemSet(FormatError):
    pass


class NoPlan(CbcError):
    """A batch cannot be served one read per server.

    Carries the deficiency witness: item indices whose combined replica
    sets cover fewer servers than there are items.
    """

    def __init__(self, witness):
        self.witness = witness
        super().__init__(
            f"items {witness.items} cover only {len(witness.servers)} servers"
        )


class InsufficientCode(CbcError):
    """A constant-weight code ran out of words before the target size."""

    def __init__(self, achieved: int, needed: int, code=None):
        self.achieved = achieved
        self.needed = needed
        self.code = code
        super().__init__(f"code has {achieved} words, {needed} needed")


class Unsupported(CbcError):
    """No implemented construction covers the requested parameters."""


class BudgetExceeded(CbcError):
    """Exhaustive search hit its node budget before finishing."""

    def __init__(self, nodes_explored: int, best_upper: int | None = None):
        self.nodes_explored = nodes_explored
        self.best_upper = best_upper
        msg = f"search budget exhausted after {nodes_explored} validity checks"
        if best_upper is not None:
            msg += f" (best constructive upper bound {best_upper})"
        super().__init__(msg)


class Unknown(CbcError):
    """The search could not settle the exact value within budget."""
