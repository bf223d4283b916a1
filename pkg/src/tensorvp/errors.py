"""Exception hierarchy shared by every module.

All errors derive from :class:`TensorVPError` (itself a ``ValueError``) so the
CLI can map any of them to exit status 2 with one ``except`` clause.
"""

from __future__ import annotations


class TensorVPError(ValueError):
    """Base class for validation and precondition failures."""


class OrderMismatch(TensorVPError):
    def __init__(self, message: str, path: tuple[int, ...] = ()):
        self.path = tuple(path)
        if path:
            message = f"{message} (at node path {list(path)})"
        super().__init__(message)


class SymbolicEntry(TensorVPError):
    pass


class IndexOutOfRange(TensorVPError):
    pass


class UnboundVariable(TensorVPError):
    def __init__(self, names):
        self.names = sorted(map(str, names))
        super().__init__("unbound variable(s): " + ", ".join(self.names))


class MixedOperators(TensorVPError):
    pass


class LeafDimensionZero(TensorVPError):
    pass


class NotScalar(TensorVPError):
    pass


class NotMultiplicativelyDisjoint(TensorVPError):
    pass


class NoCommonShape(TensorVPError):
    pass


class LimitExceeded(TensorVPError):
    pass


class VectorLeafPresent(TensorVPError):
    pass


class NotVector(TensorVPError):
    pass


class NotTotallyTame(TensorVPError):
    pass


class DimensionZero(TensorVPError):
    pass


class SizeLimitExceeded(TensorVPError):
    pass


class MalformedInput(TensorVPError):
    """JSON document does not follow one of the exchange formats."""
