"""
Domain exceptions raised by the c3perm services.
"""

from typing import Any, Optional, Tuple


class C3PermError(Exception):
    """Base class for all c3perm errors."""


class DimensionMismatchError(C3PermError):
    """Operands live in spaces of different dimensions."""


class NotInvertibleError(C3PermError):
    """Matrix over F2 has rank below its dimension."""


class PreconditionViolatedError(C3PermError):
    """An input violates a stated algebraic precondition."""

    def __init__(self, which: Any, axiom: str):
        self.which = which
        self.axiom = axiom
        super().__init__(f"precondition violated by {which}: {axiom}")


class BadLengthError(C3PermError):
    """Truth table length is not a power of two."""


class NotBijectiveError(C3PermError):
    """Table does not describe a permutation of basis states."""


class IndexOutOfRangeError(C3PermError):
    """Qubit index outside [1..n]."""


class UnknownGateError(C3PermError):
    """Gate name not supported in this context."""


class CircuitParseError(C3PermError):
    """Malformed line in a circuit or multiplication table text."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class NotStaircaseError(C3PermError):
    """Permutation or circuit is not in staircase form."""

    def __init__(self, reason: str, coordinate: Optional[int] = None, term: Optional[str] = None):
        self.reason = reason
        self.coordinate = coordinate
        self.term = term
        super().__init__(reason)


class NotAssociativeError(C3PermError):
    """Descending multiplication table fails associativity."""

    def __init__(self, witness: Any):
        self.witness = witness
        super().__init__(f"multiplication is not associative: {witness}")


class NotStaircaseC3Error(C3PermError):
    """Permutation is not a staircase form permutation in C3."""


class NotInC3Error(C3PermError):
    """Permutation is outside the third level of the hierarchy."""

    def __init__(self, witness: Any):
        self.witness = witness
        super().__init__(f"permutation is not in C3: {witness}")


class InternalContradictionError(C3PermError):
    """A state the reduction proof rules out was reached."""


class TooLargeError(C3PermError):
    """Input exceeds the qubit cap of the requested operation."""

    def __init__(self, n: int, limit: int, operation: str = ""):
        self.n = n
        self.limit = limit
        super().__init__(f"{operation or 'operation'} supports n <= {limit}, got n = {n}")


class NotSemiCliffordError(C3PermError):
    """Permutation is not semi-Clifford."""


class HasMismatchError(C3PermError):
    """Circuit uses a qubit as a target in one gate and a control in another."""

    def __init__(self, pair: Tuple[Any, Any]):
        self.pair = pair
        super().__init__(f"mismatch between gates {pair[0]} and {pair[1]}")


class BadShardSpecError(C3PermError):
    """Shard count is not a power of two within range."""


class CorruptCheckpointError(C3PermError):
    """Checkpoint file is unreadable or belongs to another survey."""


class VerificationFailedError(C3PermError):
    """A certificate clause evaluated to false."""

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        self.detail = detail
        super().__init__(f"clause {clause} failed" + (f": {detail}" if detail else ""))


class EmptyProductError(C3PermError):
    """Product over an empty factor set requested; the algebra has no unit."""
