"""
Permutation gate model: a bijection on n-bit basis states stored as a truth table.
"""

from typing import Optional, Sequence, Union

import numpy as np

from c3perm.core.constants import MAX_TRUTH_TABLE_QUBITS
from c3perm.core.exceptions import (
    BadLengthError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotBijectiveError,
    TooLargeError,
)


class PermGate:
    """
    Permutation gate on n qubits.

    table[x] is the image of basis state x, where x = sum a_i 2^(n-i) for the
    ket |a_1 ... a_n>. The table is stored read-only so instances can be shared.
    """

    __slots__ = ("n", "table")

    def __init__(self, table: Union[Sequence[int], np.ndarray], n: Optional[int] = None):
        arr = np.array(table, dtype=np.int64).reshape(-1)
        size = arr.size
        if size < 2 or size & (size - 1):
            raise BadLengthError(f"truth table length {size} is not a power of two >= 2")
        width = size.bit_length() - 1
        if n is not None and n != width:
            raise DimensionMismatchError(f"table of length {size} does not describe {n} qubits")
        if width > MAX_TRUTH_TABLE_QUBITS:
            raise TooLargeError(width, MAX_TRUTH_TABLE_QUBITS, "truth table")
        if arr.min() < 0 or arr.max() >= size or np.bincount(arr, minlength=size).max() != 1:
            raise NotBijectiveError(f"table on {width} qubits is not a bijection")
        arr.setflags(write=False)
        self.n = width
        self.table = arr

    @classmethod
    def identity(cls, n: int) -> "PermGate":
        return cls(np.arange(1 << n, dtype=np.int64))

    @classmethod
    def translation(cls, n: int, w: int) -> "PermGate":
        """The Pauli permutation X^w."""
        return cls(np.arange(1 << n, dtype=np.int64) ^ w)

    def __call__(self, state: int) -> int:
        return int(self.table[state])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGate):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"<PermGate(n={self.n})>"

    @property
    def size(self) -> int:
        return 1 << self.n

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(self.size)))

    def inverse(self) -> "PermGate":
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.size, dtype=np.int64)
        return PermGate(inv)

    def compose(self, other: "PermGate") -> "PermGate":
        """Return self o other, i.e. apply other first."""
        if self.n != other.n:
            raise DimensionMismatchError(f"cannot compose {self.n}- and {other.n}-qubit gates")
        return PermGate(self.table[other.table])

    def then(self, other: "PermGate") -> "PermGate":
        """Apply self first, then other."""
        return other.compose(self)

    def output_bit(self, i: int) -> np.ndarray:
        """Truth table of output coordinate i as a uint8 array."""
        if not 1 <= i <= self.n:
            raise IndexOutOfRangeError(f"qubit {i} outside [1, {self.n}]")
        return ((self.table >> (self.n - i)) & 1).astype(np.uint8)

    def tensor_identity(self, m: int) -> "PermGate":
        """Append m idle qubits after the last qubit."""
        if m < 0:
            raise IndexOutOfRangeError(f"cannot append {m} qubits")
        low = np.arange(1 << m, dtype=np.int64)
        table = (self.table[:, None] << m) | low[None, :]
        return PermGate(table.reshape(-1))
