"""
Pauli operators in symplectic form.
"""

from dataclasses import dataclass
from typing import Tuple

from c3perm.core.exceptions import DimensionMismatchError, IndexOutOfRangeError

_PHASE_PREFIXES = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PREFIX_OF_PHASE = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class Pauli:
    """
    The operator i^s X^u Z^v on n qubits.

    u and v are packed like F2 vectors (qubit 1 in the most significant bit).
    Y on a qubit is i X Z, so a label with y letters Y carries y extra units of phase.
    """

    n: int
    s: int = 0
    u: int = 0
    v: int = 0

    def __post_init__(self):
        object.__setattr__(self, "s", self.s % 4)
        limit = 1 << self.n
        if self.n < 1 or not (0 <= self.u < limit and 0 <= self.v < limit):
            raise DimensionMismatchError(f"Pauli labels exceed {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "Pauli":
        return cls(n)

    @classmethod
    def x(cls, n: int, i: int) -> "Pauli":
        _check_qubit(n, i)
        return cls(n, 0, 1 << (n - i), 0)

    @classmethod
    def z(cls, n: int, i: int) -> "Pauli":
        _check_qubit(n, i)
        return cls(n, 0, 0, 1 << (n - i))

    @classmethod
    def from_label(cls, label: str) -> "Pauli":
        """Parse labels such as 'XZI', '-iXZI' or '+Y'."""
        text = label.strip().replace("−", "-")
        body_start = len(text) - len(text.lstrip("+-i"))
        prefix, body = text[:body_start], text[body_start:]
        if prefix not in _PHASE_PREFIXES or not body:
            raise ValueError(f"malformed Pauli label {label!r}")
        s = _PHASE_PREFIXES[prefix]
        n = len(body)
        u = v = 0
        for pos, letter in enumerate(body.upper(), start=1):
            b = 1 << (n - pos)
            if letter == "X":
                u |= b
            elif letter == "Z":
                v |= b
            elif letter == "Y":
                u |= b
                v |= b
                s += 1
            elif letter != "I":
                raise ValueError(f"malformed Pauli label {label!r}")
        return cls(n, s, u, v)

    @property
    def label(self) -> str:
        letters = []
        for pos in range(1, self.n + 1):
            b = 1 << (self.n - pos)
            letters.append("IXZY"[bool(self.u & b) + 2 * bool(self.v & b)])
        ys = (self.u & self.v).bit_count()
        return _PREFIX_OF_PHASE[(self.s - ys) % 4] + "".join(letters)

    @property
    def symplectic(self) -> Tuple[int, int]:
        return (self.u, self.v)

    @property
    def weight(self) -> int:
        return (self.u | self.v).bit_count()

    def __mul__(self, other: "Pauli") -> "Pauli":
        if self.n != other.n:
            raise DimensionMismatchError(f"{self.n}- and {other.n}-qubit Paulis")
        sign = 2 * ((self.v & other.u).bit_count() & 1)
        return Pauli(self.n, self.s + other.s + sign, self.u ^ other.u, self.v ^ other.v)

    def commutes(self, other: "Pauli") -> bool:
        return not (((self.u & other.v).bit_count() + (self.v & other.u).bit_count()) & 1)

    def phase_free(self) -> "Pauli":
        """Same X and Z parts with phase chosen so the label has a + prefix."""
        return Pauli(self.n, (self.u & self.v).bit_count(), self.u, self.v)

    def __str__(self) -> str:
        return self.label


def _check_qubit(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise IndexOutOfRangeError(f"qubit {i} outside [1, {n}]")
