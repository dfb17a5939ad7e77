"""
Circuit models: Toffoli circuits, multi-controlled NOT circuits and general gate lists.

All circuits are stored in application order (the first gate listed acts first).
Product notation such as TOF_{1,6,7} ... TOF_{1,2,3} reads right to left, so its
application order is the reverse of the written order.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, Optional, Tuple

from c3perm.core.constants import GATE_ARITY
from c3perm.core.exceptions import IndexOutOfRangeError, UnknownGateError


@dataclass(frozen=True, order=True)
class Toffoli:
    """TOF(i, j, k): controls i, j and target k; controls normalised to i < j."""

    i: int
    j: int
    k: int

    def __post_init__(self):
        if self.i == self.j:
            raise IndexOutOfRangeError(f"Toffoli controls must differ, got {self.i} twice")
        if self.k in (self.i, self.j):
            raise IndexOutOfRangeError(f"Toffoli target {self.k} coincides with a control")
        if min(self.i, self.j, self.k) < 1:
            raise IndexOutOfRangeError("qubit indices are 1-based")
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.k, self.i, self.j)

    def to_mcx(self) -> "MultiControlledX":
        return MultiControlledX(frozenset((self.i, self.j)), self.k)

    def __str__(self) -> str:
        return f"TOF {self.i} {self.j} {self.k}"


@dataclass(frozen=True)
class ToffoliCircuit:
    """Ordered Toffoli gates in application order."""

    gates: Tuple[Toffoli, ...] = ()

    @classmethod
    def from_triples(cls, triples: Iterable[Tuple[int, int, int]]) -> "ToffoliCircuit":
        return cls(tuple(Toffoli(i, j, k) for i, j, k in triples))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Toffoli]:
        return iter(self.gates)

    @property
    def max_qubit(self) -> int:
        return max((max(g.i, g.j, g.k) for g in self.gates), default=0)

    def triples(self) -> Tuple[Tuple[int, int, int], ...]:
        return tuple((g.i, g.j, g.k) for g in self.gates)

    def gate_set(self) -> FrozenSet[Toffoli]:
        return frozenset(self.gates)

    def canonical(self) -> "ToffoliCircuit":
        """Same gates sorted by target, then controls."""
        return ToffoliCircuit(tuple(sorted(self.gates, key=lambda g: g.sort_key)))


@dataclass(frozen=True)
class MultiControlledX:
    """C^*X gate: flip the target when every control is 1."""

    controls: FrozenSet[int]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", frozenset(self.controls))
        if self.target in self.controls:
            raise IndexOutOfRangeError(f"target {self.target} is also a control")
        if self.target < 1 or any(c < 1 for c in self.controls):
            raise IndexOutOfRangeError("qubit indices are 1-based")

    @property
    def num_controls(self) -> int:
        return len(self.controls)

    @property
    def qubits(self) -> FrozenSet[int]:
        return self.controls | {self.target}

    def mismatches(self, other: "MultiControlledX") -> bool:
        """True when one gate's target is a control of the other."""
        return self.target in other.controls or other.target in self.controls

    def __str__(self) -> str:
        if not self.controls:
            return f"X {self.target}"
        return "MCX " + " ".join(str(c) for c in sorted(self.controls)) + f" {self.target}"


@dataclass(frozen=True)
class MismatchFreeCircuit:
    """Multi-controlled NOT gates in application order."""

    gates: Tuple[MultiControlledX, ...] = ()

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[MultiControlledX]:
        return iter(self.gates)

    @property
    def max_controls(self) -> int:
        return max((g.num_controls for g in self.gates), default=0)

    @property
    def max_qubit(self) -> int:
        return max((max(g.qubits) for g in self.gates), default=0)

    def find_mismatch(self) -> Optional[Tuple[int, int]]:
        """Return the first pair of 1-based gate positions that mismatch or repeat."""
        for a in range(len(self.gates)):
            for b in range(a + 1, len(self.gates)):
                if self.gates[a] == self.gates[b] or self.gates[a].mismatches(self.gates[b]):
                    return (a + 1, b + 1)
        return None


@dataclass(frozen=True)
class Gate:
    """A gate of the circuit text format, e.g. Gate("CSWAP", (7, 1, 6))."""

    name: str
    qubits: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        name = self.name.upper()
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if name not in GATE_ARITY:
            raise UnknownGateError(f"unknown gate {self.name!r}")
        arity = GATE_ARITY[name]
        if arity is not None and len(self.qubits) != arity:
            raise IndexOutOfRangeError(f"{name} takes {arity} qubits, got {len(self.qubits)}")
        if not self.qubits:
            raise IndexOutOfRangeError(f"{name} needs at least one qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise IndexOutOfRangeError(f"{name} qubits must be distinct: {self.qubits}")
        if min(self.qubits) < 1:
            raise IndexOutOfRangeError("qubit indices are 1-based")

    @classmethod
    def from_toffoli(cls, g: Toffoli) -> "Gate":
        return cls("TOF", (g.i, g.j, g.k))

    @classmethod
    def from_mcx(cls, g: MultiControlledX) -> "Gate":
        return cls("MCX", tuple(sorted(g.controls)) + (g.target,))

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.qubits)])
