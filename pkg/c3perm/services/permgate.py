"""
Permutation gate service: circuit evaluation, staircase form and affine detection.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from c3perm.core.constants import PERMUTATION_GATES
from c3perm.core.exceptions import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotStaircaseError,
    UnknownGateError,
)
from c3perm.models.circuit import Gate, MultiControlledX, Toffoli, ToffoliCircuit
from c3perm.models.permutation import PermGate
from c3perm.services.anf import AnfPoly, anf_render, tt_to_anf
from c3perm.services.f2core import (
    F2Mat,
    F2Vec,
    bit,
    invert,
    iter_support,
    mat_mul,
    mat_vec,
    mat_vec_bits,
    rank,
)

logger = logging.getLogger(__name__)

AnyGate = Union[Toffoli, MultiControlledX, Gate]


@dataclass(frozen=True)
class AffineMap:
    """The Clifford permutation v -> M v + w."""

    M: F2Mat
    w: F2Vec

    def __post_init__(self):
        if self.M.n != self.w.n:
            raise DimensionMismatchError(f"matrix of dimension {self.M.n} with shift of {self.w.n}")
        invert(self.M)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(F2Mat.identity(n), F2Vec.zero(n))

    @classmethod
    def linear(cls, m: F2Mat) -> "AffineMap":
        return cls(m, F2Vec.zero(m.n))

    @classmethod
    def translation(cls, w: F2Vec) -> "AffineMap":
        return cls(F2Mat.identity(w.n), w)

    @property
    def n(self) -> int:
        return self.M.n

    def apply(self, v: int) -> int:
        return mat_vec_bits(self.M.rows, v) ^ self.w.bits

    def to_perm(self) -> PermGate:
        n = self.n
        states = np.arange(1 << n, dtype=np.int64)
        out = np.full_like(states, self.w.bits)
        for j, col in enumerate(self.M.columns(), start=1):
            out ^= ((states >> (n - j)) & 1) * col
        return PermGate(out)

    def inverse(self) -> "AffineMap":
        m_inv = invert(self.M)
        return AffineMap(m_inv, mat_vec(m_inv, self.w))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """Return self o other."""
        return AffineMap(mat_mul(self.M, other.M), mat_vec(self.M, other.w) + self.w)

    def is_identity(self) -> bool:
        return self.w.is_zero() and self.M == F2Mat.identity(self.n)


def _controls_and_target(gate: AnyGate) -> tuple:
    if isinstance(gate, Toffoli):
        return (gate.i, gate.j), gate.k
    if isinstance(gate, MultiControlledX):
        return tuple(gate.controls), gate.target
    if gate.name not in PERMUTATION_GATES:
        raise UnknownGateError(f"{gate.name} is not a permutation gate")
    return gate.qubits[:-1], gate.qubits[-1]


def apply_gates(gates: Iterable[AnyGate], n: int, states: Optional[np.ndarray] = None) -> np.ndarray:
    """Push every basis state through the gates in application order."""
    out = np.arange(1 << n, dtype=np.int64) if states is None else np.array(states, dtype=np.int64)
    for gate in gates:
        controls, target = _controls_and_target(gate)
        qubits = (*controls, target)
        if max(qubits) > n:
            raise IndexOutOfRangeError(f"gate {gate} acts outside {n} qubits")
        cmask = 0
        for c in controls:
            cmask |= bit(n, c)
        hit = (out & cmask) == cmask
        out[hit] ^= bit(n, target)
    return out


def circuit_to_perm(c: Union[ToffoliCircuit, Sequence[AnyGate]], n: int) -> PermGate:
    """
    Truth table of a permutation circuit.

    Args:
        c: gates in application order (TOF, CNOT, X, MCX)
        n: number of qubits

    Returns:
        PermGate: the composed permutation
    """
    gates = c.gates if isinstance(c, ToffoliCircuit) else c
    return PermGate(apply_gates(gates, n))


def is_staircase(c: ToffoliCircuit) -> bool:
    """Distinct gates, controls below the target, targets nondecreasing."""
    if len(set(c.gates)) != len(c.gates):
        return False
    last_target = 0
    for g in c.gates:
        if not g.i < g.j < g.k or g.k < last_target:
            return False
        last_target = g.k
    return True


def to_staircase(pi: PermGate) -> ToffoliCircuit:
    """
    Read the staircase circuit of pi from the coordinates of its inverse.

    Coordinate k of the inverse must be a_k plus degree-two terms a_i a_j with
    i < j < k; each such term is the gate TOF(i, j, k).

    Raises:
        NotStaircaseError: naming the first offending coordinate and term
    """
    n = pi.n
    inv = pi.inverse()
    gates: List[Toffoli] = []
    for k in range(1, n + 1):
        coord = tt_to_anf(inv.output_bit(k))
        if bit(n, k) not in coord.monomials:
            raise NotStaircaseError(
                f"coordinate {k} of the inverse lacks the linear term a{k}", coordinate=k
            )
        for m in sorted(coord.monomials - {bit(n, k)}):
            variables = list(iter_support(n, m))
            if len(variables) != 2 or variables[1] >= k:
                term = anf_render(AnfPoly(n, frozenset({m})))
                raise NotStaircaseError(
                    f"coordinate {k} of the inverse has term {term}", coordinate=k, term=term
                )
            gates.append(Toffoli(variables[0], variables[1], k))
    circuit = ToffoliCircuit(tuple(gates)).canonical()
    logger.debug(f"staircase form with {len(circuit)} Toffoli gates on {n} qubits")
    return circuit


def as_affine(pi: PermGate) -> Optional[AffineMap]:
    """Return (M, w) with pi(v) = M v + w, or None when pi is not affine."""
    n = pi.n
    w = pi(0)
    columns = [pi(bit(n, j)) ^ w for j in range(1, n + 1)]
    if rank(columns) < n:
        return None
    candidate = AffineMap(F2Mat.from_columns(n, columns), F2Vec(n, w))
    if candidate.to_perm() != pi:
        return None
    return candidate


def highest_bit(values: np.ndarray, n: int) -> np.ndarray:
    """Bit position of the leading one of each entry (-1 for zero)."""
    out = np.full(values.shape, -1, dtype=np.int64)
    for b in range(n):
        out[(values >> b) != 0] = b
    return out


def staircase_conditions(pi: PermGate) -> bool:
    """
    Check pi(0) = 0, pi(e_i) = e_i, and that v and pi(v) agree on the first two
    ones of v whenever v has at least two ones.

    These are equivalent to staircase form only for permutations in C3.
    """
    n = pi.n
    if pi(0) != 0 or any(pi(bit(n, i)) != bit(n, i) for i in range(1, n + 1)):
        return False
    states = np.arange(1 << n, dtype=np.int64)
    h1 = highest_bit(states, n)
    rest = np.where(h1 >= 0, states ^ (np.int64(1) << np.maximum(h1, 0)), 0)
    h2 = highest_bit(rest, n)
    multi = h2 >= 0
    shift = h2[multi]
    return bool(np.array_equal(pi.table[multi] >> shift, states[multi] >> shift))
