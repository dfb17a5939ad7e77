"""
Shared fixtures and instance generators for the c3perm test suite.
"""

from itertools import combinations
from typing import Iterator

import numpy as np
import pytest

from c3perm.models.circuit import MismatchFreeCircuit, MultiControlledX, ToffoliCircuit
from c3perm.models.permutation import PermGate
from c3perm.services.descmult import DescMult, from_staircase, is_associative
from c3perm.services.f2core import F2Mat, F2Vec, rank
from c3perm.services.family import uk_circuit
from c3perm.services.permgate import AffineMap, circuit_to_perm

U3_GATES = [(1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 4, 7), (2, 5, 7), (1, 6, 7)]


def valid_triples(n: int):
    return [(i, j, k) for k in range(3, n + 1) for i, j in combinations(range(1, k), 2)]


def staircase_circuits(n: int) -> Iterator[ToffoliCircuit]:
    """Every staircase circuit on n qubits."""
    triples = valid_triples(n)
    for mask in range(1 << len(triples)):
        yield ToffoliCircuit.from_triples(t for b, t in enumerate(triples) if (mask >> b) & 1)


def associative_mults(n: int) -> Iterator[DescMult]:
    for circuit in staircase_circuits(n):
        m = from_staircase(circuit, n)
        if is_associative(m):
            yield m


def random_associative_mult(rng, n: int, density: float = 0.08) -> DescMult:
    """Rejection sampling over random staircase circuits."""
    triples = valid_triples(n)
    while True:
        chosen = [t for t in triples if rng.random() < density]
        m = from_staircase(ToffoliCircuit.from_triples(chosen), n)
        if is_associative(m):
            return m


def random_invertible(rng, n: int) -> F2Mat:
    while True:
        rows = tuple(int(r) for r in rng.integers(0, 1 << n, size=n))
        if rank(rows) == n:
            return F2Mat(n, rows)


def random_affine(rng, n: int) -> AffineMap:
    return AffineMap(random_invertible(rng, n), F2Vec(n, int(rng.integers(0, 1 << n))))


def random_mismatch_free(rng, n: int, max_gates: int = 4) -> MismatchFreeCircuit:
    """Gates with targets in one random qubit set and controls in its complement."""
    qubits = list(rng.permutation(np.arange(1, n + 1)))
    split = int(rng.integers(1, n))
    targets, controls = qubits[:split], qubits[split:]
    gates = set()
    for _ in range(int(rng.integers(1, max_gates + 1))):
        chosen = frozenset(int(c) for c in controls if rng.random() < 0.5)
        gates.add(MultiControlledX(chosen, int(rng.choice(targets))))
    return MismatchFreeCircuit(tuple(sorted(gates, key=str)))


@pytest.fixture
def u3_circuit() -> ToffoliCircuit:
    return uk_circuit(3)


@pytest.fixture
def u3_perm(u3_circuit) -> PermGate:
    return circuit_to_perm(u3_circuit, 7)


@pytest.fixture
def pi_prime() -> PermGate:
    """TOF(1, 2, 3) followed by TOF(3, 4, 5): staircase but outside C3."""
    return circuit_to_perm(ToffoliCircuit.from_triples([(1, 2, 3), (3, 4, 5)]), 5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)
