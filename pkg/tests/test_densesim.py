"""
Tests for the exact dense-unitary oracle.
"""

import numpy as np
import pytest

from c3perm.core.exceptions import IndexOutOfRangeError, TooLargeError
from c3perm.models.circuit import Gate, ToffoliCircuit
from c3perm.models.pauli import Pauli
from c3perm.models.permutation import PermGate
from c3perm.services.densesim import (
    DenseUnitary,
    build,
    is_c3_dense,
    is_c4_dense,
    is_clifford,
    is_pauli,
    verify_gottesman_mochon,
)
from c3perm.services.hierarchy import is_c3_perm
from c3perm.services.permgate import circuit_to_perm
from tests.conftest import staircase_circuits

CLIFFORD_GATES = ["H", "S", "CNOT", "CZ", "X", "Z"]


def random_clifford_circuit(rng, n: int, length: int = 8):
    gates = []
    for _ in range(length):
        name = CLIFFORD_GATES[int(rng.integers(len(CLIFFORD_GATES)))]
        arity = 2 if name in ("CNOT", "CZ") else 1
        qubits = rng.choice(np.arange(1, n + 1), size=arity, replace=False)
        gates.append(Gate(name, tuple(int(q) for q in qubits)))
    return gates


def test_build_examples():
    h = build("H 1")
    assert h.m == 1
    assert np.allclose(h.to_complex(), np.array([[1, 1], [1, -1]]) / np.sqrt(2))

    tof = build("TOF 1 2 3")
    expected = np.eye(8)
    expected[[6, 7]] = expected[[7, 6]]
    assert np.array_equal(tof.to_complex().real, expected)
    assert tof == DenseUnitary.from_perm(circuit_to_perm(ToffoliCircuit.from_triples([(1, 2, 3)]), 3))


def test_build_is_exact_and_unitary(rng):
    for _ in range(20):
        u = build(random_clifford_circuit(rng, 3) + [Gate("T", (1,)), Gate("CCZ", (1, 2, 3))], 3)
        assert u @ u.dagger() == DenseUnitary.identity(3)


def test_hadamard_squares_to_identity():
    h = build("H 1\nH 1")
    assert h == DenseUnitary.identity(1)
    assert h.m == 0


def test_build_errors():
    with pytest.raises(IndexOutOfRangeError):
        build([Gate("H", (3,))], 2)
    with pytest.raises(TooLargeError):
        build("H 9")


def test_pauli_matrices():
    for label in ("X", "Y", "Z", "XY", "-iZX", "IZY"):
        assert is_pauli(DenseUnitary.from_pauli(Pauli.from_label(label)))
    y = Pauli.from_label("Y")
    assert DenseUnitary.identity(1).times_pauli(y) == DenseUnitary.from_pauli(y)
    assert not is_pauli(build("H 1"))
    assert not is_pauli(build("CNOT 1 2"))


def test_conjugate_pauli_matches_dense_product():
    u = build("H 1\nCNOT 1 2\nS 2", 2)
    p = Pauli.from_label("XZ")
    assert u.conjugate_pauli(p) == u.conjugate(DenseUnitary.from_pauli(p))


def test_clifford_examples():
    assert is_clifford(build("H 1"))
    assert is_clifford(build("H 1\nCNOT 1 2\nS 2\nCZ 1 2", 2))
    assert not is_clifford(build("T 1"))
    assert not is_clifford(build("TOF 1 2 3"))


def test_c3_examples():
    assert is_c3_dense(build("T 1"))
    assert is_c3_dense(build("TOF 1 2 3"))
    assert is_c3_dense(build("CCZ 1 2 3"))
    assert not is_c3_dense(build("MCX 1 2 3 4"))


def test_c4_examples():
    assert is_c4_dense(build("MCX 1 2 3 4"))
    assert is_c4_dense(build("TOF 1 2 3", 4))


def test_product_of_two_toffolis_leaves_the_hierarchy():
    # TOF(1,3,2) acts first
    u = build("TOF 1 3 2\nTOF 1 2 3", 4)
    assert not is_c3_dense(u)
    assert not is_c4_dense(u)


def test_products_with_large_coefficients_stay_exact():
    big = 2 ** 40 + 1
    coeffs = np.zeros((4, 2, 2), dtype=np.int64)
    coeffs[0] = [[big, 0], [0, 1]]
    a = DenseUnitary(1, coeffs)
    square = a @ a
    assert square.coeffs[0, 0, 0] == big ** 2
    assert square.coeffs.dtype == object
    fourth = square @ square
    assert fourth.coeffs[0, 0, 0] == big ** 4
    assert fourth.coeffs[0, 1, 1] == 1
    assert hash(fourth) == hash(square @ square)


def test_size_caps():
    with pytest.raises(TooLargeError):
        is_c4_dense(DenseUnitary.identity(5))


def test_agrees_with_permutation_route_on_staircase_circuits():
    for circuit in staircase_circuits(4):
        pi = circuit_to_perm(circuit, 4)
        assert is_c3_dense(DenseUnitary.from_perm(pi)) == bool(is_c3_perm(pi))


def check_random_permutations(rng, trials: int):
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        pi = PermGate(rng.permutation(1 << n))
        assert is_c3_dense(DenseUnitary.from_perm(pi)) == bool(is_c3_perm(pi))


def test_agrees_with_permutation_route_on_random_permutations(rng):
    check_random_permutations(rng, 200)


@pytest.mark.slow
def test_agrees_with_permutation_route_on_a_thousand_permutations(rng):
    check_random_permutations(rng, 1000)


def test_clifford_sandwich_stays_in_c3(rng):
    tof = build("TOF 1 2 3")
    for _ in range(10):
        left = build(random_clifford_circuit(rng, 3), 3)
        right = build(random_clifford_circuit(rng, 3), 3)
        assert is_c3_dense(left @ tof @ right)


@pytest.mark.slow
def test_u3_dense_membership(u3_perm):
    u3 = DenseUnitary.from_perm(u3_perm)
    assert is_c3_dense(u3)
    assert not is_c3_dense(u3.dagger())


@pytest.mark.slow
def test_verify_gottesman_mochon():
    cert = verify_gottesman_mochon()
    assert cert.verdict
    assert cert.g_in_c3 and cert.conjugate_x7_not_clifford and cert.fgf_inverse_equals_u3
