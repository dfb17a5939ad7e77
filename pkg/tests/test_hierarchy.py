"""
Tests for C3 membership, staircase reduction and the semi-Clifford routines.
"""

from itertools import combinations

import numpy as np
import pytest

from c3perm.core.exceptions import (
    HasMismatchError,
    InternalContradictionError,
    NotInC3Error,
    NotSemiCliffordError,
    NotStaircaseError,
    PreconditionViolatedError,
)
from c3perm.models.circuit import Gate, MismatchFreeCircuit, MultiControlledX, ToffoliCircuit
from c3perm.models.pauli import Pauli
from c3perm.models.permutation import PermGate
from c3perm.services.anf import perm_coords
from c3perm.services.descmult import all_triples_zero, from_staircase, is_associative, mult_to_perm
from c3perm.services.f2core import invert, rank
from c3perm.services.family import uk_coords, uk_inverse_coords
from c3perm.services.hierarchy import (
    commute_iff_mismatch_free,
    conjugate_pauli_by_perm,
    extend_to_max_abelian,
    is_c3_perm,
    is_semi_clifford_perm,
    mismatch_free_level,
    mismatch_free_to_perm,
    pauli_stabilizer_subgroup,
    reduce_to_staircase,
    refute_level,
    semi_clifford_decompose,
)
from c3perm.services.permgate import AffineMap, circuit_to_perm, is_staircase, to_staircase
from tests.conftest import (
    associative_mults,
    random_affine,
    random_associative_mult,
    random_invertible,
    random_mismatch_free,
    staircase_circuits,
)


def tof(n: int, *triples) -> PermGate:
    return circuit_to_perm(ToffoliCircuit.from_triples(triples), n)


def mcx(*qubits) -> MultiControlledX:
    return MultiControlledX(frozenset(qubits[:-1]), qubits[-1])


def all_mcx_gates(n: int):
    for target in range(1, n + 1):
        others = [q for q in range(1, n + 1) if q != target]
        for size in range(len(others) + 1):
            for controls in combinations(others, size):
                yield MultiControlledX(frozenset(controls), target)


def test_conjugate_pauli_by_perm_examples():
    y = conjugate_pauli_by_perm(PermGate.identity(1), Pauli.from_label("Y"))
    assert y.as_pauli().label == "+Y"

    cnot = circuit_to_perm([Gate("CNOT", (1, 2))], 2)
    assert conjugate_pauli_by_perm(cnot, Pauli.x(2, 1)).as_pauli().label == "+XX"
    assert conjugate_pauli_by_perm(cnot, Pauli.z(2, 2)).as_pauli().label == "+ZZ"
    assert conjugate_pauli_by_perm(cnot, Pauli.z(2, 1)).as_pauli().label == "+ZI"

    assert not conjugate_pauli_by_perm(tof(3, (1, 2, 3)), Pauli.x(3, 1)).is_pauli


def test_is_c3_perm_examples(u3_perm, pi_prime):
    assert is_c3_perm(PermGate.identity(3))
    assert is_c3_perm(tof(3, (1, 2, 3)))
    assert is_c3_perm(u3_perm)
    check = is_c3_perm(pi_prime)
    assert not check
    assert check.witness == "X1"


def test_u3_inverse_is_outside_c3(u3_perm):
    check = is_c3_perm(u3_perm.inverse())
    assert not check
    assert check.witness is not None


def test_refute_level_examples(u3_perm):
    assert refute_level(PermGate.identity(4)) is None
    assert refute_level(circuit_to_perm([Gate("CNOT", (1, 2))], 2)) is None
    assert refute_level(tof(3, (1, 2, 3))) == 2
    assert refute_level(u3_perm) == 2
    assert refute_level(u3_perm.inverse()) == 3
    assert refute_level(uk_coords(4)) == 4
    assert refute_level(uk_inverse_coords(4)) == 2


def test_reduce_to_staircase_examples(u3_perm, pi_prime):
    x1 = circuit_to_perm([Gate("X", (1,))], 7)
    cnot = circuit_to_perm([Gate("CNOT", (1, 2))], 7)
    pi = x1.compose(u3_perm).compose(cnot)
    result = reduce_to_staircase(pi)
    assert result.recompose() == pi
    assert is_staircase(result.mu)
    assert is_associative(from_staircase(result.mu, 7))

    identity = reduce_to_staircase(PermGate.identity(3))
    assert len(identity.mu) == 0

    with pytest.raises(NotInC3Error) as exc_info:
        reduce_to_staircase(pi_prime)
    assert exc_info.value.witness == "X1"


def check_random_reductions(rng, trials: int):
    for _ in range(trials):
        n = int(rng.integers(3, 7))
        m = random_associative_mult(rng, n, density=0.2)
        pi = random_affine(rng, n).to_perm().compose(mult_to_perm(m)).compose(random_affine(rng, n).to_perm())
        result = reduce_to_staircase(pi)
        assert result.recompose() == pi
        assert is_staircase(result.mu)
        reduced = from_staircase(result.mu, n)
        assert is_associative(reduced)
        assert all_triples_zero(reduced) == all_triples_zero(m)


def test_reduce_to_staircase_random_conjugates(rng):
    check_random_reductions(rng, 60)


@pytest.mark.slow
def test_reduce_to_staircase_many_random_conjugates(rng):
    check_random_reductions(rng, 500)


def test_relabelled_toffoli_is_c3_but_not_staircase():
    pi = circuit_to_perm([Gate("TOF", (2, 3, 1))], 3)
    assert is_c3_perm(pi) and pi(0) == 0
    assert not is_staircase(ToffoliCircuit.from_triples([(2, 3, 1)]))
    with pytest.raises(NotStaircaseError) as exc_info:
        to_staircase(pi)
    assert exc_info.value.coordinate == 1
    assert exc_info.value.term == "a2*a3"


def test_linear_conjugates_are_read_back_only_in_staircase_form(rng):
    rejected = 0
    for m in associative_mults(4):
        lin = random_invertible(rng, 4)
        pi = AffineMap.linear(lin).to_perm().compose(mult_to_perm(m)).compose(
            AffineMap.linear(invert(lin)).to_perm()
        )
        assert is_c3_perm(pi) and pi(0) == 0
        try:
            circuit = to_staircase(pi)
        except NotStaircaseError:
            rejected += 1
            continue
        assert is_staircase(circuit)
        assert circuit_to_perm(circuit, 4) == pi
    assert rejected > 0


def test_reduce_to_staircase_reports_unreadable_staircase(monkeypatch, u3_perm):
    def refuse(pi):
        raise NotStaircaseError("forced", coordinate=1)

    monkeypatch.setattr("c3perm.services.hierarchy.to_staircase", refuse)
    with pytest.raises(InternalContradictionError):
        reduce_to_staircase(u3_perm)


def test_is_semi_clifford_perm_examples(u3_perm):
    toffoli = tof(3, (1, 2, 3))
    assert is_semi_clifford_perm(toffoli)
    assert is_semi_clifford_perm(toffoli, method="general")
    assert is_semi_clifford_perm(toffoli, method="fast")
    assert not is_semi_clifford_perm(u3_perm)
    assert not is_semi_clifford_perm(u3_perm, method="general")


def test_padded_u3_is_not_semi_clifford(u3_perm):
    padded = u3_perm.tensor_identity(1)
    assert padded.n == 8
    assert not is_semi_clifford_perm(padded, method="general")
    assert not is_semi_clifford_perm(padded, method="fast")


def test_fast_route_requires_c3(pi_prime):
    with pytest.raises(NotInC3Error):
        is_semi_clifford_perm(pi_prime, method="fast")
    with pytest.raises(ValueError):
        is_semi_clifford_perm(pi_prime, method="quick")


def test_stabilizer_subgroup_examples(u3_perm):
    group = pauli_stabilizer_subgroup(tof(3, (1, 2, 3)))
    assert group.max_isotropic_dimension == 3
    assert pauli_stabilizer_subgroup(PermGate.identity(2)).dimension == 4
    assert pauli_stabilizer_subgroup(u3_perm).max_isotropic_dimension < 7


def test_semi_clifford_routes_agree_on_staircase_c3():
    for n in (3, 4, 5):
        for circuit in staircase_circuits(n):
            pi = circuit_to_perm(circuit, n)
            if not is_c3_perm(pi):
                continue
            general = is_semi_clifford_perm(pi, method="general")
            assert general == is_semi_clifford_perm(pi, method="fast")
            assert general == bool(is_c3_perm(pi.inverse()))
            assert general == (perm_coords(pi).max_degree() <= 2)
            assert general == all_triples_zero(from_staircase(circuit, n))


@pytest.mark.parametrize(
    "gates, n, level",
    [
        ([Gate("TOF", (1, 2, 3))], 3, 3),
        ([Gate("MCX", (1, 2, 3, 4))], 4, 4),
        ([Gate("CNOT", (2, 3)), Gate("TOF", (1, 2, 4)), Gate("CNOT", (2, 3))], 4, 3),
        ([Gate("CNOT", (1, 2)), Gate("X", (3,))], 3, 1),
    ],
)
def test_semi_clifford_decompose_examples(gates, n, level):
    pi = circuit_to_perm(gates, n)
    decomposition = semi_clifford_decompose(pi)
    assert decomposition.recompose() == pi
    assert mismatch_free_level(decomposition.mu) == level


def test_semi_clifford_decompose_rejects_u3(u3_perm):
    with pytest.raises(NotSemiCliffordError):
        semi_clifford_decompose(u3_perm)


def check_random_decompositions(rng, trials: int):
    for _ in range(trials):
        n = int(rng.integers(3, 7))
        c = random_mismatch_free(rng, n)
        pi = random_affine(rng, n).to_perm().compose(mismatch_free_to_perm(c, n)).compose(
            random_affine(rng, n).to_perm()
        )
        assert is_semi_clifford_perm(pi, method="general")
        decomposition = semi_clifford_decompose(pi)
        assert decomposition.recompose() == pi
        # Clifford gates of c may move into the outer maps
        if c.max_controls >= 2:
            assert mismatch_free_level(decomposition.mu) == mismatch_free_level(c)
        else:
            assert mismatch_free_level(decomposition.mu) <= 2


def test_semi_clifford_decompose_random(rng):
    check_random_decompositions(rng, 60)


@pytest.mark.slow
def test_semi_clifford_decompose_many_random(rng):
    check_random_decompositions(rng, 200)


def test_mismatch_free_inverse_degree_bound(rng):
    for _ in range(40):
        n = int(rng.integers(3, 8))
        c = random_mismatch_free(rng, n)
        pi = mismatch_free_to_perm(c, n)
        assert perm_coords(pi.inverse()).max_degree() <= max(c.max_controls, 1)


def test_mismatch_free_level_examples():
    assert mismatch_free_level(MismatchFreeCircuit((mcx(1, 2),))) == 2
    assert mismatch_free_level(MismatchFreeCircuit((mcx(1, 2, 3), mcx(1, 2, 4)))) == 3
    assert mismatch_free_level(MismatchFreeCircuit((mcx(1, 2, 3, 4),))) == 4
    with pytest.raises(HasMismatchError) as exc_info:
        mismatch_free_level(MismatchFreeCircuit((mcx(1, 2, 3), mcx(3, 4, 5))))
    assert exc_info.value.pair == (1, 2)


def test_commute_iff_mismatch_free_examples():
    assert commute_iff_mismatch_free(mcx(1, 2, 3), mcx(1, 2, 4)) == (True, True)
    assert commute_iff_mismatch_free(mcx(1, 2, 3), mcx(3, 4, 5)) == (False, False)
    assert commute_iff_mismatch_free(mcx(1, 2), mcx(2, 1)) == (False, False)


def test_commute_iff_mismatch_free_exhaustive():
    for n in (2, 3, 4, 5):
        gates = list(all_mcx_gates(n))
        for g1 in gates:
            for g2 in gates:
                commute, mismatch_free = commute_iff_mismatch_free(g1, g2)
                assert commute == mismatch_free


def test_extend_to_max_abelian_examples():
    a = [Pauli.from_label(label) for label in ("ZII", "IZI", "IIZ")]

    assert extend_to_max_abelian(a, [Pauli.from_label("XII")]) == [
        Pauli.from_label("XII"),
        Pauli.from_label("IZI"),
        Pauli.from_label("IIZ"),
    ]
    assert extend_to_max_abelian(a, [Pauli.from_label("XXI")]) == [
        Pauli.from_label("XXI"),
        Pauli.from_label("ZZI"),
        Pauli.from_label("IIZ"),
    ]
    assert extend_to_max_abelian(a, [Pauli.from_label("ZZI")]) == a


def test_extend_to_max_abelian_result_is_maximal_abelian(rng):
    a = [Pauli.z(4, i) for i in range(1, 5)]
    for _ in range(50):
        u1, u2 = (int(u) for u in rng.choice(np.arange(1, 16), size=2, replace=False))
        b = [Pauli(4, 0, u1, 0), Pauli(4, 0, u2, 0)]
        extended = extend_to_max_abelian(a, b)
        labels = [(p.u << 4) | p.v for p in extended]
        assert rank(labels) == 4
        assert all(p.commutes(q) for p in extended for q in extended)
        for g in b:
            assert rank(labels + [g.u << 4]) == 4


def test_extend_to_max_abelian_preconditions():
    with pytest.raises(PreconditionViolatedError):
        extend_to_max_abelian([Pauli.z(2, 1)], [])
    with pytest.raises(PreconditionViolatedError):
        extend_to_max_abelian([Pauli.z(2, 1), Pauli.x(2, 1)], [])
    with pytest.raises(PreconditionViolatedError):
        extend_to_max_abelian([Pauli.z(2, 1), Pauli.z(2, 2)], [Pauli.x(2, 1), Pauli.z(2, 1)])
