"""
Tests for bit-packed F2 linear algebra and the twisted elimination.
"""

import pytest

from c3perm.core.constants import INFINITY
from c3perm.core.exceptions import (
    DimensionMismatchError,
    NotInvertibleError,
    PreconditionViolatedError,
)
from c3perm.services.f2core import (
    Compose,
    F2Mat,
    F2Vec,
    Normalized,
    Swap,
    ZeroWitness,
    bit,
    extend_to_basis,
    first_nonzero_index,
    invert,
    linear_relations,
    mat_mul,
    mat_vec,
    rank,
    replay,
    replay_labels,
    simultaneous_slt_basis,
    twisted_gauss,
)
from tests.conftest import random_invertible


def random_slt(rng, n: int) -> F2Mat:
    rows = []
    for i in range(1, n + 1):
        width = i - 1
        low = int(rng.integers(0, 1 << width)) if width else 0
        rows.append(low << (n - width))
    return F2Mat(n, tuple(rows))


def test_first_nonzero_index():
    assert first_nonzero_index(F2Vec(4, 0b0000)) == INFINITY
    assert first_nonzero_index(F2Vec.from_components([0, 1, 1, 0])) == 2


def test_slt_matrix_moves_first_nonzero_index_down():
    a = F2Mat.from_lists([[0, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]])
    b = F2Vec.basis(4, 2)
    assert a.is_strictly_lower_triangular()
    assert first_nonzero_index(mat_vec(a, b)) == 3


def test_slt_property_randomised(rng):
    for _ in range(300):
        n = int(rng.integers(1, 17))
        a = random_slt(rng, n)
        b = F2Vec(n, int(rng.integers(1, 1 << n)))
        assert first_nonzero_index(mat_vec(a, b)) > first_nonzero_index(b)


def test_vector_basics():
    v = F2Vec.from_support(5, [1, 4])
    assert v.components() == [1, 0, 0, 1, 0]
    assert v.support() == [1, 4]
    assert v.weight == 2
    assert str(v) == "10010"
    assert v.dot(F2Vec.basis(5, 4)) == 1
    assert (v + v).is_zero()
    with pytest.raises(DimensionMismatchError):
        v + F2Vec.zero(4)


def test_invert_examples():
    assert invert(F2Mat.identity(5)) == F2Mat.identity(5)
    m = F2Mat.from_lists([[1, 1], [0, 1]])
    assert invert(m) == m
    with pytest.raises(NotInvertibleError):
        invert(F2Mat.zero(3))


def test_invert_random(rng):
    for _ in range(50):
        n = int(rng.integers(1, 12))
        m = random_invertible(rng, n)
        assert mat_mul(m, invert(m)) == F2Mat.identity(n)
        assert mat_mul(invert(m), m) == F2Mat.identity(n)


def test_from_columns_and_transpose():
    m = F2Mat.from_columns(3, [bit(3, 2), bit(3, 1) | bit(3, 3), bit(3, 3)])
    assert m.to_lists() == [[0, 1, 0], [1, 0, 0], [0, 1, 1]]
    assert m.transpose().transpose() == m
    assert m.column(2) == bit(3, 1) | bit(3, 3)


def test_linear_relations_and_extension():
    vectors = [0b011, 0b101, 0b110, 0b001]
    relations = linear_relations(vectors)
    assert relations == [0b1110]
    assert rank(vectors) == 3
    basis = extend_to_basis(4, [0b0011])
    assert basis[0] == 0b0011 and len(basis) == 4 and rank(basis) == 4
    with pytest.raises(NotInvertibleError):
        extend_to_basis(3, [0b011, 0b011])


def test_simultaneous_slt_basis_examples():
    assert simultaneous_slt_basis([], 3) == F2Mat.identity(3)
    slt = F2Mat.from_lists([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    m = simultaneous_slt_basis([slt])
    assert mat_mul(mat_mul(m, slt), invert(m)).is_strictly_lower_triangular()
    swap = simultaneous_slt_basis([F2Mat.from_lists([[0, 1], [0, 0]])])
    assert swap == F2Mat.from_lists([[0, 1], [1, 0]])


def test_simultaneous_slt_basis_rejects_bad_families():
    with pytest.raises(PreconditionViolatedError):
        simultaneous_slt_basis([F2Mat.from_lists([[1, 0], [0, 0]])])
    x = F2Mat.from_lists([[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    y = F2Mat.from_lists([[0, 0, 0], [0, 0, 0], [0, 1, 0]])
    with pytest.raises(PreconditionViolatedError) as exc_info:
        simultaneous_slt_basis([x, y])
    assert exc_info.value.axiom == "pairwise commutation"


def random_square_zero_family(rng, n: int):
    """Commuting square-zero family mapping the first half of the basis into the second."""
    half = n // 2
    family = []
    for _ in range(int(rng.integers(1, 5))):
        rows = [0] * n
        for i in range(half + 1, n + 1):
            rows[i - 1] = int(rng.integers(0, 1 << half)) << (n - half)
        family.append(F2Mat(n, tuple(rows)))
    return family


def check_slt_recovery(rng, trials: int):
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        family = random_square_zero_family(rng, n)
        m = random_invertible(rng, n)
        conjugated = [mat_mul(mat_mul(m, a), invert(m)) for a in family]
        basis = simultaneous_slt_basis(conjugated)
        for a in conjugated:
            assert mat_mul(mat_mul(basis, a), invert(basis)).is_strictly_lower_triangular()


def test_simultaneous_slt_basis_recovers_triangular_form(rng):
    check_slt_recovery(rng, 200)


@pytest.mark.slow
def test_simultaneous_slt_basis_recovers_triangular_form_thousand_families(rng):
    check_slt_recovery(rng, 1000)


def test_simultaneous_slt_basis_keeps_triangular_families(rng):
    for n in range(2, 9):
        family = random_square_zero_family(rng, n)
        assert all(a.is_strictly_lower_triangular() for a in family)
        assert simultaneous_slt_basis(family) == F2Mat.identity(n)
    assert simultaneous_slt_basis([], 1) == F2Mat.identity(1)


def test_twisted_gauss_examples():
    n = 2
    zero = F2Mat.zero(n)
    e1, e2 = F2Vec.basis(n, 1), F2Vec.basis(n, 2)

    done = twisted_gauss([(zero, e1), (zero, e2)])
    assert isinstance(done, Normalized) and len(done.log) == 0

    swapped = twisted_gauss([(zero, e2), (zero, e1)])
    assert isinstance(swapped, Normalized)
    assert list(swapped.log) == [Swap(1, 2)]

    composed = twisted_gauss([(zero, e1 + e2), (zero, e2)])
    assert isinstance(composed, Normalized)
    assert list(composed.log) == [Compose(1, 2)]
    assert composed.pairs[0][1] == e1


def test_twisted_gauss_zero_witness():
    n = 2
    outcome = twisted_gauss([(F2Mat.zero(n), F2Vec.basis(n, 1)), (F2Mat.zero(n), F2Vec.zero(n))])
    assert isinstance(outcome, ZeroWitness)
    assert outcome.index == 2


def test_twisted_gauss_requires_triangular_matrices():
    with pytest.raises(PreconditionViolatedError):
        twisted_gauss([(F2Mat.identity(1), F2Vec.basis(1, 1))])


def test_twisted_gauss_log_replays(rng):
    for _ in range(200):
        n = int(rng.integers(1, 7))
        pairs = [(random_slt(rng, n), F2Vec(n, int(rng.integers(0, 1 << n)))) for _ in range(n)]
        outcome = twisted_gauss(pairs)
        assert replay(pairs, outcome.log) == outcome.pairs
        assert all(a.is_strictly_lower_triangular() for a, _ in outcome.pairs)
        assert len(outcome.log) <= n * n + 2 * n
        if isinstance(outcome, Normalized):
            assert [b for _, b in outcome.pairs] == [F2Vec.basis(n, i) for i in range(1, n + 1)]
            assert rank(replay_labels(n, outcome.log)) == n
        else:
            assert outcome.pairs[outcome.index - 1][1].is_zero()
