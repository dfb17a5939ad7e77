"""
Tests for algebraic normal forms and polynomial representations.
"""

import numpy as np
import pytest

from c3perm.core.constants import ZERO_POLY_DEGREE
from c3perm.core.exceptions import BadLengthError, DimensionMismatchError
from c3perm.models.circuit import Gate, ToffoliCircuit
from c3perm.models.permutation import PermGate
from c3perm.services.anf import (
    AnfPoly,
    anf_add,
    anf_degree,
    anf_eval,
    anf_from_terms,
    anf_mul,
    anf_render,
    anf_substitute,
    anf_to_tt,
    anf_variable,
    invert_perm,
    perm_coords,
    tt_to_anf,
)
from c3perm.services.f2core import F2Vec
from c3perm.services.permgate import circuit_to_perm


def random_perm(rng, n: int) -> PermGate:
    return PermGate(rng.permutation(1 << n))


def test_tt_to_anf_examples():
    assert tt_to_anf([0] * 8).is_zero()
    assert tt_to_anf([0, 0, 0, 1]) == anf_from_terms(2, [[1, 2]])
    tof = circuit_to_perm(ToffoliCircuit.from_triples([(1, 2, 3)]), 3)
    assert anf_render(tt_to_anf(tof.output_bit(3))) == "a3 + a1*a2"


def test_tt_to_anf_rejects_bad_length():
    with pytest.raises(BadLengthError):
        tt_to_anf([0, 1, 1])


def test_algebra_examples():
    n = 3
    a1, a2, a3 = (anf_variable(n, i) for i in (1, 2, 3))
    p = anf_add(a3, anf_mul(a1, a2))
    assert anf_degree(p) == 2
    assert anf_mul(a1, a1) == a1
    assert anf_eval(p, F2Vec.from_components([1, 1, 1])) == 0
    assert anf_degree(AnfPoly(n)) == ZERO_POLY_DEGREE
    assert anf_render(AnfPoly(n)) == "0"
    assert anf_render(anf_from_terms(n, [[]])) == "1"
    with pytest.raises(DimensionMismatchError):
        anf_add(a1, anf_variable(2, 1))


def test_truth_table_round_trip(rng):
    for _ in range(30):
        n = int(rng.integers(1, 11))
        table = rng.integers(0, 2, size=1 << n).astype(np.uint8)
        assert np.array_equal(anf_to_tt(tt_to_anf(table)), table)
        monomials = frozenset(int(m) for m in np.flatnonzero(rng.integers(0, 2, size=1 << n)))
        poly = AnfPoly(n, monomials)
        assert tt_to_anf(anf_to_tt(poly)) == poly


def test_distinct_polynomials_have_distinct_truth_tables():
    seen = set()
    for mask in range(1 << 8):
        poly = AnfPoly(3, frozenset(m for m in range(8) if (mask >> m) & 1))
        seen.add(anf_to_tt(poly).tobytes())
    assert len(seen) == 256


def test_perm_coords_examples():
    assert perm_coords(PermGate.identity(3)).render() == ["a1", "a2", "a3"]
    cnot = circuit_to_perm([Gate("CNOT", (1, 2))], 2)
    assert perm_coords(cnot).render() == ["a1", "a1 + a2"]
    staircase = ToffoliCircuit.from_triples([(1, 2, 3), (1, 3, 4), (1, 2, 4)])
    coords = perm_coords(circuit_to_perm(staircase, 4))
    assert anf_render(coords[4]) == "a4 + a1*a3"


def test_invert_perm_examples(u3_perm):
    assert invert_perm(PermGate.identity(3)).is_identity()
    tof = circuit_to_perm(ToffoliCircuit.from_triples([(1, 2, 3)]), 3)
    assert invert_perm(tof) == tof
    inverse = perm_coords(invert_perm(u3_perm))
    assert anf_render(inverse[7]) == "a7 + a1*a6 + a2*a5 + a3*a4"
    assert max(inverse.degrees()) == 2


def test_composition_matches_substitution(rng):
    for _ in range(20):
        n = int(rng.integers(1, 7))
        pi, sigma = random_perm(rng, n), random_perm(rng, n)
        outer = perm_coords(pi)
        inner = perm_coords(sigma).coords
        composed = perm_coords(pi.compose(sigma))
        for i in range(1, n + 1):
            assert anf_substitute(outer[i], inner) == composed[i]
