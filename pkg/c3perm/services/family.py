"""
U_k family service.

Qubit q in [1, 2^k - 1] stands for the nonempty subset of [k] given by the
binary expansion of q (bit t - 1 set iff t is in the subset), so singleton {j}
is qubit 2^(j-1) and disjoint union is integer addition. U_k is the staircase C3
permutation of the multiplication e_S e_T = e_(S u T) for disjoint S, T.
"""

import logging
from typing import Iterable, Iterator, List, Union

from c3perm.core.constants import (
    UK_MAX_ANALYTIC_K,
    UK_MAX_TRUTH_TABLE_K,
    UK_MIN_K,
    UK_VERIFY_MIN_K,
)
from c3perm.core.exceptions import IndexOutOfRangeError, PreconditionViolatedError, TooLargeError
from c3perm.models.circuit import Toffoli, ToffoliCircuit
from c3perm.schemas.certificate import UkCertificate
from c3perm.services.anf import AnfPoly, PermPolyRep, anf_degree, anf_render, perm_coords
from c3perm.services.descmult import (
    DescMult,
    is_associative,
    max_nonzero_product_size,
    mult_to_perm,
)
from c3perm.services.f2core import bit
from c3perm.services.hierarchy import is_c3_perm, refute_level
from c3perm.services.permgate import circuit_to_perm

logger = logging.getLogger(__name__)

Subset = Union[int, Iterable[int]]


def uk_qubits(k: int) -> int:
    return (1 << k) - 1


def _check_k(k: int, upper: int = UK_MAX_ANALYTIC_K) -> None:
    if k < UK_MIN_K:
        raise PreconditionViolatedError("k", f"k >= {UK_MIN_K}")
    if k > upper:
        raise TooLargeError(k, upper, "U_k family")


def subset_to_qubit(k: int, subset: Subset) -> int:
    """Qubit index of a nonempty subset of [k], given as elements or as a qubit index."""
    if isinstance(subset, int):
        q = subset
    else:
        q = 0
        for t in subset:
            if not 1 <= t <= k:
                raise IndexOutOfRangeError(f"element {t} outside [1, {k}]")
            q |= 1 << (t - 1)
    if not 1 <= q <= uk_qubits(k):
        raise IndexOutOfRangeError(f"subset {subset!r} is not a nonempty subset of [{k}]")
    return q


def qubit_to_subset(q: int) -> List[int]:
    return [t + 1 for t in range(q.bit_length()) if (q >> t) & 1]


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def uk_circuit(k: int) -> ToffoliCircuit:
    """One TOF(S, T, S u T) per unordered pair of disjoint nonempty subsets, sorted by target."""
    _check_k(k)
    gates = []
    for target in range(1, uk_qubits(k) + 1):
        for s in _submasks(target):
            t = target ^ s
            if t and s < t:
                gates.append(Toffoli(s, t, target))
    return ToffoliCircuit(tuple(gates)).canonical()


def uk_mult(k: int) -> DescMult:
    _check_k(k)
    n = uk_qubits(k)
    products = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if i & j == 0:
                products[(i, j)] = bit(n, i + j)
    return DescMult.from_pairs(n, products)


def set_partitions(mask: int) -> Iterator[List[int]]:
    """All partitions of the set with the given bitmask into nonempty blocks."""
    if not mask:
        yield []
        return
    low = mask & -mask
    rest = mask ^ low
    for sub in [0, *_submasks(rest)]:
        block = low | sub
        for tail in set_partitions(rest ^ sub):
            yield [block, *tail]


def uk_coordinate(k: int, subset: Subset) -> AnfPoly:
    """Coordinate S of U_k: the sum over set partitions of S of the products of a_T over blocks."""
    _check_k(k)
    n = uk_qubits(k)
    q = subset_to_qubit(k, subset)
    monomials = set()
    for blocks in set_partitions(q):
        mono = 0
        for block in blocks:
            mono |= bit(n, block)
        monomials.add(mono)
    return AnfPoly(n, frozenset(monomials))


def uk_inverse_coordinate(k: int, subset: Subset) -> AnfPoly:
    """Coordinate S of U_k^-1: a_S plus a_T1 a_T2 over unordered splits S = T1 u T2."""
    _check_k(k)
    n = uk_qubits(k)
    q = subset_to_qubit(k, subset)
    monomials = {bit(n, q)}
    for t1 in _submasks(q):
        t2 = q ^ t1
        if t2 and t1 < t2:
            monomials.add(bit(n, t1) | bit(n, t2))
    return AnfPoly(n, frozenset(monomials))


def uk_coords(k: int) -> PermPolyRep:
    n = uk_qubits(k)
    return PermPolyRep(n, tuple(uk_coordinate(k, q) for q in range(1, n + 1)))


def uk_inverse_coords(k: int) -> PermPolyRep:
    n = uk_qubits(k)
    return PermPolyRep(n, tuple(uk_inverse_coordinate(k, q) for q in range(1, n + 1)))


def verify_uk(k: int) -> UkCertificate:
    """
    Certify U_k in C3 and U_k^-1 outside C_k.

    Membership follows from associativity of the multiplication; the
    refutation reads the degree of the analytic coordinates of U_k, which are
    the inverse coordinates of U_k^-1. Up to k = 4 the analytic data is
    cross-checked against truth tables.

    Args:
        k: family index, 3 <= k <= 5

    Returns:
        UkCertificate: membership, refutation level and cross-check outcome
    """
    if k < UK_VERIFY_MIN_K:
        raise PreconditionViolatedError("k", f"k >= {UK_VERIFY_MIN_K}")
    _check_k(k)
    n = uk_qubits(k)
    mult = uk_mult(k)
    assoc = is_associative(mult)
    coords = uk_coords(k)
    refuted = refute_level(coords)
    top = coords[n]
    logger.info(f"U_{k}: associative={assoc.ok}, top coordinate degree {anf_degree(top)}")

    cross_check = None
    route = "analytic"
    if k <= UK_MAX_TRUTH_TABLE_K:
        route = "analytic+truth-table"
        perm = circuit_to_perm(uk_circuit(k), n)
        cross_check = (
            perm == mult_to_perm(mult)
            and perm_coords(perm) == coords
            and perm_coords(perm.inverse()) == uk_inverse_coords(k)
            and bool(is_c3_perm(perm)) == assoc.ok
            and refute_level(perm.inverse()) == refuted
        )
        logger.info(f"U_{k} truth-table cross-check: {cross_check}")

    return UkCertificate(
        k=k,
        n=n,
        gate_count=len(uk_circuit(k)),
        in_c3=assoc.ok,
        associativity_witness=list(assoc.witness) if assoc.witness else None,
        inverse_refuted_at=refuted,
        top_coordinate=anf_render(top),
        max_nonzero_product_size=max_nonzero_product_size(mult),
        route=route,
        truth_table_cross_check=cross_check,
    )
