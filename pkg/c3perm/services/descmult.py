"""
Descending multiplication service.

A descending multiplication on F2^n is a commutative bilinear product with
e_i e_i = 0 and e_i e_j supported on {e_k : k > j} for i < j. Associative
descending multiplications are in bijection with staircase permutations in C3:
e_i e_j = e_k term by term corresponds to the gate TOF(i, j, k).
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from c3perm.core.exceptions import (
    DimensionMismatchError,
    EmptyProductError,
    IndexOutOfRangeError,
    NotAssociativeError,
    NotStaircaseC3Error,
    NotStaircaseError,
    PreconditionViolatedError,
)
from c3perm.models.circuit import ToffoliCircuit
from c3perm.models.permutation import PermGate
from c3perm.services.f2core import F2Vec, bit, iter_support
from c3perm.services.permgate import is_staircase, staircase_conditions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DescMult:
    """
    Multiplication table of a descending multiplication.

    table[i-1][j-1] is the packed vector e_i e_j; the table is symmetric with a
    zero diagonal.
    """

    n: int
    table: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = self.n
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise DimensionMismatchError(f"multiplication table is not {n} x {n}")
        for i in range(1, n + 1):
            if self.table[i - 1][i - 1]:
                raise PreconditionViolatedError((i, i), "e_i e_i = 0")
            for j in range(i + 1, n + 1):
                prod = self.table[i - 1][j - 1]
                if prod != self.table[j - 1][i - 1]:
                    raise PreconditionViolatedError((i, j), "commutativity")
                if not 0 <= prod < (1 << (n - j)):
                    raise PreconditionViolatedError((i, j), "descending")

    @classmethod
    def zero(cls, n: int) -> "DescMult":
        return cls(n, tuple((0,) * n for _ in range(n)))

    @classmethod
    def from_pairs(cls, n: int, products: Mapping[Tuple[int, int], int]) -> "DescMult":
        """Build from {(i, j): packed e_i e_j}; missing pairs are zero."""
        rows = [[0] * n for _ in range(n)]
        for (i, j), prod in products.items():
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise IndexOutOfRangeError(f"pair ({i}, {j}) invalid for n = {n}")
            rows[i - 1][j - 1] = prod
            rows[j - 1][i - 1] = prod
        return cls(n, tuple(tuple(r) for r in rows))

    def e(self, i: int, j: int) -> int:
        return self.table[i - 1][j - 1]

    def pairs(self) -> Dict[Tuple[int, int], int]:
        """Nonzero products e_i e_j with i < j."""
        return {
            (i, j): self.e(i, j)
            for i in range(1, self.n + 1)
            for j in range(i + 1, self.n + 1)
            if self.e(i, j)
        }

    def is_zero(self) -> bool:
        return not self.pairs()


@dataclass(frozen=True)
class AssociativityResult:
    """Ok when witness is None; otherwise e_i(e_j e_k) = lhs differs from (e_i e_j)e_k = rhs."""

    witness: Optional[Tuple[int, int, int]] = None
    lhs: int = 0
    rhs: int = 0

    @property
    def ok(self) -> bool:
        return self.witness is None

    def __bool__(self) -> bool:
        return self.ok


def _times_basis(m: DescMult, v: int, k: int) -> int:
    """v * e_k by bilinearity."""
    acc = 0
    col = m.table
    for i in iter_support(m.n, v):
        acc ^= col[i - 1][k - 1]
    return acc


def _product_bits(m: DescMult, v: int, w: int) -> int:
    acc = 0
    for k in iter_support(m.n, w):
        acc ^= _times_basis(m, v, k)
    return acc


def product(m: DescMult, v: F2Vec, w: F2Vec) -> F2Vec:
    if v.n != m.n or w.n != m.n:
        raise DimensionMismatchError(f"vectors must live in dimension {m.n}")
    return F2Vec(m.n, _product_bits(m, v.bits, w.bits))


def product_of_set(m: DescMult, indices: Iterable[int]) -> F2Vec:
    """Product of e_i over a nonempty index set; the algebra has no unit."""
    members = sorted(set(indices))
    if not members:
        raise EmptyProductError("product over an empty set of factors")
    if members[0] < 1 or members[-1] > m.n:
        raise IndexOutOfRangeError(f"factor indices {members} outside [1, {m.n}]")
    acc = bit(m.n, members[0])
    for k in members[1:]:
        acc = _times_basis(m, acc, k)
    return F2Vec(m.n, acc)


def is_associative(m: DescMult) -> AssociativityResult:
    """
    Check e_i(e_j e_k) = (e_i e_j) e_k on all triples i <= j <= k.

    For each triple all three bracketings are compared, which together with
    commutativity covers every ordered triple. Triples are scanned in
    lexicographic order, so the reported witness is the first failing one.
    """
    n = m.n
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            e_ij = m.e(i, j)
            for k in range(j, n + 1):
                left = _times_basis(m, m.e(j, k), i)
                right = _times_basis(m, e_ij, k)
                if left != right:
                    return AssociativityResult((i, j, k), left, right)
                middle = _times_basis(m, m.e(i, k), j)
                if middle != right:
                    return AssociativityResult((i, j, k), middle, right)
    return AssociativityResult()


def from_staircase(c: ToffoliCircuit, n: Optional[int] = None) -> DescMult:
    """e_i e_j has component k set iff TOF(i, j, k) is in the circuit."""
    if not is_staircase(c):
        raise NotStaircaseError("circuit is not in staircase form")
    n = n if n is not None else c.max_qubit
    if c.max_qubit > n:
        raise IndexOutOfRangeError(f"circuit uses qubit {c.max_qubit} beyond n = {n}")
    products: Dict[Tuple[int, int], int] = {}
    for g in c:
        products[(g.i, g.j)] = products.get((g.i, g.j), 0) | bit(n, g.k)
    return DescMult.from_pairs(n, products)


def to_staircase_circuit(m: DescMult) -> ToffoliCircuit:
    """Inverse of from_staircase: one TOF(i, j, k) per component k of e_i e_j."""
    triples = [
        (i, j, k) for (i, j), prod in m.pairs().items() for k in iter_support(m.n, prod)
    ]
    return ToffoliCircuit.from_triples(triples).canonical()


def _linear_columns(m: DescMult, k: int) -> np.ndarray:
    return np.array([m.e(i, k) for i in range(1, m.n + 1)], dtype=np.int64)


def mult_to_perm(m: DescMult) -> PermGate:
    """
    The staircase C3 permutation of an associative descending multiplication.

    Built level by level from pi(v + e) = pi(v) + e + pi(v) e, which is the
    composition law pi(v + w) = pi(v) + pi(w) + pi(v)pi(w) with pi(e) = e.
    The states below 2^b are extended by the basis vector of bit b in one
    vectorised step.

    Raises:
        NotAssociativeError: the table fails associativity
    """
    check = is_associative(m)
    if not check:
        raise NotAssociativeError(check.witness)
    n = m.n
    table = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        k = n - b
        prev = table[: 1 << b]
        cols = _linear_columns(m, k)
        times_e = np.zeros_like(prev)
        for i in range(1, n + 1):
            if cols[i - 1]:
                times_e ^= ((prev >> (n - i)) & 1) * cols[i - 1]
        table[1 << b: 2 << b] = prev ^ (1 << b) ^ times_e
    return PermGate(table)


def perm_to_mult(pi: PermGate) -> DescMult:
    """
    Read e_i e_j = pi(e_i + e_j) + e_i + e_j from a staircase C3 permutation.

    Raises:
        NotStaircaseC3Error: pi fails the staircase conditions, the table is not an
            associative descending multiplication, or it does not rebuild pi
    """
    if not staircase_conditions(pi):
        raise NotStaircaseC3Error("permutation fails the staircase conditions")
    n = pi.n
    products = {}
    for i, j in combinations(range(1, n + 1), 2):
        pair = bit(n, i) | bit(n, j)
        products[(i, j)] = pi(pair) ^ pair
    try:
        m = DescMult.from_pairs(n, products)
    except PreconditionViolatedError as exc:
        raise NotStaircaseC3Error(f"products are not descending: {exc}") from exc
    check = is_associative(m)
    if not check:
        raise NotStaircaseC3Error(f"multiplication is not associative at {check.witness}")
    if mult_to_perm(m) != pi:
        raise NotStaircaseC3Error("multiplication does not rebuild the permutation")
    return m


def nonzero_triple(m: DescMult) -> Optional[Tuple[int, int, int]]:
    """First i < j < k in lexicographic order with e_i e_j e_k != 0."""
    n = m.n
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            e_ij = m.e(i, j)
            if not e_ij:
                continue
            for k in range(j + 1, n + 1):
                if _times_basis(m, e_ij, k):
                    return (i, j, k)
    return None


def all_triples_zero(m: DescMult) -> bool:
    """
    True iff every triple product of basis vectors vanishes.

    For an associative table this decides whether the staircase permutation is
    semi-Clifford. Repeated indices give zero, so only i < j < k are scanned.
    """
    check = is_associative(m)
    if not check:
        raise NotAssociativeError(check.witness)
    return nonzero_triple(m) is None


def max_nonzero_product_size(m: DescMult) -> int:
    """Largest |S| with a nonzero product over S; at least 1 since e_i != 0."""
    n = m.n
    best = 1

    def extend(acc: int, last: int, size: int) -> None:
        nonlocal best
        best = max(best, size)
        for k in range(last + 1, n + 1):
            nxt = _times_basis(m, acc, k)
            if nxt:
                extend(nxt, k, size + 1)

    for i in range(1, n + 1):
        extend(bit(n, i), i, 1)
    return best


def partial_products(m: DescMult, indices: Sequence[int]) -> List[F2Vec]:
    """Products over every nonempty subset of indices, in binary-counter order."""
    members = sorted(set(indices))
    out = []
    for mask in range(1, 1 << len(members)):
        subset = [members[t] for t in range(len(members)) if (mask >> t) & 1]
        out.append(product_of_set(m, subset))
    return out
