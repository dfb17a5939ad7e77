"""
Bit-packed vectors and matrices over F2.

Component i (1-based) of an n-dimensional vector is stored in bit n - i of a
Python int. With this packing the integer value of a vector is the basis-state
index of the ket |a_1 ... a_n>, qubit 1 being the most significant bit, so
vectors and truth-table indices are interchangeable across the package.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from c3perm.core.constants import INFINITY, MAX_F2_DIMENSION
from c3perm.core.exceptions import (
    DimensionMismatchError,
    NotInvertibleError,
    PreconditionViolatedError,
)

logger = logging.getLogger(__name__)


def _check_dimension(n: int) -> None:
    if not 1 <= n <= MAX_F2_DIMENSION:
        raise DimensionMismatchError(f"dimension must be in [1, {MAX_F2_DIMENSION}], got {n}")


def bit(n: int, i: int) -> int:
    """Packed word of the standard basis vector e_i in dimension n."""
    return 1 << (n - i)


def alpha(n: int, bits: int) -> Union[int, float]:
    """Index of the first nonzero component of a packed vector, INFINITY for zero."""
    if bits == 0:
        return INFINITY
    return n - bits.bit_length() + 1


def parity(bits: int) -> int:
    return bits.bit_count() & 1


def iter_support(n: int, bits: int) -> Iterator[int]:
    """Yield the 1-based indices of the nonzero components in increasing order."""
    while bits:
        top = bits.bit_length() - 1
        yield n - top
        bits ^= 1 << top


@dataclass(frozen=True)
class F2Vec:
    """Vector in F2^n."""

    n: int
    bits: int = 0

    def __post_init__(self):
        _check_dimension(self.n)
        if not 0 <= self.bits < (1 << self.n):
            raise DimensionMismatchError(f"bits {self.bits:#x} exceed dimension {self.n}")

    @classmethod
    def zero(cls, n: int) -> "F2Vec":
        return cls(n, 0)

    @classmethod
    def basis(cls, n: int, i: int) -> "F2Vec":
        if not 1 <= i <= n:
            raise DimensionMismatchError(f"basis index {i} outside [1, {n}]")
        return cls(n, bit(n, i))

    @classmethod
    def from_components(cls, components: Sequence[int]) -> "F2Vec":
        n = len(components)
        bits = 0
        for c in components:
            bits = (bits << 1) | (int(c) & 1)
        return cls(n, bits)

    @classmethod
    def from_support(cls, n: int, indices: Iterable[int]) -> "F2Vec":
        bits = 0
        for i in indices:
            if not 1 <= i <= n:
                raise DimensionMismatchError(f"index {i} outside [1, {n}]")
            bits ^= bit(n, i)
        return cls(n, bits)

    def component(self, i: int) -> int:
        return (self.bits >> (self.n - i)) & 1

    def components(self) -> List[int]:
        return [self.component(i) for i in range(1, self.n + 1)]

    def support(self) -> List[int]:
        return list(iter_support(self.n, self.bits))

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def dot(self, other: "F2Vec") -> int:
        _same_dimension(self.n, other.n)
        return parity(self.bits & other.bits)

    def __add__(self, other: "F2Vec") -> "F2Vec":
        _same_dimension(self.n, other.n)
        return F2Vec(self.n, self.bits ^ other.bits)

    def __str__(self) -> str:
        return format(self.bits, f"0{self.n}b")


def _same_dimension(n: int, m: int) -> None:
    if n != m:
        raise DimensionMismatchError(f"dimension {n} != {m}")


def first_nonzero_index(v: F2Vec) -> Union[int, float]:
    """Smallest i with v_i = 1, or INFINITY for the zero vector."""
    return alpha(v.n, v.bits)


@dataclass(frozen=True)
class F2Mat:
    """Square matrix over F2; row i is packed like an F2Vec (entry (i, j) in bit n - j)."""

    n: int
    rows: Tuple[int, ...]

    def __post_init__(self):
        _check_dimension(self.n)
        if len(self.rows) != self.n:
            raise DimensionMismatchError(f"{len(self.rows)} rows for dimension {self.n}")
        limit = 1 << self.n
        for r in self.rows:
            if not 0 <= r < limit:
                raise DimensionMismatchError(f"row {r:#x} exceeds dimension {self.n}")

    @classmethod
    def identity(cls, n: int) -> "F2Mat":
        return cls(n, tuple(bit(n, i) for i in range(1, n + 1)))

    @classmethod
    def zero(cls, n: int) -> "F2Mat":
        return cls(n, (0,) * n)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "F2Mat":
        return cls(len(entries), tuple(F2Vec.from_components(row).bits for row in entries))

    @classmethod
    def from_columns(cls, n: int, columns: Sequence[int]) -> "F2Mat":
        """Build the matrix whose j-th column is the packed vector columns[j-1]."""
        if len(columns) != n:
            raise DimensionMismatchError(f"{len(columns)} columns for dimension {n}")
        rows = [0] * n
        for j, col in enumerate(columns, start=1):
            for i in iter_support(n, col):
                rows[i - 1] |= bit(n, j)
        return cls(n, tuple(rows))

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i - 1] >> (self.n - j)) & 1

    def row(self, i: int) -> F2Vec:
        return F2Vec(self.n, self.rows[i - 1])

    def column(self, j: int) -> int:
        col = 0
        for i, r in enumerate(self.rows, start=1):
            if (r >> (self.n - j)) & 1:
                col |= bit(self.n, i)
        return col

    def columns(self) -> Tuple[int, ...]:
        return tuple(self.column(j) for j in range(1, self.n + 1))

    def transpose(self) -> "F2Mat":
        return F2Mat(self.n, self.columns())

    def to_lists(self) -> List[List[int]]:
        return [self.row(i).components() for i in range(1, self.n + 1)]

    def is_zero(self) -> bool:
        return not any(self.rows)

    def is_strictly_lower_triangular(self) -> bool:
        """True iff entry (i, j) = 0 whenever i <= j."""
        n = self.n
        return all((r & ((1 << (n - i + 1)) - 1)) == 0 for i, r in enumerate(self.rows, start=1))

    def __add__(self, other: "F2Mat") -> "F2Mat":
        _same_dimension(self.n, other.n)
        return F2Mat(self.n, tuple(a ^ b for a, b in zip(self.rows, other.rows)))


def mat_vec_bits(rows: Sequence[int], v: int) -> int:
    """Multiply packed rows by a packed vector."""
    n = len(rows)
    out = 0
    for i, r in enumerate(rows):
        if (r & v).bit_count() & 1:
            out |= 1 << (n - 1 - i)
    return out


def mat_vec(a: F2Mat, v: F2Vec) -> F2Vec:
    _same_dimension(a.n, v.n)
    return F2Vec(a.n, mat_vec_bits(a.rows, v.bits))


def mat_mul(a: F2Mat, b: F2Mat) -> F2Mat:
    _same_dimension(a.n, b.n)
    n = a.n
    rows = []
    for r in a.rows:
        acc = 0
        for j in iter_support(n, r):
            acc ^= b.rows[j - 1]
        rows.append(acc)
    return F2Mat(n, tuple(rows))


def invert(m: F2Mat) -> F2Mat:
    """Gauss-Jordan inverse; raises NotInvertibleError when rank < n."""
    n = m.n
    work = list(m.rows)
    inv = list(F2Mat.identity(n).rows)
    for col in range(1, n + 1):
        mask = bit(n, col)
        pivot = next((r for r in range(col - 1, n) if work[r] & mask), None)
        if pivot is None:
            raise NotInvertibleError(f"matrix is singular (no pivot in column {col})")
        work[col - 1], work[pivot] = work[pivot], work[col - 1]
        inv[col - 1], inv[pivot] = inv[pivot], inv[col - 1]
        for r in range(n):
            if r != col - 1 and work[r] & mask:
                work[r] ^= work[col - 1]
                inv[r] ^= inv[col - 1]
    return F2Mat(n, tuple(inv))


def rank(vectors: Iterable[int]) -> int:
    """Rank over F2 of packed vectors of any common width."""
    basis: Dict[int, int] = {}
    for v in vectors:
        v = _reduce(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return len(basis)


def _reduce(v: int, basis: Dict[int, int]) -> int:
    """Reduce v against an echelon basis keyed by leading bit."""
    for lead in sorted(basis, reverse=True):
        if (v >> lead) & 1:
            v ^= basis[lead]
    return v


def linear_relations(vectors: Sequence[int]) -> List[int]:
    """
    Basis of the relations {c : sum_i c_i vectors[i] = 0}.

    Each relation is packed in dimension len(vectors), vector 1 in the top bit.
    """
    m = len(vectors)
    basis: Dict[int, Tuple[int, int]] = {}
    relations = []
    for idx, v in enumerate(vectors, start=1):
        combo = bit(m, idx)
        for lead in sorted(basis, reverse=True):
            if (v >> lead) & 1:
                bv, bc = basis[lead]
                v ^= bv
                combo ^= bc
        if v:
            basis[v.bit_length() - 1] = (v, combo)
        else:
            relations.append(combo)
    return relations


def extend_to_basis(n: int, vectors: Sequence[int]) -> List[int]:
    """Extend independent packed vectors to a basis of F2^n with standard basis vectors."""
    basis: Dict[int, int] = {}
    out = []
    for v in vectors:
        r = _reduce(v, basis)
        if not r:
            raise NotInvertibleError("vectors to extend are linearly dependent")
        basis[r.bit_length() - 1] = r
        out.append(v)
    for i in range(1, n + 1):
        if len(out) == n:
            break
        r = _reduce(bit(n, i), basis)
        if r:
            basis[r.bit_length() - 1] = r
            out.append(bit(n, i))
    return out


def simultaneous_slt_basis(mats: Sequence[F2Mat], n: Optional[int] = None) -> F2Mat:
    """
    Find M with M A M^-1 strictly lower triangular for every A in mats.

    Requires A^2 = 0 for each matrix and pairwise commutation. The basis is
    built from the back: a nonzero vector of the common kernel (in the quotient
    by the vectors already chosen) becomes the next-to-last basis vector. The
    kernel vector is found by starting from the highest-index standard basis
    vector outside the chosen span and replacing v by A_j v while some A_j v
    is nonzero; each replacement puts v in strictly more kernels. Families
    that are already strictly lower triangular get M = I.

    Args:
        mats: commuting square-zero matrices
        n: dimension, required when mats is empty

    Returns:
        F2Mat: invertible change of basis M
    """
    if n is None:
        if not mats:
            raise DimensionMismatchError("dimension required for an empty family")
        n = mats[0].n
    for a in mats:
        _same_dimension(a.n, n)
    for idx, a in enumerate(mats, start=1):
        if not mat_mul(a, a).is_zero():
            raise PreconditionViolatedError(idx, "A^2 = 0")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if mat_mul(mats[i], mats[j]) != mat_mul(mats[j], mats[i]):
                raise PreconditionViolatedError((i + 1, j + 1), "pairwise commutation")

    chosen: Dict[int, int] = {}
    tail: List[int] = []
    rows = [a.rows for a in mats]
    while len(tail) < n:
        v = next(r for r in (_reduce(bit(n, i), chosen) for i in range(n, 0, -1)) if r)
        for _ in range(len(mats) + 1):
            images = [_reduce(mat_vec_bits(r, v), chosen) for r in rows]
            moved = next((w for w in images if w), 0)
            if not moved:
                break
            v = moved
        chosen[v.bit_length() - 1] = v
        tail.append(v)
    columns = list(reversed(tail))
    return invert(F2Mat.from_columns(n, columns))


@dataclass(frozen=True)
class Swap:
    """Swap the indices of pairs i and j."""

    i: int
    j: int


@dataclass(frozen=True)
class Compose:
    """Replace pair i by (A_i + A_j + A_i A_j, b_i + b_j + A_i b_j)."""

    i: int
    j: int


EliminationStep = Union[Swap, Compose]


@dataclass(frozen=True)
class EliminationLog:
    steps: Tuple[EliminationStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[EliminationStep]:
        return iter(self.steps)


Pair = Tuple[F2Mat, F2Vec]


@dataclass(frozen=True)
class Normalized:
    """Reached b_i = e_i for all i."""

    log: EliminationLog
    pairs: Tuple[Pair, ...]


@dataclass(frozen=True)
class ZeroWitness:
    """Reached a state with b_index = 0."""

    index: int
    log: EliminationLog
    pairs: Tuple[Pair, ...]


def _apply(state: List[Pair], step: EliminationStep) -> None:
    i, j = step.i - 1, step.j - 1
    if isinstance(step, Swap):
        state[i], state[j] = state[j], state[i]
        return
    a_i, b_i = state[i]
    a_j, b_j = state[j]
    state[i] = (a_i + a_j + mat_mul(a_i, a_j), b_i + b_j + mat_vec(a_i, b_j))


def replay(pairs: Sequence[Pair], log: EliminationLog) -> Tuple[Pair, ...]:
    """Replay an elimination log on input pairs."""
    state = list(pairs)
    for step in log:
        _apply(state, step)
    return tuple(state)


def replay_labels(n: int, log: EliminationLog) -> List[int]:
    """
    Track which product of generators each pair stands for.

    Starting from labels e_1..e_n, a Compose(i, j) multiplies generator i by
    generator j, so label i picks up label j.
    """
    labels = [bit(n, i) for i in range(1, n + 1)]
    for step in log:
        i, j = step.i - 1, step.j - 1
        if isinstance(step, Swap):
            labels[i], labels[j] = labels[j], labels[i]
        else:
            labels[i] ^= labels[j]
    return labels


def twisted_gauss(pairs: Sequence[Pair]) -> Union[Normalized, ZeroWitness]:
    """
    Twisted Gaussian elimination on (A_i, b_i) pairs.

    Phase one composes equal-alpha pairs (lowest pair first, into the lower
    index) until all alpha(b_i) are distinct, then swaps them into place.
    Phase two row-reduces each b_i to e_i.

    Args:
        pairs: n pairs of a strictly lower triangular n x n matrix and a vector

    Returns:
        Normalized with the log, or ZeroWitness for the first zero b_i reached
    """
    n = len(pairs)
    if n == 0:
        return Normalized(EliminationLog(), ())
    for idx, (a, b) in enumerate(pairs, start=1):
        if a.n != n or b.n != n:
            raise DimensionMismatchError(f"pair {idx} is not {n}-dimensional")
        if not a.is_strictly_lower_triangular():
            raise PreconditionViolatedError(idx, "A strictly lower triangular")

    state = list(pairs)
    steps: List[EliminationStep] = []

    def record(step: EliminationStep) -> None:
        _apply(state, step)
        steps.append(step)

    def zero_index() -> Optional[int]:
        return next((i for i, (_, b) in enumerate(state, start=1) if b.is_zero()), None)

    while True:
        z = zero_index()
        if z is not None:
            return ZeroWitness(z, EliminationLog(tuple(steps)), tuple(state))
        alphas = [first_nonzero_index(b) for _, b in state]
        clash = next(
            ((i, j) for i in range(n) for j in range(i + 1, n) if alphas[i] == alphas[j]),
            None,
        )
        if clash is None:
            break
        record(Compose(clash[0] + 1, clash[1] + 1))

    for target in range(1, n + 1):
        j = next(k for k in range(1, n + 1) if first_nonzero_index(state[k - 1][1]) == target)
        if j != target:
            record(Swap(target, j))

    for i in range(1, n + 1):
        e_i = F2Vec.basis(n, i)
        while state[i - 1][1] != e_i:
            k = first_nonzero_index(state[i - 1][1] + e_i)
            record(Compose(i, int(k)))
            if state[i - 1][1].is_zero():
                return ZeroWitness(i, EliminationLog(tuple(steps)), tuple(state))

    logger.debug(f"twisted elimination finished in {len(steps)} steps")
    return Normalized(EliminationLog(tuple(steps)), tuple(state))
