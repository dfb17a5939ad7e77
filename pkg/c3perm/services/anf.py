"""
Algebraic normal form service for boolean functions and permutation gates.

A monomial is a bitmask packed like an F2 vector: variable a_i is bit n - i, the
empty mask is the constant 1. The coefficient vector of a polynomial and the
truth table of the function it defines are related by the Moebius transform
over the subset lattice, which is its own inverse over F2.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

import numpy as np

from c3perm.core.constants import MAX_TRUTH_TABLE_QUBITS, ZERO_POLY_DEGREE
from c3perm.core.exceptions import BadLengthError, DimensionMismatchError, TooLargeError
from c3perm.models.permutation import PermGate
from c3perm.services.f2core import F2Vec, bit, iter_support

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnfPoly:
    """Multilinear polynomial over F2 in variables a_1..a_n."""

    n: int
    monomials: FrozenSet[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "monomials", frozenset(self.monomials))
        limit = 1 << self.n
        if any(not 0 <= m < limit for m in self.monomials):
            raise DimensionMismatchError(f"monomial outside {self.n} variables")

    def is_zero(self) -> bool:
        return not self.monomials

    def variables(self, monomial: int) -> List[int]:
        return list(iter_support(self.n, monomial))

    def __add__(self, other: "AnfPoly") -> "AnfPoly":
        return anf_add(self, other)

    def __mul__(self, other: "AnfPoly") -> "AnfPoly":
        return anf_mul(self, other)

    def __str__(self) -> str:
        return anf_render(self)


@dataclass(frozen=True)
class PermPolyRep:
    """The n coordinate polynomials of a permutation gate."""

    n: int
    coords: Tuple[AnfPoly, ...]

    def __getitem__(self, i: int) -> AnfPoly:
        """Coordinate i, 1-based."""
        return self.coords[i - 1]

    def degrees(self) -> List[Union[int, float]]:
        return [anf_degree(p) for p in self.coords]

    def max_degree(self) -> Union[int, float]:
        return max(self.degrees())

    def render(self) -> List[str]:
        return [anf_render(p) for p in self.coords]


def moebius(values: np.ndarray) -> np.ndarray:
    """Moebius transform of a 0/1 array of length 2^n (self-inverse over F2)."""
    size = values.size
    n = size.bit_length() - 1
    f = np.array(values, dtype=np.uint8).reshape((2,) * n)
    for axis in range(n):
        low = [slice(None)] * n
        high = [slice(None)] * n
        low[axis] = 0
        high[axis] = 1
        f[tuple(high)] ^= f[tuple(low)]
    return f.reshape(-1)


def _table_width(table: Sequence[int]) -> int:
    size = len(table)
    if size < 2 or size & (size - 1):
        raise BadLengthError(f"truth table length {size} is not a power of two >= 2")
    n = size.bit_length() - 1
    if n > MAX_TRUTH_TABLE_QUBITS:
        raise TooLargeError(n, MAX_TRUTH_TABLE_QUBITS, "truth table")
    return n


def tt_to_anf(table: Union[Sequence[int], np.ndarray]) -> AnfPoly:
    """
    Convert a boolean truth table to its algebraic normal form.

    Args:
        table: 2^n output bits, index sum a_i 2^(n-i)

    Returns:
        AnfPoly: the unique polynomial with that truth table
    """
    n = _table_width(table)
    coeffs = moebius(np.asarray(table, dtype=np.uint8) & 1)
    return AnfPoly(n, frozenset(int(m) for m in np.flatnonzero(coeffs)))


def anf_to_tt(p: AnfPoly) -> np.ndarray:
    if p.n > MAX_TRUTH_TABLE_QUBITS:
        raise TooLargeError(p.n, MAX_TRUTH_TABLE_QUBITS, "truth table")
    coeffs = np.zeros(1 << p.n, dtype=np.uint8)
    if p.monomials:
        coeffs[list(p.monomials)] = 1
    return moebius(coeffs)


def anf_zero(n: int) -> AnfPoly:
    return AnfPoly(n)


def anf_constant(n: int, c: int = 1) -> AnfPoly:
    return AnfPoly(n, frozenset({0}) if c & 1 else frozenset())


def anf_variable(n: int, i: int) -> AnfPoly:
    return AnfPoly(n, frozenset({bit(n, i)}))


def anf_from_terms(n: int, terms: Iterable[Iterable[int]]) -> AnfPoly:
    """Build a polynomial from monomials given as variable index lists; repeats cancel."""
    monomials: set = set()
    for term in terms:
        mask = 0
        for i in term:
            mask |= bit(n, i)
        monomials ^= {mask}
    return AnfPoly(n, frozenset(monomials))


def _same_n(p: AnfPoly, q: AnfPoly) -> None:
    if p.n != q.n:
        raise DimensionMismatchError(f"polynomials in {p.n} and {q.n} variables")


def anf_add(p: AnfPoly, q: AnfPoly) -> AnfPoly:
    _same_n(p, q)
    return AnfPoly(p.n, p.monomials ^ q.monomials)


def anf_mul(p: AnfPoly, q: AnfPoly) -> AnfPoly:
    """Product with multilinear reduction a_i^2 = a_i."""
    _same_n(p, q)
    out: set = set()
    for m1 in p.monomials:
        for m2 in q.monomials:
            out ^= {m1 | m2}
    return AnfPoly(p.n, frozenset(out))


def anf_degree(p: AnfPoly) -> Union[int, float]:
    if not p.monomials:
        return ZERO_POLY_DEGREE
    return max(m.bit_count() for m in p.monomials)


def anf_eval(p: AnfPoly, a: Union[F2Vec, int]) -> int:
    if isinstance(a, F2Vec):
        if a.n != p.n:
            raise DimensionMismatchError(f"point of dimension {a.n} for {p.n} variables")
        a = a.bits
    return sum(1 for m in p.monomials if m & a == m) & 1


def anf_substitute(p: AnfPoly, coords: Sequence[AnfPoly]) -> AnfPoly:
    """Replace each variable a_i of p by coords[i-1]."""
    if len(coords) != p.n:
        raise DimensionMismatchError(f"{len(coords)} substitutions for {p.n} variables")
    target_n = coords[0].n
    total = anf_zero(target_n)
    for m in p.monomials:
        term = anf_constant(target_n)
        for i in iter_support(p.n, m):
            term = anf_mul(term, coords[i - 1])
        total = anf_add(total, term)
    return total


def monomial_key(n: int, m: int) -> Tuple[int, List[int]]:
    return (m.bit_count(), list(iter_support(n, m)))


def anf_render(p: AnfPoly) -> str:
    """Render as e.g. 'a3 + a1*a2': by degree, then lexicographic on variable indices."""
    if not p.monomials:
        return "0"
    terms = []
    for m in sorted(p.monomials, key=lambda m: monomial_key(p.n, m)):
        terms.append("*".join(f"a{i}" for i in iter_support(p.n, m)) or "1")
    return " + ".join(terms)


def perm_coords(pi: PermGate) -> PermPolyRep:
    """Polynomial representation: coordinate i is the ANF of output bit i."""
    coords = tuple(tt_to_anf(pi.output_bit(i)) for i in range(1, pi.n + 1))
    return PermPolyRep(pi.n, coords)


def invert_perm(pi: PermGate) -> PermGate:
    return pi.inverse()
