"""
Clifford hierarchy service for permutation gates.

Membership in C3, level refutation by coordinate degree, reduction of C3
permutations to staircase form, the semi-Clifford decision and the
mismatch-free decomposition of semi-Clifford permutations.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from c3perm.core.config import settings
from c3perm.core.exceptions import (
    DimensionMismatchError,
    HasMismatchError,
    InternalContradictionError,
    NotInC3Error,
    NotSemiCliffordError,
    NotStaircaseError,
    PreconditionViolatedError,
    TooLargeError,
)
from c3perm.models.circuit import MismatchFreeCircuit, MultiControlledX, ToffoliCircuit
from c3perm.models.pauli import Pauli
from c3perm.models.permutation import PermGate
from c3perm.services.anf import (
    AnfPoly,
    PermPolyRep,
    anf_degree,
    moebius,
    perm_coords,
    tt_to_anf,
)
from c3perm.services.descmult import all_triples_zero, from_staircase
from c3perm.services.f2core import (
    F2Mat,
    F2Vec,
    Normalized,
    bit,
    extend_to_basis,
    invert,
    iter_support,
    linear_relations,
    mat_mul,
    parity,
    rank,
    replay_labels,
    simultaneous_slt_basis,
    twisted_gauss,
)
from c3perm.services.permgate import AffineMap, apply_gates, as_affine, to_staircase

logger = logging.getLogger(__name__)


def conjugate_x(pi: PermGate, u: int) -> PermGate:
    """pi X^u pi^-1 as a permutation: a -> pi(pi^-1(a) + u)."""
    return PermGate(pi.table[pi.inverse().table ^ u])


@dataclass(frozen=True)
class PauliConjugate:
    """
    pi P pi^-1 for P = i^s X^u Z^v, written i^s * sigma * diag((-1)^f).

    The diagonal acts first: the operator sends |a> to i^s (-1)^f(a) |sigma(a)>.
    """

    phase: int
    permutation: PermGate
    diagonal: AnfPoly

    @property
    def n(self) -> int:
        return self.permutation.n

    def as_pauli(self) -> Optional[Pauli]:
        """The Pauli operator when sigma is a translation and f is affine, else None."""
        table = self.permutation.table
        shift = int(table[0])
        if not np.array_equal(table ^ np.arange(table.size), np.full(table.size, shift)):
            return None
        if anf_degree(self.diagonal) > 1:
            return None
        n = self.n
        constant = 1 if 0 in self.diagonal.monomials else 0
        z = sum(m for m in self.diagonal.monomials if m)
        return Pauli(n, self.phase + 2 * constant, shift, z)

    @property
    def is_pauli(self) -> bool:
        return self.as_pauli() is not None


def conjugate_pauli_by_perm(pi: PermGate, p: Pauli) -> PauliConjugate:
    """
    Split pi P pi^-1 into a permutation part and a +-1 diagonal part.

    Args:
        pi: permutation gate
        p: Pauli operator on the same qubits

    Returns:
        PauliConjugate: sigma(a) = pi(pi^-1(a) + u) and f(a) = v . pi^-1(a)
    """
    if p.n != pi.n:
        raise DimensionMismatchError(f"{p.n}-qubit Pauli for a {pi.n}-qubit gate")
    inv = pi.inverse()
    sigma = PermGate(pi.table[inv.table ^ p.u])
    f = np.zeros(pi.size, dtype=np.uint8)
    for i in iter_support(pi.n, p.v):
        f ^= inv.output_bit(i)
    return PauliConjugate(p.s, sigma, tt_to_anf(f))


def pauli_check(pi: PermGate, p: Pauli) -> bool:
    return conjugate_pauli_by_perm(pi, p).is_pauli


@dataclass(frozen=True)
class C3Result:
    """Ok when witness is None; otherwise the generator whose conjugate leaves C2."""

    witness: Optional[str] = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.witness is None

    def __bool__(self) -> bool:
        return self.ok


def is_c3_perm(pi: PermGate) -> C3Result:
    """
    Decide pi in C3 from the conjugates of the generators X_i and Z_i.

    pi X_i pi^-1 is a permutation, Clifford iff affine; pi Z_i pi^-1 is the
    diagonal of coordinate i of pi^-1, Clifford iff that coordinate has degree
    at most two. All X generators are checked before any Z generator.
    """
    n = pi.n
    inv = pi.inverse()
    for i in range(1, n + 1):
        sigma = PermGate(pi.table[inv.table ^ bit(n, i)])
        if as_affine(sigma) is None:
            return C3Result(f"X{i}", f"conjugate of X{i} is not an affine permutation")
    for i in range(1, n + 1):
        degree = anf_degree(tt_to_anf(inv.output_bit(i)))
        if degree > 2:
            return C3Result(f"Z{i}", f"coordinate {i} of the inverse has degree {degree}")
    return C3Result()


def refute_level(target: Union[PermGate, PermPolyRep]) -> Optional[int]:
    """
    Degree lower bound on the hierarchy level.

    A gate in C_(k+1) has inverse coordinates of degree at most k, so inverse
    coordinates of degree d rule out C_d.

    Args:
        target: the gate, or the polynomial representation of its inverse when
            the gate is too wide for a truth table

    Returns:
        d when d >= 2, None when the gate is Clifford
    """
    coords = perm_coords(target.inverse()) if isinstance(target, PermGate) else target
    d = coords.max_degree()
    if d < 2:
        return None
    return int(d)


@dataclass(frozen=True)
class ReductionResult:
    """pi = phi1 o mu o phi2 with mu a staircase circuit in C3."""

    phi1: AffineMap
    mu: ToffoliCircuit
    phi2: AffineMap

    def recompose(self) -> PermGate:
        n = self.phi1.n
        mu = PermGate(apply_gates(self.mu.gates, n))
        return self.phi1.to_perm().compose(mu).compose(self.phi2.to_perm())


def reduce_to_staircase(pi: PermGate) -> ReductionResult:
    """
    Write a C3 permutation as Clifford o staircase o Clifford.

    The pipeline fixes 0 with X gates, reads the pairs (A_j, b_j) off the
    affine conjugates pi X_j pi^-1 = (I + A_j) a + b_j, moves every A_j to strictly
    lower triangular form with one change of basis, runs the twisted
    elimination to make b_j = e_j while tracking which products X^(u_j) the pairs
    stand for, and finally relabels the X generators by the linear map e_j -> u_j.

    Raises:
        NotInC3Error: pi is outside C3
        InternalContradictionError: the elimination or recomposition fails
    """
    check = is_c3_perm(pi)
    if not check:
        raise NotInC3Error(check.witness)
    n = pi.n
    w0 = pi(0)
    pi1 = PermGate(pi.table ^ w0)

    mats = []
    for j in range(1, n + 1):
        affine = as_affine(conjugate_x(pi1, bit(n, j)))
        if affine is None:
            raise InternalContradictionError(f"conjugate of X{j} lost affinity after translation")
        mats.append(affine.M + F2Mat.identity(n))
    psi = simultaneous_slt_basis(mats, n)
    psi_map = AffineMap.linear(psi)
    pi2 = psi_map.to_perm().compose(pi1)
    logger.debug(f"simultaneous triangular basis found for {n} conjugates")

    pairs = []
    for j in range(1, n + 1):
        affine = as_affine(conjugate_x(pi2, bit(n, j)))
        pairs.append((affine.M + F2Mat.identity(n), F2Vec(n, pi2(bit(n, j)))))
    outcome = twisted_gauss(pairs)
    if not isinstance(outcome, Normalized):
        raise InternalContradictionError(f"twisted elimination reached b_{outcome.index} = 0")

    labels = replay_labels(n, outcome.log)
    nu = F2Mat.from_columns(n, labels)
    mu_perm = pi2.compose(AffineMap.linear(nu).to_perm())
    try:
        mu = to_staircase(mu_perm)
    except NotStaircaseError as e:
        raise InternalContradictionError(f"relabelled permutation is not staircase: {e.reason}") from e

    result = ReductionResult(
        phi1=AffineMap(invert(psi), F2Vec(n, w0)),
        mu=mu,
        phi2=AffineMap.linear(invert(nu)),
    )
    if result.recompose() != pi:
        raise InternalContradictionError("staircase reduction does not recompose to the input")
    logger.info(f"reduced {n}-qubit permutation to a staircase circuit of {len(mu)} gates")
    return result


@dataclass(frozen=True)
class StabilizerSubgroup:
    """
    Pauli labels (u, v) with pi X^u Z^v pi^-1 Pauli, as X part U and Z part V.

    The subgroup is the direct sum of U and V because a permutation times a
    +-1 diagonal is Pauli only when both factors are.
    """

    n: int
    x_part: Tuple[int, ...]
    z_part: Tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.x_part) + len(self.z_part)

    @property
    def pairing_rank(self) -> int:
        """Rank of the pairing u . v between U and V."""
        rows = [sum(parity(u & v) << t for t, v in enumerate(self.z_part)) for u in self.x_part]
        return rank(rows)

    @property
    def max_isotropic_dimension(self) -> int:
        return self.dimension - self.pairing_rank

    def generators(self) -> List[Pauli]:
        return [Pauli(self.n, 0, u, 0) for u in self.x_part] + [
            Pauli(self.n, 0, 0, v) for v in self.z_part
        ]


def _check_semi_clifford_size(n: int) -> None:
    if n > settings.SEMI_CLIFFORD_MAX_QUBITS:
        raise TooLargeError(n, settings.SEMI_CLIFFORD_MAX_QUBITS, "semi-Clifford general route")


def pauli_stabilizer_subgroup(pi: PermGate) -> StabilizerSubgroup:
    """
    Compute the labels of Paulis that pi conjugates to Paulis.

    U collects the u with pi X^u pi^-1 a translation, found by testing all 2^n
    labels. V is the space of v with v . pi^-1 of degree at most one: a linear
    relation among the non-affine parts of the inverse coordinates.
    """
    n = pi.n
    _check_semi_clifford_size(n)
    inv = pi.inverse()
    states = np.arange(pi.size, dtype=np.int64)

    translations = []
    for u in range(1, pi.size):
        diff = pi.table[inv.table ^ u] ^ states
        if np.all(diff == diff[0]):
            translations.append(u)
    x_basis: List[int] = []
    for u in translations:
        if rank(x_basis + [u]) > len(x_basis):
            x_basis.append(u)

    degree = np.array([int(m).bit_count() for m in range(pi.size)])
    high = degree >= 2
    nonlinear = []
    for i in range(1, n + 1):
        coeffs = moebius(inv.output_bit(i)) & high
        nonlinear.append(int.from_bytes(np.packbits(coeffs).tobytes(), "big"))
    z_basis = linear_relations(nonlinear)

    logger.debug(f"stabilizer subgroup: dim U = {len(x_basis)}, dim V = {len(z_basis)}")
    return StabilizerSubgroup(n, tuple(x_basis), tuple(z_basis))


def is_semi_clifford_perm(pi: PermGate, method: str = "auto") -> bool:
    """
    Decide whether pi maps some maximal abelian Pauli subgroup to Paulis.

    Args:
        pi: permutation gate
        method: "general" uses the stabilizer subgroup and its largest isotropic
            subspace; "fast" requires pi in C3 and tests the triple products of
            the multiplication of its staircase form; "auto" takes the fast path
            for C3 permutations

    Returns:
        bool: semi-Cliffordness of pi
    """
    if method not in ("auto", "general", "fast"):
        raise ValueError(f"unknown method {method!r}")
    if method != "general":
        check = is_c3_perm(pi)
        if check:
            reduction = reduce_to_staircase(pi)
            return all_triples_zero(from_staircase(reduction.mu, pi.n))
        if method == "fast":
            raise NotInC3Error(check.witness)
    group = pauli_stabilizer_subgroup(pi)
    return group.max_isotropic_dimension >= pi.n


@dataclass(frozen=True)
class SemiCliffordDecomposition:
    """pi = phi1 o mu o phi2 with mu a mismatch-free C^*X circuit."""

    phi1: AffineMap
    mu: MismatchFreeCircuit
    phi2: AffineMap

    def recompose(self) -> PermGate:
        n = self.phi1.n
        mu = PermGate(apply_gates(self.mu.gates, n))
        return self.phi1.to_perm().compose(mu).compose(self.phi2.to_perm())


def semi_clifford_decompose(pi: PermGate) -> SemiCliffordDecomposition:
    """
    Decompose a semi-Clifford permutation into Clifford, mismatch-free, Clifford.

    With U the X part of the stabilizer subgroup (dimension m), the Lagrangian
    U + U^perp lies in the subgroup exactly when pi is semi-Clifford. After a
    change of basis sending e_1..e_m onto U, translating 0 back to 0 and
    relabelling the image translations, the gate commutes with X_1..X_m and its
    inverse acts linearly on qubits m+1..n. Straightening that linear part
    leaves a_i + p_i(a_(m+1), ..., a_n) on qubits i <= m; each monomial of p_i is a
    C^*X gate with target i.

    Raises:
        NotSemiCliffordError: pi is not semi-Clifford
        TooLargeError: n above the general-route cap
    """
    n = pi.n
    group = pauli_stabilizer_subgroup(pi)
    if group.max_isotropic_dimension < n:
        raise NotSemiCliffordError(
            f"largest isotropic subspace has dimension {group.max_isotropic_dimension} < {n}"
        )
    m = len(group.x_part)

    nu = F2Mat.from_columns(n, extend_to_basis(n, list(group.x_part)))
    rho = pi.compose(AffineMap.linear(nu).to_perm())
    w0 = rho(0)
    rho1 = PermGate(rho.table ^ w0)
    shifts = [rho1(bit(n, i)) for i in range(1, m + 1)]
    nu1 = F2Mat.from_columns(n, extend_to_basis(n, shifts))
    rho2 = AffineMap.linear(invert(nu1)).to_perm().compose(rho1)

    rho2_inv = rho2.inverse()
    straighten = [bit(n, i) for i in range(1, m + 1)]
    for k in range(m + 1, n + 1):
        straighten.append(rho2_inv(bit(n, k)) & ((1 << (n - m)) - 1))
    varpi = F2Mat.from_columns(n, straighten)
    mu_perm = rho2.compose(AffineMap.linear(varpi).to_perm())

    gates = []
    control_mask = (1 << (n - m)) - 1
    for i in range(1, m + 1):
        coord = tt_to_anf(mu_perm.output_bit(i))
        for mono in sorted(coord.monomials - {bit(n, i)}):
            if mono & ~control_mask or mono == 0:
                raise InternalContradictionError(
                    f"coordinate {i} has a term outside the control qubits {m + 1}..{n}"
                )
            gates.append(MultiControlledX(frozenset(iter_support(n, mono)), i))
    for k in range(m + 1, n + 1):
        if tt_to_anf(mu_perm.output_bit(k)).monomials != {bit(n, k)}:
            raise InternalContradictionError(f"qubit {k} is not fixed by the normalised gate")

    result = SemiCliffordDecomposition(
        phi1=AffineMap(nu1, F2Vec(n, w0)),
        mu=MismatchFreeCircuit(tuple(gates)),
        phi2=AffineMap.linear(invert(mat_mul(nu, varpi))),
    )
    if result.recompose() != pi:
        raise InternalContradictionError("semi-Clifford decomposition does not recompose")
    logger.info(f"semi-Clifford decomposition with {len(gates)} C^*X gates on {n} qubits")
    return result


def mismatch_free_to_perm(c: MismatchFreeCircuit, n: Optional[int] = None) -> PermGate:
    n = n if n is not None else max(c.max_qubit, 1)
    return PermGate(apply_gates(c.gates, n))


def mismatch_free_level(c: MismatchFreeCircuit) -> int:
    """
    Hierarchy level of a mismatch-free circuit: one more than its largest control count.

    Raises:
        HasMismatchError: two gates mismatch or repeat
    """
    pair = c.find_mismatch()
    if pair is not None:
        raise HasMismatchError(pair)
    return c.max_controls + 1


def commute_iff_mismatch_free(g1: MultiControlledX, g2: MultiControlledX) -> Tuple[bool, bool]:
    """Return (the gates commute, the gates are mismatch-free), computed independently."""
    n = max(max(g1.qubits), max(g2.qubits))
    a = PermGate(apply_gates([g1], n))
    b = PermGate(apply_gates([g2], n))
    return a.compose(b) == b.compose(a), not g1.mismatches(g2)


def _label(p: Pauli) -> int:
    return (p.u << p.n) | p.v


def _check_abelian(gens: Sequence[Pauli], which: str) -> None:
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            if not gens[a].commutes(gens[b]):
                raise PreconditionViolatedError(which, f"generators {a + 1} and {b + 1} anticommute")


def extend_to_max_abelian(a_gens: Sequence[Pauli], b_gens: Sequence[Pauli]) -> List[Pauli]:
    """
    Extend an abelian group B to a maximal abelian group inside <A, B>.

    For each generator b of B not yet in the group, the generators
    a_1..a_k anticommuting with b are replaced by b, a_1 a_2, a_2 a_3, ...,
    a_(k-1) a_k; the commuting generators are kept. Phases are ignored.

    Args:
        a_gens: n independent commuting generators of a maximal abelian group
        b_gens: pairwise commuting generators

    Returns:
        List[Pauli]: n generators of the extended group
    """
    if not a_gens:
        raise PreconditionViolatedError("A", "at least one generator")
    n = a_gens[0].n
    if any(p.n != n for p in [*a_gens, *b_gens]):
        raise DimensionMismatchError("generators act on different numbers of qubits")
    if len(a_gens) != n or rank(_label(p) for p in a_gens) != n:
        raise PreconditionViolatedError("A", f"{n} independent generators")
    _check_abelian(a_gens, "A")
    _check_abelian(b_gens, "B")

    current = list(a_gens)
    for b in b_gens:
        labels = [_label(p) for p in current]
        if rank(labels + [_label(b)]) == len(labels):
            continue
        anti = [p for p in current if not p.commutes(b)]
        keep = [p for p in current if p.commutes(b)]
        if not anti:
            raise InternalContradictionError(f"{b} commutes with a maximal abelian group it is not in")
        current = [b] + [anti[t] * anti[t + 1] for t in range(len(anti) - 1)] + keep
        logger.debug(f"added {b}: {len(anti)} anticommuting generators paired up")

    if rank(_label(p) for p in current) != n:
        raise InternalContradictionError("extended generators are dependent")
    return current
