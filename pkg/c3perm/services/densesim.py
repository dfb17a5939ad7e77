"""
Dense unitary service with exact arithmetic for small numbers of qubits.

Every matrix built here has entries z / sqrt(2)^m with z in Z[w], w = e^(i pi/4).
An entry is stored as four integer coefficients of 1, w, w^2, w^3 and the whole
matrix shares one exponent m, kept minimal so that equal matrices have equal
representations. Gates are applied as row operations; general products go
through float64 matrix multiplication of the integer coefficient planes, which
is exact while the partial sums stay below 2^52. Planes switch from int64 to
Python integers once an entry reaches 2^61.
"""

import logging
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from c3perm.core.config import settings
from c3perm.core.exceptions import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    TooLargeError,
    UnknownGateError,
    VerificationFailedError,
)
from c3perm.models.circuit import Gate
from c3perm.models.pauli import Pauli
from c3perm.models.permutation import PermGate
from c3perm.schemas.certificate import GottesmanMochonCertificate
from c3perm.services.circuit_io import parse_circuit
from c3perm.services.family import uk_circuit
from c3perm.services.permgate import circuit_to_perm

logger = logging.getLogger(__name__)

_FLOAT_EXACT_LIMIT = 2 ** 52
_INT64_SAFE_LIMIT = 2 ** 61


def _exact_planes(z: np.ndarray) -> np.ndarray:
    """int64 planes while every entry is below 2^61 in magnitude, object planes beyond."""
    large = z.size > 0 and int(np.abs(z).max()) >= _INT64_SAFE_LIMIT
    if large:
        return z if z.dtype == object else z.astype(object)
    return z.astype(np.int64, copy=False)


def _times_w_power(z: np.ndarray, power: int) -> np.ndarray:
    """Multiply coefficient planes by w^power (w^4 = -1)."""
    power %= 8
    out = z
    for _ in range(power):
        out = np.stack([-out[3], out[0], out[1], out[2]])
    return out


def _times_sqrt2(z: np.ndarray) -> np.ndarray:
    """Multiply by sqrt(2) = w - w^3."""
    a, b, c, d = z
    return np.stack([b - d, a + c, b + d, c - a])


class DenseUnitary:
    """
    Exact 2^n x 2^n matrix over Z[w] / sqrt(2)^m.

    coeffs has shape (4, 2^n, 2^n); entry (r, c) equals
    sum_t coeffs[t, r, c] w^t / sqrt(2)^m.
    """

    __slots__ = ("n", "coeffs", "m")

    def __init__(self, n: int, coeffs: np.ndarray, m: int = 0):
        size = 1 << n
        if coeffs.shape != (4, size, size):
            raise DimensionMismatchError(f"coefficient planes {coeffs.shape} for {n} qubits")
        self.n = n
        self.coeffs = _exact_planes(coeffs)
        self.m = m
        self._normalize()

    def _normalize(self) -> None:
        while self.m > 0:
            scaled = _times_sqrt2(self.coeffs)
            if np.any(scaled & 1):
                break
            self.coeffs = _exact_planes(scaled >> 1)
            self.m -= 1

    @classmethod
    def identity(cls, n: int) -> "DenseUnitary":
        coeffs = np.zeros((4, 1 << n, 1 << n), dtype=np.int64)
        coeffs[0] = np.eye(1 << n, dtype=np.int64)
        return cls(n, coeffs)

    @classmethod
    def from_perm(cls, pi: PermGate) -> "DenseUnitary":
        """Permutation matrix with column a equal to the basis vector pi(a)."""
        size = pi.size
        coeffs = np.zeros((4, size, size), dtype=np.int64)
        coeffs[0, pi.table, np.arange(size)] = 1
        return cls(pi.n, coeffs)

    @classmethod
    def from_pauli(cls, p: Pauli) -> "DenseUnitary":
        """i^s X^u Z^v: column a holds i^s (-1)^(v.a) in row a + u."""
        size = 1 << p.n
        cols = np.arange(size, dtype=np.int64)
        signs = _parity_array(cols & p.v, p.n)
        coeffs = np.zeros((4, size, size), dtype=np.int64)
        coeffs[0, cols ^ p.u, cols] = 1 - 2 * signs
        return cls(p.n, _times_w_power(coeffs, 2 * p.s))

    @property
    def size(self) -> int:
        return 1 << self.n

    def fingerprint(self) -> bytes:
        head = self.m.to_bytes(4, "little", signed=True)
        if self.coeffs.dtype == object:
            return head + repr(self.coeffs.tolist()).encode()
        return head + self.coeffs.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseUnitary):
            return NotImplemented
        return self.n == other.n and self.m == other.m and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash(self.fingerprint())

    def __repr__(self) -> str:
        return f"<DenseUnitary(n={self.n}, m={self.m})>"

    def to_complex(self) -> np.ndarray:
        w = np.exp(1j * np.pi / 4)
        z = sum(self.coeffs[t] * w ** t for t in range(4))
        return z / np.sqrt(2) ** self.m

    def dagger(self) -> "DenseUnitary":
        """Conjugate transpose; conj(a + b w + c w^2 + d w^3) = a - d w - c w^2 - b w^3."""
        a, b, c, d = self.coeffs
        conj = np.stack([a, -d, -c, -b])
        return DenseUnitary(self.n, np.ascontiguousarray(conj.transpose(0, 2, 1)), self.m)

    def __matmul__(self, other: "DenseUnitary") -> "DenseUnitary":
        if self.n != other.n:
            raise DimensionMismatchError(f"{self.n}- and {other.n}-qubit matrices")
        bound = int(np.abs(self.coeffs).max()) * int(np.abs(other.coeffs).max()) * self.size * 4
        exact_float = bound < _FLOAT_EXACT_LIMIT
        dtype = np.float64 if exact_float else (object if bound >= _INT64_SAFE_LIMIT else np.int64)
        left = self.coeffs.astype(dtype)
        right = other.coeffs.astype(dtype)
        stacked = np.concatenate(list(right), axis=1)
        out = np.zeros((4, self.size, self.size), dtype=np.int64 if dtype is np.float64 else dtype)
        for i in range(4):
            blocks = left[i] @ stacked
            for j in range(4):
                block = blocks[:, j * self.size:(j + 1) * self.size]
                if exact_float:
                    block = np.rint(block).astype(np.int64)
                t = i + j
                if t < 4:
                    out[t] += block
                else:
                    out[t - 4] -= block
        return DenseUnitary(self.n, out, self.m + other.m)

    def apply_gate(self, gate: Gate) -> "DenseUnitary":
        """Left-multiply by one gate using row operations."""
        n = self.n
        if max(gate.qubits) > n:
            raise IndexOutOfRangeError(f"gate {gate} acts outside {n} qubits")
        rows = np.arange(self.size, dtype=np.int64)
        masks = [1 << (n - q) for q in gate.qubits]
        z = self.coeffs
        m = self.m
        name = gate.name

        def all_set(qmasks: Sequence[int]) -> np.ndarray:
            total = sum(qmasks)
            return (rows & total) == total

        if name in ("X", "CNOT", "TOF", "MCX"):
            hit = all_set(masks[:-1])
            source = np.where(hit, rows ^ masks[-1], rows)
            z = z[:, source, :]
        elif name == "CSWAP":
            ctrl, a, b = masks
            swap = ((rows & ctrl) != 0) & (((rows & a) != 0) != ((rows & b) != 0))
            source = np.where(swap, rows ^ a ^ b, rows)
            z = z[:, source, :]
        elif name in ("Z", "CZ", "CCZ", "S", "T"):
            power = {"S": 2, "T": 1}.get(name, 4)
            hit = all_set(masks)
            z = z.copy()
            z[:, hit, :] = _times_w_power(z[:, hit, :], power)
        elif name == "H":
            low = rows[(rows & masks[0]) == 0]
            high = low | masks[0]
            z = z.copy()
            top, bottom = z[:, low, :].copy(), z[:, high, :].copy()
            z[:, low, :] = top + bottom
            z[:, high, :] = top - bottom
            m += 1
        else:
            raise UnknownGateError(f"{name} is not supported by the dense builder")
        return DenseUnitary(n, z, m)

    def conjugate(self, other: "DenseUnitary") -> "DenseUnitary":
        """self * other * self^dagger."""
        return self @ other @ self.dagger()

    def times_pauli(self, p: Pauli) -> "DenseUnitary":
        """self * P as a signed column permutation: column b becomes i^s (-1)^(v.b) column b + u."""
        if p.n != self.n:
            raise DimensionMismatchError(f"{p.n}-qubit Pauli for {self.n}-qubit matrix")
        cols = np.arange(self.size, dtype=np.int64)
        z = self.coeffs[:, :, cols ^ p.u]
        negate = _parity_array(cols & p.v, self.n).astype(bool)
        z[:, :, negate] = -z[:, :, negate]
        return DenseUnitary(self.n, _times_w_power(z, 2 * p.s), self.m)

    def conjugate_pauli(self, p: Pauli) -> "DenseUnitary":
        """self * P * self^dagger."""
        return self.times_pauli(p) @ self.dagger()


def _zw_conj(x: List[int]) -> List[int]:
    a, b, c, d = x
    return [a, -d, -c, -b]


def _zw_product(x: List[int], y: List[int]) -> List[int]:
    out = [0, 0, 0, 0]
    for i in range(4):
        for j in range(4):
            if i + j < 4:
                out[i + j] += x[i] * y[j]
            else:
                out[i + j - 4] -= x[i] * y[j]
    return out


def _parity_array(values: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(values)
    for b in range(n):
        out ^= (values >> b) & 1
    return out


def _check_size(n: int, limit: int, operation: str) -> None:
    if n > limit:
        raise TooLargeError(n, limit, operation)


def build(circuit: Union[str, Sequence[Gate]], n: Optional[int] = None) -> DenseUnitary:
    """
    Dense matrix of a circuit in application order.

    Args:
        circuit: circuit text or parsed gates
        n: number of qubits, default the largest index used

    Returns:
        DenseUnitary: exact matrix of the circuit
    """
    gates = parse_circuit(circuit) if isinstance(circuit, str) else list(circuit)
    if n is None:
        n = max((max(g.qubits) for g in gates), default=1)
    _check_size(n, settings.DENSE_MAX_QUBITS, "dense build")
    u = DenseUnitary.identity(n)
    for gate in gates:
        u = u.apply_gate(gate)
    return u


def is_pauli(u: DenseUnitary) -> bool:
    """True iff u = c P for a Pauli string P and a unit scalar c."""
    _check_size(u.n, settings.DENSE_MAX_QUBITS, "is_pauli")
    z = u.coeffs
    size = u.size
    nonzero = np.any(z != 0, axis=0)
    if not np.all(nonzero.sum(axis=0) == 1):
        return False
    rows = np.argmax(nonzero, axis=0)
    cols = np.arange(size)
    shift = rows[0]
    if not np.array_equal(rows ^ cols, np.full(size, shift)):
        return False
    values = z[:, rows, cols]
    first = values[:, :1]
    plus = np.all(values == first, axis=0)
    minus = np.all(values == -first, axis=0)
    if not np.all(plus | minus):
        return False
    signs = minus.astype(np.int64)
    zmask = 0
    for q in range(u.n):
        if signs[1 << q]:
            zmask |= 1 << q
    if not np.array_equal(signs, _parity_array(cols & zmask, u.n)):
        return False
    unit = first[:, 0].tolist()
    return _zw_product(unit, _zw_conj(unit)) == [1 << u.m, 0, 0, 0]


def _generators(n: int) -> List[Pauli]:
    gens = []
    for i in range(1, n + 1):
        gens.append(Pauli.x(n, i))
        gens.append(Pauli.z(n, i))
    return gens


def is_clifford(u: DenseUnitary) -> bool:
    """Conjugates of every X_i and Z_i are Pauli."""
    _check_size(u.n, settings.DENSE_MAX_QUBITS, "is_clifford")
    return all(is_pauli(u.conjugate_pauli(g)) for g in _generators(u.n))


def is_c3_dense(u: DenseUnitary) -> bool:
    """Conjugates of every X_i and Z_i are Clifford."""
    _check_size(u.n, settings.DENSE_C3_MAX_QUBITS, "is_c3_dense")
    for g in _generators(u.n):
        if not is_clifford(u.conjugate_pauli(g)):
            logger.debug(f"conjugate of {g} leaves the Clifford group")
            return False
    return True


def is_c4_dense(u: DenseUnitary) -> bool:
    """
    Conjugates of all 4^n phase-free Paulis are in C3.

    Products of generators are not enough above C3, so every Pauli is checked;
    inner verdicts are memoised per call on the exact matrix fingerprint.
    """
    _check_size(u.n, settings.DENSE_C4_MAX_QUBITS, "is_c4_dense")
    n = u.n
    memo: Dict[bytes, bool] = {}
    for x_bits in range(1 << n):
        for z_bits in range(1 << n):
            p = Pauli(n, 0, x_bits, z_bits).phase_free()
            conj = u.conjugate_pauli(p)
            key = conj.fingerprint()
            if key not in memo:
                memo[key] = is_c3_dense(conj)
            if not memo[key]:
                logger.debug(f"conjugate of {p} is outside C3")
                return False
    return True


# G applies the four CCZ gates, then the three controlled swaps on control 7
GOTTESMAN_MOCHON_G = """
CCZ 3 5 6
CCZ 2 4 6
CCZ 1 4 5
CCZ 1 2 3
CSWAP 7 4 3
CSWAP 7 2 5
CSWAP 7 1 6
"""

# F in application order
GOTTESMAN_MOCHON_F = """
H 7
CNOT 3 4
CNOT 5 2
CNOT 6 1
H 6
H 5
H 3
"""


def verify_gottesman_mochon() -> GottesmanMochonCertificate:
    """
    Check that G is in C3, that G^-1 X_7 G is not Clifford, and that F G F^-1 = U_3.

    Raises:
        VerificationFailedError: naming the first failing clause
    """
    g = build(GOTTESMAN_MOCHON_G, 7)
    f = build(GOTTESMAN_MOCHON_F, 7)

    g_in_c3 = is_c3_dense(g)
    if not g_in_c3:
        raise VerificationFailedError("a", "G is not in C3")
    logger.info("clause a: G is in C3")

    conjugate = g.dagger().conjugate_pauli(Pauli.x(7, 7))
    not_clifford = not is_clifford(conjugate)
    if not not_clifford:
        raise VerificationFailedError("b", "G^-1 X_7 G is Clifford")
    logger.info("clause b: G^-1 X_7 G is not Clifford")

    u3 = DenseUnitary.from_perm(circuit_to_perm(uk_circuit(3), 7))
    equal = f.conjugate(g) == u3
    if not equal:
        raise VerificationFailedError("c", "F G F^-1 differs from U_3")
    logger.info("clause c: F G F^-1 = U_3")

    return GottesmanMochonCertificate(
        g_in_c3=g_in_c3,
        conjugate_x7_not_clifford=not_clifford,
        fgf_inverse_equals_u3=equal,
    )
