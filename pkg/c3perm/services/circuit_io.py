"""
Text formats for circuits and multiplication tables.

Circuits: one gate per line in application order, 1-based qubits, e.g.
``TOF 1 2 3``, ``CNOT 1 2``, ``X 3``, ``MCX 1 2 3 4`` (controls then target),
``CCZ 1 2 3``, ``CSWAP 7 1 6``, ``H 1``; ``#`` starts a comment.

Multiplication tables: lines ``e i j = k1 k2 ...`` listing the components of
e_i e_j; an empty right-hand side is the zero product.
"""

import logging
import sys
from typing import Dict, List, Optional, Sequence, Tuple, Union

from c3perm.core.constants import PERMUTATION_GATES
from c3perm.core.exceptions import C3PermError, CircuitParseError, UnknownGateError
from c3perm.models.circuit import Gate, MultiControlledX, Toffoli, ToffoliCircuit
from c3perm.services.descmult import DescMult
from c3perm.services.f2core import bit, iter_support

logger = logging.getLogger(__name__)

CIRCUIT_HEADER = "# application order: the first gate listed acts first; qubits are 1-based"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_circuit(text: str) -> List[Gate]:
    """
    Parse circuit text into gates in application order.

    Raises:
        CircuitParseError: with the 1-based line number and the reason
    """
    gates = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        name, *args = line.split()
        try:
            qubits = tuple(int(a) for a in args)
        except ValueError:
            raise CircuitParseError(line_no, f"qubit indices must be integers: {line!r}")
        try:
            gates.append(Gate(name, qubits))
        except C3PermError as exc:
            raise CircuitParseError(line_no, str(exc)) from exc
    logger.debug(f"parsed {len(gates)} gates")
    return gates


def to_toffoli_circuit(gates: Sequence[Gate]) -> ToffoliCircuit:
    """Keep a gate list that consists of Toffoli gates only."""
    toffolis = []
    for gate in gates:
        if gate.name != "TOF":
            raise UnknownGateError(f"{gate.name} is not a Toffoli gate")
        toffolis.append(Toffoli(*gate.qubits))
    return ToffoliCircuit(tuple(toffolis))


def check_permutation_gates(gates: Sequence[Gate]) -> None:
    for gate in gates:
        if gate.name not in PERMUTATION_GATES:
            raise UnknownGateError(f"{gate.name} is not allowed in a permutation circuit")


def format_circuit(
    gates: Sequence[Union[Gate, Toffoli, MultiControlledX]],
    header: bool = True,
) -> str:
    lines = [CIRCUIT_HEADER] if header else []
    lines.extend(str(g) for g in gates)
    return "\n".join(lines) + "\n"


def parse_mult_table(text: str, n: Optional[int] = None) -> DescMult:
    """
    Parse ``e i j = k1 k2 ...`` lines into a descending multiplication.

    Args:
        text: table text
        n: dimension, default the largest index mentioned

    Raises:
        CircuitParseError: malformed line
        PreconditionViolatedError: the table is not descending
    """
    entries: Dict[Tuple[int, int], List[int]] = {}
    largest, largest_line = 0, 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        left, sep, right = line.partition("=")
        head = left.split()
        if not sep or len(head) != 3 or head[0] != "e":
            raise CircuitParseError(line_no, f"expected 'e i j = k1 k2 ...', got {line!r}")
        try:
            i, j = int(head[1]), int(head[2])
            ks = [int(k) for k in right.split()]
        except ValueError:
            raise CircuitParseError(line_no, f"indices must be integers: {line!r}")
        if i == j or min([i, j, *ks]) < 1:
            raise CircuitParseError(line_no, "indices must be positive and i != j")
        key = (min(i, j), max(i, j))
        if key in entries:
            raise CircuitParseError(line_no, f"product e{key[0]} e{key[1]} given twice")
        entries[key] = ks
        if max(i, j, *ks) > largest:
            largest, largest_line = max(i, j, *ks), line_no
    n = n if n is not None else max(largest, 1)
    if largest > n:
        raise CircuitParseError(largest_line, f"index {largest} exceeds n = {n}")
    products = {}
    for key, ks in entries.items():
        vec = 0
        for k in ks:
            vec ^= bit(n, k)
        products[key] = vec
    return DescMult.from_pairs(n, products)


def format_mult_table(m: DescMult) -> str:
    lines = [f"# descending multiplication on {m.n} qubits; unlisted products are zero"]
    for (i, j), prod in sorted(m.pairs().items()):
        ks = " ".join(str(k) for k in iter_support(m.n, prod))
        lines.append(f"e {i} {j} = {ks}")
    return "\n".join(lines) + "\n"


def read_text(path: str) -> str:
    """Read a file, or standard input for '-'."""
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()
