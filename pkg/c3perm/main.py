"""
Command-line front end emitting JSON certificates.
"""

import argparse
import json
import logging
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

from c3perm.core.config import settings
from c3perm.core.constants import (
    CLAIMS,
    EXIT_USAGE_ERROR,
    EXIT_VERDICT_FALSE,
    EXIT_VERDICT_TRUE,
    WITNESS_QUBITS,
)
from c3perm.core.exceptions import (
    C3PermError,
    NotInC3Error,
    NotStaircaseC3Error,
    NotStaircaseError,
    TooLargeError,
    VerificationFailedError,
)
from c3perm.models.permutation import PermGate
from c3perm.schemas.certificate import Certificate
from c3perm.services.anf import perm_coords
from c3perm.services.circuit_io import (
    check_permutation_gates,
    format_circuit,
    format_mult_table,
    parse_circuit,
    parse_mult_table,
    read_text,
    to_toffoli_circuit,
)
from c3perm.services.descmult import (
    DescMult,
    from_staircase,
    is_associative,
    max_nonzero_product_size,
    nonzero_triple,
    perm_to_mult,
)
from c3perm.services.densesim import verify_gottesman_mochon
from c3perm.services.f2core import iter_support
from c3perm.services.family import uk_circuit, verify_uk
from c3perm.services.hierarchy import (
    is_c3_perm,
    is_semi_clifford_perm,
    reduce_to_staircase,
    refute_level,
)
from c3perm.services.permgate import AffineMap, circuit_to_perm, staircase_conditions, to_staircase
from c3perm.services.search import find_witness, survey

logger = logging.getLogger(__name__)

Outcome = Tuple[Dict[str, Any], bool, Dict[str, Any]]


def _affine_evidence(phi: AffineMap) -> Dict[str, Any]:
    return {"matrix": phi.M.to_lists(), "shift": phi.w.components()}


def _gates(circuit) -> List[str]:
    return [str(g) for g in circuit]


def _load_perm(args: argparse.Namespace) -> Tuple[PermGate, Dict[str, Any]]:
    """Permutation from --table or from a permutation circuit given by --circuit."""
    if args.table:
        values = [int(v) for v in args.table.replace(",", " ").split()]
        return PermGate(values), {"table": values}
    if not args.circuit:
        raise C3PermError("one of --circuit or --table is required")
    text = read_text(args.circuit)
    gates = parse_circuit(text)
    check_permutation_gates(gates)
    n = args.qubits or max((max(g.qubits) for g in gates), default=1)
    return circuit_to_perm(gates, n), {"circuit": _gates(gates), "n": n}


def _mult_evidence(m: DescMult) -> Dict[str, Any]:
    check = is_associative(m)
    evidence: Dict[str, Any] = {
        "products": {f"{i} {j}": list(iter_support(m.n, p)) for (i, j), p in sorted(m.pairs().items())},
        "associative": check.ok,
        "associativity_witness": list(check.witness) if check.witness else None,
        "max_nonzero_product_size": max_nonzero_product_size(m),
        "table_text": format_mult_table(m),
    }
    if check:
        triple = nonzero_triple(m)
        evidence["all_triples_zero"] = triple is None
        evidence["nonzero_triple"] = list(triple) if triple else None
    return evidence


def cmd_poly(args: argparse.Namespace) -> Outcome:
    pi, inputs = _load_perm(args)
    coords = perm_coords(pi)
    inverse = perm_coords(pi.inverse())
    evidence = {
        "coordinates": coords.render(),
        "degrees": [str(d) for d in coords.degrees()],
        "inverse_coordinates": inverse.render(),
        "inverse_degrees": [str(d) for d in inverse.degrees()],
    }
    return inputs, True, evidence


def cmd_staircase(args: argparse.Namespace) -> Outcome:
    pi, inputs = _load_perm(args)
    evidence: Dict[str, Any] = {"staircase_conditions": staircase_conditions(pi)}
    try:
        mu = to_staircase(pi)
    except NotStaircaseError as exc:
        evidence.update(reason=exc.reason, coordinate=exc.coordinate, term=exc.term)
        return inputs, False, evidence
    evidence["gates"] = _gates(mu)
    return inputs, True, evidence


def cmd_reduce(args: argparse.Namespace) -> Outcome:
    pi, inputs = _load_perm(args)
    try:
        result = reduce_to_staircase(pi)
    except NotInC3Error as exc:
        return inputs, False, {"in_c3": False, "witness": exc.witness}
    mult = from_staircase(result.mu, pi.n)
    evidence = {
        "in_c3": True,
        "phi1": _affine_evidence(result.phi1),
        "mu": _gates(result.mu),
        "phi2": _affine_evidence(result.phi2),
        "recomposes": result.recompose() == pi,
        "mu_associative": is_associative(mult).ok,
    }
    return inputs, True, evidence


def cmd_mult(args: argparse.Namespace) -> Outcome:
    if args.mult:
        text = read_text(args.mult)
        m = parse_mult_table(text, args.qubits)
        inputs: Dict[str, Any] = {"mult": text, "n": m.n}
    elif args.circuit and not args.table:
        text = read_text(args.circuit)
        circuit = to_toffoli_circuit(parse_circuit(text))
        m = from_staircase(circuit, args.qubits)
        inputs = {"circuit": _gates(circuit), "n": m.n}
    else:
        pi, inputs = _load_perm(args)
        try:
            m = perm_to_mult(pi)
        except NotStaircaseC3Error as exc:
            return inputs, False, {"reason": str(exc)}
    evidence = _mult_evidence(m)
    return inputs, evidence["associative"], evidence


def cmd_uk(args: argparse.Namespace) -> Outcome:
    cert = verify_uk(args.k)
    if args.circuit_out:
        with open(args.circuit_out, "w", encoding="utf-8") as handle:
            handle.write(format_circuit(uk_circuit(args.k).gates))
        logger.info(f"wrote U_{args.k} circuit to {args.circuit_out}")
    return {"k": args.k}, cert.verdict, cert.model_dump()


def cmd_survey(args: argparse.Namespace) -> Outcome:
    report = survey(
        args.qubits,
        shards=args.shards,
        workers=args.workers,
        checkpoint=args.checkpoint,
        sample=args.sample,
        seed=args.seed,
        progress=args.progress,
    )
    inputs = {"n": args.qubits, "shards": report.shard_count, "sample": args.sample, "seed": report.seed}
    return inputs, report.non_sc_c3 == 0, report.model_dump()


def cmd_verify_gm(args: argparse.Namespace) -> Outcome:
    try:
        cert = verify_gottesman_mochon()
    except VerificationFailedError as exc:
        return {}, False, {"failed_clause": exc.clause, "detail": exc.detail}
    return {}, cert.verdict, cert.model_dump()


def cmd_classify(args: argparse.Namespace) -> Outcome:
    pi, inputs = _load_perm(args)
    check = is_c3_perm(pi)
    evidence: Dict[str, Any] = {
        "in_c3": check.ok,
        "witness": check.witness,
        "reason": check.reason,
        "refuted_at": refute_level(pi),
    }
    if check:
        try:
            evidence["semi_clifford"] = is_semi_clifford_perm(pi)
        except TooLargeError as exc:
            logger.warning(f"semi-Clifford decision skipped: {exc}")
    return inputs, check.ok, evidence


def cmd_witness(args: argparse.Namespace) -> Outcome:
    n = args.qubits or WITNESS_QUBITS
    circuit = find_witness(n, workers=args.workers)
    if circuit is None:
        return {"n": n}, False, {"circuit": None}
    m = from_staircase(circuit, n)
    width = circuit.max_qubit
    pi = circuit_to_perm(circuit, width)
    evidence = {
        "circuit": _gates(circuit),
        "nonzero_triple": list(nonzero_triple(m) or []),
        "associative": is_associative(m).ok,
        "in_c3": is_c3_perm(pi).ok,
        "inverse_refuted_at": refute_level(pi.inverse()),
    }
    return {"n": n}, True, evidence


COMMANDS: Dict[str, Callable[[argparse.Namespace], Outcome]] = {
    'poly': cmd_poly,
    'staircase': cmd_staircase,
    'reduce': cmd_reduce,
    'mult': cmd_mult,
    'uk': cmd_uk,
    'survey': cmd_survey,
    'verify-gm': cmd_verify_gm,
    'classify': cmd_classify,
    'witness': cmd_witness,
}


def _add_perm_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--circuit', help="Circuit file, '-' for standard input")
    parser.add_argument('--table', help='Truth table as comma or space separated integers')
    parser.add_argument('-n', '--qubits', type=int, help='Number of qubits (default: largest index used)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='c3perm',
        description='Certificates for permutation gates in the third level of the Clifford hierarchy',
    )
    parser.add_argument('--pretty', action='store_true', help='Indent the JSON output')
    parser.add_argument(
        '--log-level',
        type=str.upper,
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
        help='Logging level (default: settings.LOG_LEVEL)',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    for name, text in [
        ('poly', 'Polynomial representation of a permutation and its inverse'),
        ('staircase', 'Staircase form of a permutation'),
        ('reduce', 'Write a C3 permutation as Clifford, staircase, Clifford'),
        ('classify', 'C3 membership with a witness generator'),
    ]:
        _add_perm_input(sub.add_parser(name, help=text))

    mult = sub.add_parser('mult', help='Descending multiplication of a staircase circuit or table')
    _add_perm_input(mult)
    mult.add_argument('--mult', help="Multiplication table file ('e i j = k1 k2 ...' lines)")

    uk = sub.add_parser('uk', help='Certify U_k in C3 with inverse outside C_k')
    uk.add_argument('k', type=int, help='Family index, 3 to 5')
    uk.add_argument('--circuit-out', help='Write the U_k circuit to this file')

    surv = sub.add_parser('survey', help='Classify all staircase circuits on n qubits')
    surv.add_argument('-n', '--qubits', type=int, required=True, help='Number of qubits, 3 to 7')
    surv.add_argument('--shards', type=int, default=None, help='Power-of-two shard count')
    surv.add_argument('--workers', type=int, default=None, help='Parallel workers (-1: all cores)')
    surv.add_argument('--checkpoint', help='Checkpoint file to resume from and update')
    surv.add_argument('--sample', type=int, default=None, help='Classify this many random circuits')
    surv.add_argument('--seed', type=int, default=None, help='Random seed for --sample')
    surv.add_argument('--progress', action='store_true', help='Show a progress bar on stderr')

    sub.add_parser('verify-gm', help='Check the Gottesman-Mochon gate against U_3')

    wit = sub.add_parser('witness', help='Non-semi-Clifford staircase C3 circuit on n qubits')
    wit.add_argument('-n', '--qubits', type=int, default=None, help=f'Number of qubits (default {WITNESS_QUBITS})')
    wit.add_argument('--workers', type=int, default=None, help='Parallel workers for the scan')
    return parser


def _echo_args(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {'command', 'pretty', 'log_level', 'progress', 'workers'}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and print its certificate.

    Returns:
        int: 0 for a true verdict, 1 for a false one, 2 on usage or input errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VERDICT_TRUE if exc.code == 0 else EXIT_USAGE_ERROR

    logging.basicConfig(
        level=args.log_level or settings.LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    started = time.perf_counter()
    try:
        inputs, verdict, evidence = COMMANDS[args.command](args)
    except (C3PermError, OSError, ValueError) as exc:
        print(f"c3perm {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE_ERROR

    cert = Certificate(
        claim=CLAIMS[args.command],
        inputs={**_echo_args(args), **inputs},
        verdict=verdict,
        evidence=evidence,
        wall_time=time.perf_counter() - started,
    )
    print(json.dumps(cert.model_dump(), indent=2 if args.pretty else None, default=str))
    return EXIT_VERDICT_TRUE if verdict else EXIT_VERDICT_FALSE


def main():
    """Console entry point."""
    sys.exit(run())


if __name__ == '__main__':
    main()
