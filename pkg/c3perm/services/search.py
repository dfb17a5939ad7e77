"""
Survey service over staircase Toffoli circuits.

A staircase circuit on n qubits is a subset of the C(n, 3) triples i < j < k.
Triples are ordered by (k, i, j) and bit t of a mask selects triple t, so the
gates of a mask come out in canonical order. A shard is the set of masks that
share a fixed prefix of high bits; shard counts are therefore powers of two.
"""

import logging
import math
import os
import struct
import time
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from c3perm.core.config import settings
from c3perm.core.constants import (
    CHECKPOINT_MAGIC,
    CHECKPOINT_VERSION,
    SURVEY_MAX_EXHAUSTIVE_QUBITS,
    SURVEY_MAX_QUBITS,
    SURVEY_MIN_QUBITS,
    WITNESS_QUBITS,
)
from c3perm.core.exceptions import (
    BadShardSpecError,
    CorruptCheckpointError,
    PreconditionViolatedError,
    TooLargeError,
)
from c3perm.models.circuit import ToffoliCircuit
from c3perm.schemas.survey import ShardCounts, SurveyReport
from c3perm.services.descmult import (
    DescMult,
    from_staircase,
    is_associative,
    nonzero_triple,
)
from c3perm.services.f2core import bit
from c3perm.services.family import uk_circuit
from c3perm.services.hierarchy import is_c3_perm, is_semi_clifford_perm
from c3perm.services.permgate import circuit_to_perm

logger = logging.getLogger(__name__)

HEADER = struct.Struct("<4sHBB")
SHARD_RECORD = struct.Struct("<QQQ")


@lru_cache(maxsize=None)
def staircase_triples(n: int) -> Tuple[Tuple[int, int, int], ...]:
    """All triples i < j < k on n qubits, ordered by (k, i, j)."""
    return tuple(
        (i, j, k) for k in range(3, n + 1) for i, j in combinations(range(1, k), 2)
    )


def num_triples(n: int) -> int:
    return math.comb(n, 3)


def _check_survey_n(n: int) -> None:
    if n < SURVEY_MIN_QUBITS:
        raise PreconditionViolatedError("n", f"n >= {SURVEY_MIN_QUBITS}")
    if n > SURVEY_MAX_QUBITS:
        raise TooLargeError(n, SURVEY_MAX_QUBITS, "staircase survey")


def circuit_from_mask(n: int, mask: int) -> ToffoliCircuit:
    triples = staircase_triples(n)
    return ToffoliCircuit.from_triples(
        triples[t] for t in range(len(triples)) if (mask >> t) & 1
    )


def mult_from_mask(n: int, mask: int) -> DescMult:
    """Descending multiplication of the staircase circuit selected by mask."""
    products: Dict[Tuple[int, int], int] = {}
    triples = staircase_triples(n)
    while mask:
        t = (mask & -mask).bit_length() - 1
        i, j, k = triples[t]
        products[(i, j)] = products.get((i, j), 0) | bit(n, k)
        mask &= mask - 1
    return DescMult.from_pairs(n, products)


def enumerate_staircase(n: int) -> Iterator[ToffoliCircuit]:
    """Lazily yield every staircase circuit on n qubits, each exactly once."""
    _check_survey_n(n)
    for mask in range(1 << num_triples(n)):
        yield circuit_from_mask(n, mask)


def classify_mask(n: int, mask: int) -> Tuple[bool, bool]:
    """
    Classify one staircase circuit through its multiplication.

    Returns:
        Tuple[bool, bool]: (in C3, semi-Clifford and in C3)
    """
    m = mult_from_mask(n, mask)
    if not is_associative(m):
        return False, False
    return True, nonzero_triple(m) is None


def classify_mask_slow(n: int, mask: int) -> Tuple[bool, bool]:
    """Same classification from the truth table, without the multiplication shortcut."""
    pi = circuit_to_perm(circuit_from_mask(n, mask), n)
    if not is_c3_perm(pi):
        return False, False
    return True, is_semi_clifford_perm(pi, method="general")


def shard_bits_for(n: int, shards: int) -> int:
    """
    Number of high mask bits that select a shard.

    Raises:
        BadShardSpecError: shards is not a power of two or exceeds the mask space
    """
    if shards < 1 or shards & (shards - 1):
        raise BadShardSpecError(f"shard count must be a power of two, got {shards}")
    bits = shards.bit_length() - 1
    if bits > num_triples(n):
        raise BadShardSpecError(f"{shards} shards exceed the 2^{num_triples(n)} circuits on n = {n}")
    return bits


def shard_range(n: int, shard: int, shard_bits: int) -> range:
    low = num_triples(n) - shard_bits
    return range(shard << low, (shard + 1) << low)


def count_shard(n: int, shard: int, shard_bits: int) -> ShardCounts:
    total = in_c3 = sc = 0
    for mask in shard_range(n, shard, shard_bits):
        member, semi = classify_mask(n, mask)
        total += 1
        in_c3 += member
        sc += semi
    return ShardCounts(shard=shard, total=total, in_c3=in_c3, semi_clifford_c3=sc)


def count_masks(n: int, shard: int, masks: np.ndarray) -> ShardCounts:
    in_c3 = sc = 0
    for mask in masks:
        member, semi = classify_mask(n, int(mask))
        in_c3 += member
        sc += semi
    return ShardCounts(shard=shard, total=len(masks), in_c3=in_c3, semi_clifford_c3=sc)


def save_checkpoint(path: str, n: int, shard_bits: int, done: Dict[int, ShardCounts]) -> None:
    """Write the completed shards atomically: header, shard bitmap, fixed-width counts."""
    shards = 1 << shard_bits
    bitmap = bytearray((shards + 7) // 8)
    records = []
    for s in range(shards):
        counts = done.get(s)
        if counts is not None:
            bitmap[s // 8] |= 1 << (s % 8)
            records.append(SHARD_RECORD.pack(counts.total, counts.in_c3, counts.semi_clifford_c3))
        else:
            records.append(SHARD_RECORD.pack(0, 0, 0))
    payload = HEADER.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, n, shard_bits) + bytes(bitmap)
    payload += b"".join(records)
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as handle:
        handle.write(payload)
    os.replace(tmp, path)


def load_checkpoint(path: str, n: int, shard_bits: int) -> Dict[int, ShardCounts]:
    """
    Read completed shards from a checkpoint, or nothing if the file is absent.

    Raises:
        CorruptCheckpointError: bad magic, version, size or counts, or a file
            written for another n or shard count
    """
    if not os.path.exists(path):
        return {}
    with open(path, "rb") as handle:
        payload = handle.read()
    if len(payload) < HEADER.size:
        raise CorruptCheckpointError(f"{path}: truncated header")
    magic, version, file_n, file_bits = HEADER.unpack_from(payload)
    if magic != CHECKPOINT_MAGIC or version != CHECKPOINT_VERSION:
        raise CorruptCheckpointError(f"{path}: not a version {CHECKPOINT_VERSION} survey checkpoint")
    if (file_n, file_bits) != (n, shard_bits):
        raise CorruptCheckpointError(
            f"{path}: written for n = {file_n} with {1 << file_bits} shards, "
            f"requested n = {n} with {1 << shard_bits}"
        )
    shards = 1 << shard_bits
    bitmap_size = (shards + 7) // 8
    if len(payload) != HEADER.size + bitmap_size + shards * SHARD_RECORD.size:
        raise CorruptCheckpointError(f"{path}: unexpected size {len(payload)}")
    bitmap = payload[HEADER.size: HEADER.size + bitmap_size]
    expected = len(shard_range(n, 0, shard_bits))
    done = {}
    offset = HEADER.size + bitmap_size
    for s in range(shards):
        total, in_c3, sc = SHARD_RECORD.unpack_from(payload, offset + s * SHARD_RECORD.size)
        if not (bitmap[s // 8] >> (s % 8)) & 1:
            continue
        if total != expected or not sc <= in_c3 <= total:
            raise CorruptCheckpointError(f"{path}: inconsistent counts for shard {s}")
        done[s] = ShardCounts(shard=s, total=total, in_c3=in_c3, semi_clifford_c3=sc)
    logger.info(f"resuming from {path}: {len(done)}/{shards} shards done")
    return done


def _report(
    n: int,
    shards: List[ShardCounts],
    population: int,
    started: float,
    sampled: bool = False,
    seed: int = 0,
) -> SurveyReport:
    total = sum(s.total for s in shards)
    in_c3 = sum(s.in_c3 for s in shards)
    sc = sum(s.semi_clifford_c3 for s in shards)
    return SurveyReport(
        n=n,
        total=total,
        in_c3=in_c3,
        semi_clifford_c3=sc,
        non_sc_c3=in_c3 - sc,
        population=population,
        sampled=sampled,
        seed=seed,
        shard_count=len(shards),
        shards=shards,
        elapsed=time.perf_counter() - started,
    )


def survey(
    n: int,
    shards: Optional[int] = None,
    workers: Optional[int] = None,
    checkpoint: Optional[str] = None,
    sample: Optional[int] = None,
    seed: Optional[int] = None,
    progress: bool = False,
) -> SurveyReport:
    """
    Count staircase circuits on n qubits that are in C3, and those also semi-Clifford.

    Args:
        n: number of qubits, 3 <= n <= 6 exhaustively, n = 7 with a sample budget
        shards: power-of-two shard count (settings.SURVEY_SHARDS by default)
        workers: joblib n_jobs (settings.SURVEY_WORKERS by default)
        checkpoint: file recording finished shards; an existing file is resumed
        sample: classify this many uniformly random masks instead of all of them
        seed: random seed for sampling (settings.RANDOM_SEED by default)
        progress: show a tqdm bar over shards on stderr

    Returns:
        SurveyReport: counts aggregated in shard order
    """
    _check_survey_n(n)
    shards = shards if shards is not None else settings.SURVEY_SHARDS
    workers = workers if workers is not None else settings.SURVEY_WORKERS
    triples = num_triples(n)
    population = 1 << triples
    started = time.perf_counter()

    if sample is not None:
        if sample < 1:
            raise PreconditionViolatedError("sample", "sample >= 1")
        if checkpoint is not None:
            raise PreconditionViolatedError("checkpoint", "checkpoints apply to exhaustive surveys")
        seed = seed if seed is not None else settings.RANDOM_SEED
        rng = np.random.default_rng(seed)
        masks = rng.integers(0, population, size=sample, dtype=np.int64)
        chunks = np.array_split(masks, min(shards, sample))
        logger.info(f"sampling {sample} of {population} staircase circuits on n = {n}, seed {seed}")
        jobs = Parallel(n_jobs=workers, return_as="generator")(
            delayed(count_masks)(n, s, chunk) for s, chunk in enumerate(chunks)
        )
        results = list(tqdm(jobs, total=len(chunks), desc="Sampling", disable=not progress))
        return _report(n, results, population, started, sampled=True, seed=seed)

    if n > SURVEY_MAX_EXHAUSTIVE_QUBITS:
        raise TooLargeError(n, SURVEY_MAX_EXHAUSTIVE_QUBITS, "exhaustive survey without --sample")
    shard_bits = shard_bits_for(n, shards)
    done = load_checkpoint(checkpoint, n, shard_bits) if checkpoint else {}
    pending = [s for s in range(shards) if s not in done]
    logger.info(f"surveying {population} staircase circuits on n = {n}: {len(pending)}/{shards} shards pending")

    jobs = Parallel(n_jobs=workers, return_as="generator")(
        delayed(count_shard)(n, s, shard_bits) for s in pending
    )
    for counts in tqdm(jobs, total=len(pending), desc="Surveying", disable=not progress):
        done[counts.shard] = counts
        logger.debug(f"shard {counts.shard}: {counts.total} circuits, {counts.in_c3} in C3")
        if checkpoint:
            save_checkpoint(checkpoint, n, shard_bits, done)

    report = _report(n, [done[s] for s in range(shards)], population, started)
    if report.non_sc_c3:
        logger.warning(f"n = {n}: {report.non_sc_c3} staircase C3 circuits are not semi-Clifford")
    return report


def _scan_shard(n: int, shard: int, shard_bits: int) -> Optional[int]:
    for mask in shard_range(n, shard, shard_bits):
        member, semi = classify_mask(n, mask)
        if member and not semi:
            return mask
    return None


def find_witness(n: int = WITNESS_QUBITS, workers: Optional[int] = None) -> Optional[ToffoliCircuit]:
    """
    Find a staircase circuit in C3 that is not semi-Clifford.

    From seven qubits on, the circuit of U_3 qualifies and is checked before
    any enumeration; it acts on qubits 1..7 and leaves the others idle. Below
    seven qubits every circuit is scanned and None is returned when none
    qualifies.

    Args:
        n: number of qubits
        workers: joblib n_jobs for the scan (settings.SURVEY_WORKERS by default)

    Returns:
        Optional[ToffoliCircuit]: the witness circuit, or None
    """
    if n < SURVEY_MIN_QUBITS:
        return None
    if n >= WITNESS_QUBITS:
        candidate = uk_circuit(3)
        m = from_staircase(candidate, n)
        if is_associative(m) and nonzero_triple(m) is not None:
            logger.info(f"U_3 circuit is a witness on n = {n}")
            return candidate
        logger.warning("U_3 circuit failed the witness check; scanning")
    if n > SURVEY_MAX_QUBITS:
        raise TooLargeError(n, SURVEY_MAX_QUBITS, "witness scan")

    workers = workers if workers is not None else settings.SURVEY_WORKERS
    shard_bits = min(4, num_triples(n))
    jobs = Parallel(n_jobs=workers, return_as="generator")(
        delayed(_scan_shard)(n, s, shard_bits) for s in range(1 << shard_bits)
    )
    for mask in jobs:
        if mask is not None:
            return circuit_from_mask(n, mask)
    logger.info(f"no non-semi-Clifford staircase C3 circuit on n = {n}")
    return None
