"""
Exhaustive f(n) and g(n) searches

f(n) is the largest number of odd terms in the trajectory of a degree-n seed.
The trajectory only depends on the odd core of the seed and every odd core of
degree <= n is the core of some degree-n seed, so f(n) is the maximum over
odd cores of degree 0..n, i.e. max(f(n-1), best odd core of degree n).

g(n) is the longest chain of consecutive odd terms that all keep degree n. The
degree-preserving successor is injective, and b has a predecessor exactly when
b = 1 (mod x^2+x+1), so chains are disjoint paths whose starts can be detected
locally. Both searches split their strata into mask ranges that are processed
independently and merged by (value desc, mask asc).
"""
import logging
import multiprocessing
import os
import random
import time
from collections import Counter
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from app.config import settings
from app.exceptions import (
    CheckpointError,
    DegreeMismatchError,
    InvariantViolationError,
    NotOddError,
    ParameterRangeError,
    SearchInterruptedError,
    ZeroPolynomialError,
)
from app.models.enumeration_models import Constraint, Stratum
from app.models.search_models import (
    ChainCandidate,
    ChainCensus,
    PolyBoundReport,
    PolyBoundRow,
    SearchRecord,
    TargetedChainCheck,
)
from app.services.checkpoint import (
    KIND_F,
    KIND_G,
    CheckpointStore,
    FRangeResult,
    GRangeResult,
    RangeKey,
    RangeResult,
)
from app.services.collatz_service import next_even, next_odd
from app.services.enumeration_service import index_space, odd_mask
from app.services.gf2poly import Poly, _bar, _clmul, _mod_m1, _odd_part
from app.services.reference_tables import published_value

logger = logging.getLogger(__name__)


class TrajectoryMemo:
    """
    Number of odd terms (through the first 1) for odd cores

    Bounded to a power-of-two number of entries; when full, the entries stored
    first are evicted first.
    """

    def __init__(self, capacity: int):
        self.capacity = 1 << (max(capacity, 2) - 1).bit_length()
        self._table: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._table)

    def length(self, core: int) -> int:
        table = self._table
        path = []
        current = core
        while current != 1 and current not in table:
            path.append(current)
            current = next_odd(current)[3]
        m = 1 if current == 1 else table[current]
        for value in reversed(path):
            m += 1
            self._store(value, m)
        return m

    def _store(self, core: int, m: int) -> None:
        table = self._table
        if len(table) >= self.capacity:
            del table[next(iter(table))]
        table[core] = m


_WORKER_MEMO: Optional[TrajectoryMemo] = None


def _memo(capacity: int) -> TrajectoryMemo:
    global _WORKER_MEMO
    if _WORKER_MEMO is None or _WORKER_MEMO.capacity != 1 << (max(capacity, 2) - 1).bit_length():
        _WORKER_MEMO = TrajectoryMemo(capacity)
    return _WORKER_MEMO


def min_realization(core: int, n: int) -> int:
    """Smallest degree-n mask x^a (x+1)^b core, a + b = n - deg(core)"""
    k = n - (core.bit_length() - 1)
    best = None
    for a in range(k + 1):
        mask = _clmul(_bar(1 << (k - a)), core) << a
        if best is None or mask < best:
            best = mask
    return best


def within_degree_next(a: int) -> Optional[int]:
    """Next odd term of an odd a if it keeps the degree of a, else None"""
    even = next_even(a)
    # degree is kept only when both valuations are 1
    if not even & 2:
        return None
    _, _, core = _odd_part(even)
    return core if core.bit_length() == a.bit_length() else None


def _scan_f_range(task: Tuple[int, int, int, int, int]) -> FRangeResult:
    degree, lo, hi, n, memo_capacity = task
    memo = _memo(memo_capacity)
    best_value, best_witness = 0, 0
    examined = 0
    for index in range(lo, hi):
        core = odd_mask(degree, index)
        m = memo.length(core)
        examined += 1
        if m > best_value:
            best_value, best_witness = m, min_realization(core, n)
        elif m == best_value:
            best_witness = min(best_witness, min_realization(core, n))
    return FRangeResult(degree, lo, hi, examined, best_value, best_witness)


def _scan_g_range(task: Tuple[int, int, int]) -> GRangeResult:
    n, lo, hi = task
    histogram: Counter = Counter()
    best_len, best_start = 0, 0
    examined = 0
    self_conjugate = 0
    for index in range(lo, hi):
        start = odd_mask(n, index)
        if _mod_m1(start) == 1:
            continue
        length = 1
        current = within_degree_next(start)
        while current is not None:
            length += 1
            current = within_degree_next(current)
        examined += length
        histogram[length] += 1
        if length > best_len:
            best_len, best_start = length, start
        if _bar(start) == start:
            self_conjugate += 1
    return GRangeResult(n, lo, hi, examined, best_len, best_start, self_conjugate, dict(histogram))


def _better(value: int, witness: int, best_value: int, best_witness: int) -> bool:
    return value > best_value or (value == best_value and witness < best_witness)


class SearchService:
    """
    Runs the f(n) / g(n) searches with optional worker processes and checkpoints

    Results do not depend on the worker count: the range partition depends only
    on n and the partition settings, and the merge is order independent.
    """

    def __init__(self):
        self.config = settings.search
        self.memo = TrajectoryMemo(self.config.memo_capacity)

    # -- single seeds ----------------------------------------------------

    def trajectory_length(self, seed: Poly) -> int:
        if not seed:
            raise ZeroPolynomialError("trajectory_length")
        return self.memo.length(_odd_part(seed.bits)[2])

    def within_degree_successor(self, a: Poly, n: int) -> Optional[Poly]:
        if not a or not a.is_odd():
            raise NotOddError(f"within_degree_successor needs an odd polynomial, got {a}")
        if a.degree != n:
            raise DegreeMismatchError(f"{a} has degree {a.degree}, expected {n}")
        nxt = within_degree_next(a.bits)
        return Poly(nxt) if nxt is not None else None

    def chain_from(self, start: Poly) -> List[Poly]:
        chain = [start]
        current = within_degree_next(start.bits)
        while current is not None:
            chain.append(Poly(current))
            current = within_degree_next(current)
        return chain

    # -- partitioning ----------------------------------------------------

    def _ranges(self, degree: int) -> List[Tuple[int, int]]:
        size = index_space(Stratum(degree=degree, constraint=Constraint.ODD))
        if size == 0:
            return []
        parts = min(1 << self.config.partition_bits, max(1, size >> self.config.min_range_bits))
        return [(size * k // parts, size * (k + 1) // parts) for k in range(parts)]

    def _workers(self, parallelism: Optional[int]) -> int:
        workers = parallelism or self.config.workers
        return max(1, min(workers, os.cpu_count() or 1)) if workers > 1 else 1

    def _execute(
        self,
        worker: Callable,
        tasks: List[tuple],
        keys: List[RangeKey],
        done: Dict[RangeKey, RangeResult],
        store: Optional[CheckpointStore],
        parallelism: Optional[int],
        max_ranges: Optional[int],
    ) -> Dict[RangeKey, RangeResult]:
        pending = [task for task, key in zip(tasks, keys) if key not in done]
        workers = self._workers(parallelism)
        logger.info(f"{len(done)} ranges already complete, {len(pending)} pending, {workers} worker(s)")
        completed = 0

        def accept(result: RangeResult) -> None:
            nonlocal completed
            done[result.key] = result
            if store is not None:
                store.append(result)
            completed += 1
            logger.debug(f"range {result.key} done: value {result.value}")
            if max_ranges is not None and completed >= max_ranges and len(done) < len(keys):
                raise SearchInterruptedError(f"search stopped after {completed} ranges; resume from checkpoint")

        if workers == 1 or len(pending) <= 1:
            for task in pending:
                accept(worker(task))
        else:
            with multiprocessing.Pool(processes=workers) as pool:
                for result in pool.imap_unordered(worker, pending):
                    accept(result)
        return done

    def _open_store(self, kind: int, n: int, checkpoint: Optional[str], resume: bool):
        if checkpoint is None:
            return None, {}
        store = CheckpointStore(checkpoint, kind, n, self.config.partition_bits, self.config.min_range_bits)
        if resume and os.path.exists(checkpoint):
            return store, store.load()
        if resume:
            logger.info(f"No checkpoint at {checkpoint}, starting a fresh search")
        store.start()
        return store, {}

    @staticmethod
    def _check_keys(done: Dict[RangeKey, RangeResult], keys: List[RangeKey]) -> None:
        unknown = set(done) - set(keys)
        if unknown:
            raise CheckpointError(f"checkpoint holds ranges outside this run's partition: {sorted(unknown)[:3]}")

    # -- f(n) ------------------------------------------------------------

    def compute_f(
        self,
        n: int,
        parallelism: Optional[int] = None,
        checkpoint: Optional[str] = None,
        resume: bool = False,
        max_ranges: Optional[int] = None,
    ) -> SearchRecord:
        if not 1 <= n <= self.config.f_ceiling:
            raise ParameterRangeError(f"f(n) is supported for 1 <= n <= {self.config.f_ceiling}, got {n}")
        started = time.perf_counter()
        tasks, keys = [], []
        for degree in range(n + 1):
            for lo, hi in self._ranges(degree):
                tasks.append((degree, lo, hi, n, self.config.memo_capacity))
                keys.append((degree, lo, hi))
        store, done = self._open_store(KIND_F, n, checkpoint, resume)
        self._check_keys(done, keys)
        logger.info(f"Searching f({n}) over {len(keys)} ranges")
        done = self._execute(_scan_f_range, tasks, keys, done, store, parallelism, max_ranges)

        best_value, best_witness, examined = 0, 0, 0
        for key in keys:
            result = done[key]
            examined += result.examined
            if result.examined and _better(result.value, result.witness, best_value, best_witness):
                best_value, best_witness = result.value, result.witness
        record = SearchRecord(
            kind="f",
            n=n,
            value=best_value,
            witness=Poly(best_witness),
            seeds_examined=examined,
            wall_time=time.perf_counter() - started,
            published_value=self._published("f", n),
        )
        logger.info(f"f({n}) = {record.value}, witness {record.witness.to_hex()}, {examined} odd cores")
        return record

    # -- g(n) ------------------------------------------------------------

    def compute_g(
        self,
        n: int,
        parallelism: Optional[int] = None,
        checkpoint: Optional[str] = None,
        resume: bool = False,
        max_ranges: Optional[int] = None,
    ) -> Tuple[SearchRecord, ChainCensus]:
        if not 2 <= n <= self.config.g_ceiling:
            raise ParameterRangeError(f"g(n) is supported for 2 <= n <= {self.config.g_ceiling}, got {n}")
        started = time.perf_counter()
        ranges = self._ranges(n)
        tasks = [(n, lo, hi) for lo, hi in ranges]
        keys = [(n, lo, hi) for lo, hi in ranges]
        store, done = self._open_store(KIND_G, n, checkpoint, resume)
        self._check_keys(done, keys)
        logger.info(f"Searching g({n}) over {len(keys)} ranges")
        done = self._execute(_scan_g_range, tasks, keys, done, store, parallelism, max_ranges)

        histogram: Counter = Counter()
        best_len, best_start, examined, self_conjugate = 0, 0, 0, 0
        for key in keys:
            result = done[key]
            examined += result.examined
            self_conjugate += result.self_conjugate
            histogram.update(result.histogram)
            if result.value and _better(result.value, result.witness, best_len, best_start):
                best_len, best_start = result.value, result.witness

        odd_count = 1 << (n - 2)
        mass = sum(length * count for length, count in histogram.items())
        if mass != odd_count or examined != odd_count:
            raise InvariantViolationError(f"chain census for n={n} covers {mass} polynomials, expected {odd_count}")

        chain_count = sum(histogram.values())
        record = SearchRecord(
            kind="g",
            n=n,
            value=best_len,
            witness=Poly(best_start),
            seeds_examined=examined,
            wall_time=time.perf_counter() - started,
            published_value=self._published("g", n),
        )
        census = ChainCensus(
            n=n,
            chain_count=chain_count,
            max_chain_len=best_len,
            length_histogram=dict(sorted(histogram.items())),
            witness_chain=self.chain_from(Poly(best_start)),
            self_conjugate_chains=self_conjugate,
            conjugation_classes=(chain_count + self_conjugate) // 2,
        )
        logger.info(f"g({n}) = {best_len}, {chain_count} chains, witness {record.witness.to_hex()}")
        return record, census

    # -- bound experiments ---------------------------------------------

    def polybound_report(self, n_max: int, sample: int = 1000) -> PolyBoundReport:
        """
        Compare r_A = m+1 with n(n+1)/2 for every degree 1..n_max

        Degrees up to the exhaustive limit scan every odd core of that degree and
        carry the best lower-degree core along (it is realized at degree n by a
        multiple of x). Higher degrees use ``sample`` random seeds.
        """
        if not 1 <= n_max <= self.config.f_ceiling:
            raise ParameterRangeError(f"n_max must be within 1..{self.config.f_ceiling}, got {n_max}")
        rng = random.Random(self.config.random_seed)
        rows = []
        carried_value, carried_core = 1, 1
        for n in range(1, n_max + 1):
            bound = n * (n + 1) // 2
            if n <= self.config.polybound_exhaustive_limit:
                violating = 0
                checked = 0
                for core in self._odd_cores(n):
                    m = self.memo.length(core)
                    checked += 1
                    if m + 1 > bound:
                        violating += 1
                    if m > carried_value:
                        carried_value, carried_core = m, core
                max_r = carried_value + 1
                witness = min_realization(carried_core, n)
                mode = "exhaustive"
            else:
                violating = 0
                checked = 0
                best_m, witness = 0, 0
                for _ in range(sample):
                    seed = (1 << n) | rng.getrandbits(n)
                    m = self.memo.length(_odd_part(seed)[2])
                    checked += 1
                    if m + 1 > bound:
                        violating += 1
                    if _better(m, seed, best_m, witness):
                        best_m, witness = m, seed
                max_r = best_m + 1
                mode = "sampled"
            rows.append(PolyBoundRow(
                n=n,
                mode=mode,
                seeds_checked=checked,
                max_r_A=max_r,
                witness=Poly(witness),
                bound=bound,
                violation=max_r > bound,
                violating_cores=violating,
                in_regime=n >= 2,
            ))
        violations = sum(1 for row in rows if row.in_regime and row.violation)
        if violations:
            logger.warning(f"{violations} degree(s) exceed n(n+1)/2")
        return PolyBoundReport(n_max=n_max, rows=rows, violations=violations)

    def targeted_chain_check(self, n: int, chain_len: int, target: int, limit: int = 16) -> TargetedChainCheck:
        """
        Scan chain starts of degree n, keep up to ``limit`` whose within-degree
        chain has length ``chain_len`` and record m and r_A = m+1 for each
        """
        if n < 2:
            raise ParameterRangeError("chains need n >= 2")
        candidates: List[ChainCandidate] = []
        scanned = 0
        for core in self._odd_cores(n):
            if _mod_m1(core) == 1:
                continue
            scanned += 1
            length = len(self.chain_from(Poly(core)))
            if length != chain_len:
                continue
            m = self.memo.length(core)
            candidates.append(ChainCandidate(start=Poly(core), chain_len=length, m=m, r_A=m + 1))
            if len(candidates) >= limit:
                break
        return TargetedChainCheck(
            n=n,
            chain_len=chain_len,
            target=target,
            starts_scanned=scanned,
            candidates=candidates,
            matches_m=any(c.m == target for c in candidates),
            matches_r_A=any(c.r_A == target for c in candidates),
        )

    # -- helpers ---------------------------------------------------------

    @staticmethod
    def _odd_cores(degree: int) -> Iterable[int]:
        for index in range(index_space(Stratum(degree=degree, constraint=Constraint.ODD))):
            yield odd_mask(degree, index)

    @staticmethod
    def _published(kind: str, n: int) -> Optional[int]:
        return published_value(kind, n)


# Create singleton instance
search_service = SearchService()
