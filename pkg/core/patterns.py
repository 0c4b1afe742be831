# core/patterns.py

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, TypeVar

import numpy as np

from config import DEFAULT_SETTINGS, Settings
from core.errors import PatternCapExceededError

T = TypeVar("T")


# -----------------------------
# Weaving pattern
# -----------------------------
@dataclass(frozen=True, order=True)
class WeavingPattern:
    """
    sigma as a bitmask over {0..m-1}: bit i set means index i is drawn from
    family V, clear means it is drawn from family W.
    """

    size: int
    mask: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("pattern size must be non-negative")
        if self.mask < 0 or self.mask >> self.size:
            raise ValueError(f"mask {self.mask} has bits outside {{0..{self.size - 1}}}")

    @classmethod
    def full(cls, size: int) -> "WeavingPattern":
        return cls(size, (1 << size) - 1)

    @classmethod
    def empty(cls, size: int) -> "WeavingPattern":
        return cls(size, 0)

    @classmethod
    def from_indices(cls, size: int, v_indices: Sequence[int]) -> "WeavingPattern":
        mask = 0
        for i in v_indices:
            if not 0 <= i < size:
                raise ValueError(f"index {i} outside {{0..{size - 1}}}")
            mask |= 1 << i
        return cls(size, mask)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "WeavingPattern":
        return cls.from_indices(len(bits), [i for i, b in enumerate(bits) if b])

    def takes_v(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def v_indices(self) -> List[int]:
        return [i for i in range(self.size) if self.takes_v(i)]

    def w_indices(self) -> List[int]:
        return [i for i in range(self.size) if not self.takes_v(i)]

    def complement(self) -> "WeavingPattern":
        return WeavingPattern(self.size, ((1 << self.size) - 1) ^ self.mask)

    def bitstring(self) -> str:
        """Index 0 first; '1' = V, '0' = W."""
        return "".join("1" if self.takes_v(i) else "0" for i in range(self.size))

    def to_dict(self) -> dict:
        return {
            "mask": self.mask,
            "bits": self.bitstring(),
            "v_indices": self.v_indices(),
            "w_indices": self.w_indices(),
        }


# -----------------------------
# Pattern sources
# -----------------------------
@dataclass(frozen=True)
class PatternPlan:
    size: int
    sampled: bool
    count: int
    rows: Optional[np.ndarray] = None  # sampled bit rows, sorted and unique

    def chunks(self, chunk_size: int) -> List[np.ndarray]:
        """Bit rows in fixed-size blocks; blocking never depends on the thread count."""
        out = []
        for start in range(0, self.count, chunk_size):
            stop = min(self.count, start + chunk_size)
            if self.sampled:
                out.append(self.rows[start:stop])
            else:
                masks = np.arange(start, stop, dtype=np.int64)
                out.append(((masks[:, None] >> np.arange(self.size, dtype=np.int64)) & 1).astype(np.int8))
        return out

    def patterns(self) -> Iterator[WeavingPattern]:
        if self.sampled:
            for row in self.rows:
                yield WeavingPattern.from_bits(row.tolist())
        else:
            for mask in range(self.count):
                yield WeavingPattern(self.size, mask)


def plan_patterns(size: int, settings: Settings = DEFAULT_SETTINGS) -> PatternPlan:
    if size <= settings.pattern_cap:
        return PatternPlan(size=size, sampled=False, count=1 << size)
    if settings.sample_count is None:
        raise PatternCapExceededError(
            f"{size} indices give 2^{size} patterns, above the exhaustive cap of 2^{settings.pattern_cap}; "
            "enable sampling to refute weaving on random patterns"
        )
    rng = np.random.default_rng(settings.sample_seed)
    rows = rng.integers(0, 2, size=(settings.sample_count, size), dtype=np.int8)
    rows = np.unique(rows, axis=0)
    logging.info(f"sampling {rows.shape[0]} distinct patterns out of 2^{size} (seed {settings.sample_seed})")
    return PatternPlan(size=size, sampled=True, count=rows.shape[0], rows=rows)


def row_mask(row: np.ndarray) -> int:
    mask = 0
    for i in np.flatnonzero(row):
        mask |= 1 << int(i)
    return mask


# -----------------------------
# Map over chunks
# -----------------------------
def map_chunks(fn: Callable[[np.ndarray], T], plan: PatternPlan, settings: Settings = DEFAULT_SETTINGS) -> List[T]:
    """Apply fn to every chunk of bit rows; results come back in pattern order."""
    chunks = plan.chunks(settings.chunk_size)
    workers = min(settings.worker_count(), max(1, len(chunks)))
    logging.debug(f"evaluating {plan.count} patterns in {len(chunks)} chunks on {workers} workers")
    if workers == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


# -----------------------------
# Extremal sweep over S_sigma
# -----------------------------
@dataclass
class Extremum:
    """Best value seen so far with its pattern. Ties prefer the pattern drawing
    the fewest indices from W, then the smallest bitmask."""

    value: float
    w_count: int
    mask: int

    def key(self, maximize: bool):
        return (-self.value if maximize else self.value, self.w_count, self.mask)


def _chunk_extremum(values: np.ndarray, rows: np.ndarray, maximize: bool) -> Extremum:
    best_value = values.max() if maximize else values.min()
    tied = np.flatnonzero(values == best_value)
    candidates = [
        Extremum(float(best_value), int(rows.shape[1] - rows[k].sum()), row_mask(rows[k])) for k in tied
    ]
    return min(candidates, key=lambda e: e.key(maximize))


def _pick(a: Optional[Extremum], b: Extremum, maximize: bool) -> Extremum:
    if a is None:
        return b
    return min(a, b, key=lambda e: e.key(maximize))


@dataclass
class ChunkStats:
    low: Extremum
    high: Extremum
    alpha: float
    table: Optional[List[tuple]] = None


@dataclass
class SweepResult:
    size: int
    sampled: bool
    evaluated: int
    lower: float
    upper: float
    argmin: WeavingPattern
    argmax: WeavingPattern
    alpha: float
    table: Optional[List[dict]] = field(default=None)


def sweep_operators(
    v_ops: np.ndarray,
    w_ops: np.ndarray,
    settings: Settings = DEFAULT_SETTINGS,
    keep_table: bool = False,
) -> SweepResult:
    """
    Extremal eigenvalues of S_sigma = sum_{i in sigma} v_ops[i] + sum_{i not in sigma} w_ops[i]
    over every pattern (or a seeded sample). alpha is the smallest singular value
    of S_sigma minimized over patterns, computed independently of the eigenvalues.
    """
    m, n = v_ops.shape[0], v_ops.shape[1]
    plan = plan_patterns(m, settings)
    a_flat = np.asarray(v_ops, dtype=float).reshape(m, n * n)
    b_flat = np.asarray(w_ops, dtype=float).reshape(m, n * n)

    def evaluate(rows: np.ndarray) -> ChunkStats:
        bits = rows.astype(float)
        s = (bits @ a_flat + (1.0 - bits) @ b_flat).reshape(-1, n, n)
        s = (s + np.swapaxes(s, 1, 2)) / 2.0
        eig = np.linalg.eigvalsh(s)
        sing = np.linalg.svd(s, compute_uv=False)
        lows, highs = eig[:, 0], eig[:, -1]
        table = None
        if keep_table:
            table = [(row_mask(r), float(lo), float(hi)) for r, lo, hi in zip(rows, lows, highs)]
        return ChunkStats(
            low=_chunk_extremum(lows, rows, maximize=False),
            high=_chunk_extremum(highs, rows, maximize=True),
            alpha=float(sing[:, -1].min()),
            table=table,
        )

    low = high = None
    alpha = np.inf
    table = [] if keep_table else None
    for stats in map_chunks(evaluate, plan, settings):
        low = _pick(low, stats.low, maximize=False)
        high = _pick(high, stats.high, maximize=True)
        alpha = min(alpha, stats.alpha)
        if keep_table:
            table.extend(stats.table)

    if keep_table:
        table = [
            {"pattern": WeavingPattern(m, mask).bitstring(), "mask": mask, "lower": max(0.0, lo), "upper": hi}
            for mask, lo, hi in sorted(table)
        ]
    result = SweepResult(
        size=m,
        sampled=plan.sampled,
        evaluated=plan.count,
        lower=max(0.0, low.value),
        upper=max(0.0, high.value),
        argmin=WeavingPattern(m, low.mask),
        argmax=WeavingPattern(m, high.mask),
        alpha=float(alpha),
        table=table,
    )
    logging.info(
        f"swept {result.evaluated} patterns (m={m}, sampled={result.sampled}): "
        f"lower={result.lower:.6g} upper={result.upper:.6g}"
    )
    return result


def map_patterns(fn: Callable[[WeavingPattern], T], size: int, settings: Settings = DEFAULT_SETTINGS) -> List[T]:
    """Apply fn to every pattern (exhaustive or sampled), results in pattern order."""
    plan = plan_patterns(size, settings)

    def run(rows: np.ndarray) -> List[T]:
        return [fn(WeavingPattern.from_bits(r.tolist())) for r in rows]

    out: List[T] = []
    for part in map_chunks(run, plan, settings):
        out.extend(part)
    return out
