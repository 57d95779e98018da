"""Block-shuffle resampling and the compression-based independence test.

Shuffling a series in blocks of ``k`` destroys dependence between blocks
while keeping it within them. Comparing compression of block-shuffled and
fully shuffled copies tests whether any ``k`` consecutive observations are
dependent; sweeping ``k`` yields the serial dependence function.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .compressor import CalibrationTable, CompressionEstimate, compress_size, estimate, estimate_from_size
from .discretize import SymbolSeries, as_real_series, discretize

QUANTILE_LEVELS = (0.0, 0.25, 0.75, 1.0)


def rep_rng(seed: int, rep: int, arm: int = 0) -> np.random.Generator:
    """Independent stream for repetition ``rep``, derived only from the seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep, arm)))


@dataclass(frozen=True)
class ShufflePlan:
    block_size: int
    repetitions: int
    seed: int
    resolution_bits: int = 8
    phase: int = 0

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError("block size must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.phase < 0:
            raise ValueError("phase must be >= 0")

    def check(self, n: int) -> None:
        if self.block_size > n - self.phase:
            raise ValueError(f"block size {self.block_size} exceeds series length {n - self.phase}")


def block_shuffle(sym: SymbolSeries, k: int, rng: np.random.Generator | None = None,
                  order=None, phase: int = 0) -> SymbolSeries:
    """Reorder consecutive length-``k`` blocks.

    Blocks start at ``phase``; leading symbols before it and the trailing
    ``(n - phase) % k`` symbols are dropped. Either pass ``rng`` to draw a
    uniform block permutation or ``order`` to apply a given one (0-based).
    """
    n = len(sym) - phase
    if not 1 <= k <= n:
        raise ValueError(f"block size must lie in [1, {n}], got {k}")
    n_blocks = n // k
    blocks = sym.symbols[phase:phase + n_blocks * k].reshape(n_blocks, k)
    if order is None:
        if rng is None:
            raise ValueError("need an rng or an explicit order")
        order = rng.permutation(n_blocks)
    else:
        order = np.asarray(order)
        if sorted(order.tolist()) != list(range(n_blocks)):
            raise ValueError("order is not a permutation of the block indices")
    return sym.with_symbols(blocks[order].ravel())


def _cr_of(sym: SymbolSeries, table: CalibrationTable) -> float:
    raw = sym.to_bytes()
    size = compress_size(raw, table.codec)
    return estimate_from_size(len(sym), sym.resolution_bits, len(raw), size, table).corrected_cr


def _map(fn, items, threads):
    if threads == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ShuffleDistribution:
    block_size: int
    crs: np.ndarray

    @property
    def mean(self) -> float:
        return float(self.crs.mean())

    @property
    def sd(self) -> float:
        return float(self.crs.std(ddof=1)) if self.crs.size > 1 else 0.0

    def quantile(self, q) -> np.ndarray | float:
        return np.quantile(self.crs, q)

    def summary(self) -> dict:
        q = self.quantile([0.0, 0.25, 0.75, 1.0])
        return {"min": float(q[0]), "q25": float(q[1]), "mean": self.mean,
                "q75": float(q[2]), "max": float(q[3])}


def shuffle_distribution(sym: SymbolSeries, plan: ShufflePlan, table: CalibrationTable,
                         threads: int | None = None) -> ShuffleDistribution:
    """Corrected compression ratio of ``plan.repetitions`` block shuffles."""
    plan.check(len(sym))

    def one(rep):
        shuffled = block_shuffle(sym, plan.block_size, rep_rng(plan.seed, rep), phase=plan.phase)
        return _cr_of(shuffled, table)

    crs = np.array(_map(one, range(plan.repetitions), threads))
    return ShuffleDistribution(plan.block_size, crs)


def order_statistic_quantile(sample, alpha: float) -> float:
    """The ``ceil(alpha * m)``-th smallest value (1-based)."""
    x = np.sort(np.asarray(sample))
    j = max(1, math.ceil(alpha * x.size - 1e-9))
    return float(x[j - 1])


@dataclass(frozen=True)
class DependenceTestResult:
    k: int
    m: int
    alpha: float
    resolution_bits: int
    block_crs: np.ndarray
    full_crs: np.ndarray
    unshuffled: CompressionEstimate

    @property
    def differences(self) -> np.ndarray:
        return self.block_crs - self.full_crs

    def Q(self, level: float) -> float:
        return order_statistic_quantile(self.differences, level)

    @property
    def q_alpha(self) -> float:
        return self.Q(self.alpha)

    @property
    def reject(self) -> bool:
        return self.q_alpha > 0

    @property
    def p_value(self) -> float:
        d = self.differences
        return (np.count_nonzero(d <= 0) + 1) / (d.size + 1)

    def to_json(self) -> dict:
        d = self.differences
        return {
            "k": self.k,
            "m": self.m,
            "alpha": self.alpha,
            "resolution_bits": self.resolution_bits,
            "q_alpha": self.q_alpha,
            "decision": "reject" if self.reject else "fail-to-reject",
            "p_value": self.p_value,
            "difference_quantiles": dict(zip(("q00", "q25", "q50", "q75", "q100"),
                                             map(float, np.quantile(d, [0, .25, .5, .75, 1])))),
            "unshuffled_cr": self.unshuffled.corrected_cr,
            "unshuffled_entropy_rate_bits": self.unshuffled.entropy_rate_bits,
            "block_crs": self.block_crs.tolist(),
            "full_crs": self.full_crs.tolist(),
            "differences": d.tolist(),
        }


def _symbols(s, bits: int) -> SymbolSeries:
    if isinstance(s, SymbolSeries):
        return s
    return discretize(as_real_series(s), bits)


def independence_test(s, k: int, m: int, alpha: float, bits: int, table: CalibrationTable,
                      seed: int, phase: int = 0, threads: int | None = None) -> DependenceTestResult:
    """Test whether every ``k`` consecutive observations are jointly independent.

    Each repetition compresses a size-``k`` block shuffle and a full shuffle of
    the discretised series and records the difference in corrected
    compression ratio. Both arms use the same truncated length. The null is
    rejected when the empirical ``alpha``-quantile of the differences is
    positive. ``s`` may already be a :class:`SymbolSeries`.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if m < math.ceil(1 / alpha - 1e-9):
        raise ValueError(f"m={m} is too small to estimate the {alpha} quantile; need m >= {math.ceil(1 / alpha)}")
    sym = _symbols(s, bits)
    n = len(sym) - phase
    if not 2 <= k <= n:
        raise ValueError(f"k must lie in [2, {n}], got {k}")
    used = (n // k) * k

    def one(rep):
        blocked = block_shuffle(sym, k, rep_rng(seed, rep, 0), phase=phase)
        perm = rep_rng(seed, rep, 1).permutation(len(sym))[:used]
        full = sym.with_symbols(sym.symbols[perm])
        return _cr_of(blocked, table), _cr_of(full, table)

    pairs = np.array(_map(one, range(m), threads))
    return DependenceTestResult(k, m, alpha, sym.resolution_bits, pairs[:, 0], pairs[:, 1],
                                estimate(sym, table))


@dataclass(frozen=True)
class SerialDependenceCurve:
    block_sizes: tuple[int, ...]
    distributions: tuple[ShuffleDistribution, ...]
    unshuffled: CompressionEstimate

    @property
    def mean_cr(self) -> np.ndarray:
        return np.array([d.mean for d in self.distributions])

    @property
    def sd(self) -> np.ndarray:
        return np.array([d.sd for d in self.distributions])

    def quantiles(self, levels=QUANTILE_LEVELS) -> np.ndarray:
        """Array of shape ``(len(block_sizes), len(levels))``."""
        return np.array([d.quantile(list(levels)) for d in self.distributions])

    @property
    def sdf(self) -> np.ndarray:
        """Increase in mean corrected CR between adjacent block sizes."""
        return np.diff(self.mean_cr)

    def sdf_bands(self, levels=QUANTILE_LEVELS) -> np.ndarray:
        # Differenced quantiles; exact only for pure location shifts.
        return np.diff(self.quantiles(levels), axis=0)

    @property
    def gaps(self) -> np.ndarray:
        return self.unshuffled.corrected_cr - self.mean_cr

    def rows(self) -> list[dict]:
        q = self.quantiles()
        inc = np.concatenate([[np.nan], self.sdf])
        return [
            {"block_size": b, "mean_cr": float(mu), "q00": float(r[0]), "q25": float(r[1]),
             "q75": float(r[2]), "q100": float(r[3]), "sdf_increment": float(d), "gap": float(g)}
            for b, mu, r, d, g in zip(self.block_sizes, self.mean_cr, q, inc, self.gaps)
        ]


def serial_dependence_curve(s, block_sizes, m: int, bits: int, table: CalibrationTable,
                            seed: int, phase: int = 0, threads: int | None = None) -> SerialDependenceCurve:
    sizes = tuple(int(b) for b in block_sizes)
    if not sizes or sizes[0] < 1 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("block sizes must be strictly increasing and start at >= 1")
    sym = _symbols(s, bits)
    if sizes[-1] > len(sym) - phase:
        raise ValueError(f"largest block size {sizes[-1]} exceeds series length")
    dists = tuple(
        shuffle_distribution(sym, ShufflePlan(b, m, seed, sym.resolution_bits, phase), table, threads)
        for b in sizes
    )
    return SerialDependenceCurve(sizes, dists, estimate(sym, table))


def select_lag(curve, tolerance: float) -> int | None:
    """Smallest block size whose compression-ratio gap is within ``tolerance``."""
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    for b, g in zip(curve.block_sizes, curve.gaps):
        if g <= tolerance:
            return int(b)
    return None


def autocorrelation(s, max_lag: int) -> np.ndarray:
    """Sample ACF at lags ``0..max_lag`` using the full-sample mean and variance."""
    x = as_real_series(s).values
    n = x.size
    if not 1 <= max_lag < n:
        raise ValueError(f"max_lag must lie in [1, {n - 1}]")
    d = x - x.mean()
    denom = d @ d
    if denom == 0:
        raise ValueError("series has zero variance")
    return np.array([1.0] + [(d[:-lag] @ d[lag:]) / denom for lag in range(1, max_lag + 1)])
