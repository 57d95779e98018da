"""Rank discretisation of real-valued series onto equally populated bins."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

MIN_BITS, MAX_BITS = 1, 16


@dataclass(frozen=True)
class RealSeries:
    """Time-ordered real observations, optionally timestamped."""

    values: np.ndarray
    timestamps: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size == 0:
            raise ValueError("series is empty")
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            raise ValueError(f"non-finite value at index {bad[0]}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.timestamps is not None:
            t = np.asarray(self.timestamps, dtype=float).ravel()
            if t.size != v.size:
                raise ValueError("timestamps and values differ in length")
            if np.any(np.diff(t) <= 0):
                raise ValueError("timestamps must be strictly increasing")
            object.__setattr__(self, "timestamps", t)

    def __len__(self):
        return self.values.size


def as_real_series(s) -> RealSeries:
    return s if isinstance(s, RealSeries) else RealSeries(s)


@dataclass(frozen=True)
class SymbolSeries:
    """Symbols in ``{0, ..., 2**resolution_bits - 1}``."""

    symbols: np.ndarray
    resolution_bits: int = 8

    def __post_init__(self):
        if not MIN_BITS <= self.resolution_bits <= MAX_BITS:
            raise ValueError(f"resolution_bits must lie in [{MIN_BITS}, {MAX_BITS}]")
        s = np.asarray(self.symbols)
        if s.size and (s.min() < 0 or s.max() >= 1 << self.resolution_bits):
            raise ValueError(f"symbols outside [0, 2**{self.resolution_bits})")
        s = s.astype(self.dtype, copy=False).ravel()
        s.setflags(write=False)
        object.__setattr__(self, "symbols", s)

    @property
    def dtype(self):
        return np.uint8 if self.resolution_bits <= 8 else np.dtype("<u2")

    def __len__(self):
        return self.symbols.size

    def to_bytes(self) -> bytes:
        """One byte per symbol, or two little-endian bytes when ``b > 8``."""
        return self.symbols.astype(self.dtype, copy=False).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, resolution_bits: int = 8) -> "SymbolSeries":
        dtype = np.uint8 if resolution_bits <= 8 else np.dtype("<u2")
        return cls(np.frombuffer(data, dtype=dtype), resolution_bits)

    def with_symbols(self, symbols) -> "SymbolSeries":
        return SymbolSeries(symbols, self.resolution_bits)


def empirical_cdf(s, x: float) -> float:
    """Fraction of observations that are ``<= x``."""
    v = as_real_series(s).values
    return float(np.count_nonzero(v <= x)) / v.size


def stable_ranks(values) -> np.ndarray:
    """0-based ascending ranks; ties are ordered by time of occurrence."""
    v = np.asarray(values)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.size, dtype=np.int64)
    ranks[order] = np.arange(v.size)
    return ranks


def discretize(s, bits: int = 8) -> SymbolSeries:
    """Map each observation to its rank bin ``floor(2**b * (rank - 1) / n)``.

    This agrees with ``floor(2**b * F(x))`` for distinct values (with the top
    value clamped into the last bin) and keeps the bins equally populated
    when there are ties.
    """
    if not MIN_BITS <= bits <= MAX_BITS:
        raise ValueError(f"bits must lie in [{MIN_BITS}, {MAX_BITS}], got {bits}")
    v = as_real_series(s).values
    n = v.size
    if n < 1 << bits:
        warnings.warn(f"only {n} observations for {1 << bits} bins; occupancy will be uneven",
                      stacklevel=2)
    sym = (stable_ranks(v) << bits) // n
    return SymbolSeries(sym, bits)


def rank_plot_data(sym: SymbolSeries) -> list[tuple[int, int]]:
    """(time index, state) pairs for an external rank plot."""
    return list(enumerate(int(x) for x in sym.symbols))


def log_returns(prices) -> np.ndarray:
    p = np.asarray(prices, dtype=float)
    if np.any(p <= 0):
        raise ValueError(f"non-positive price at index {int(np.flatnonzero(p <= 0)[0])}")
    return np.diff(np.log(p))
