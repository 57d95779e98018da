"""LZMA as an entropy-rate estimator, with overhead calibration.

A real codec spends bytes beyond the information content of its input
(headers, the cost of adapting its probability models). That cost is measured
on incompressible input of the same length and subtracted.
"""
from __future__ import annotations

import ctypes
import ctypes.util
import json
import lzma
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .discretize import SymbolSeries

CALIBRATION_SCHEMA = 1
DEFAULT_LENGTHS = (100, 1_000, 10_000, 100_000, 1_000_000)
# "uniform": iid uniform bytes. "ranked": a random permutation of the balanced
# multiset that rank discretisation produces, the exact incompressible
# counterpart of a rank-discretised series.
REFERENCES = ("uniform", "ranked")

_MATCH_FINDERS = {
    "hc3": lzma.MF_HC3, "hc4": lzma.MF_HC4,
    "bt2": lzma.MF_BT2, "bt3": lzma.MF_BT3, "bt4": lzma.MF_BT4,
}


class CodecError(RuntimeError):
    """The underlying compressor failed."""


class CalibrationMismatch(ValueError):
    """A calibration table was produced by a different codec configuration."""


@lru_cache(maxsize=None)
def liblzma_version() -> str:
    name = ctypes.util.find_library("lzma")
    if name:
        try:
            lib = ctypes.CDLL(name)
            lib.lzma_version_string.restype = ctypes.c_char_p
            return lib.lzma_version_string().decode()
        except (OSError, AttributeError):
            pass
    return "unknown"


@dataclass(frozen=True)
class CodecConfig:
    """A fully pinned LZMA configuration.

    The defaults are the maximum preset with the literal coder given the
    largest context liblzma allows (``lc + lp <= 4``) and a match finder that
    hashes 2-byte sequences. ``container="raw"`` omits all headers;
    ``"alone"`` is the legacy ``.lzma`` format and ``"xz"`` the xz container
    (LZMA2, which stores incompressible chunks verbatim).
    """

    codec: str = "lzma"
    preset: int = 9
    extreme: bool = True
    container: str = "raw"
    lc: int = 4
    lp: int = 0
    pb: int = 1
    mf: str = "bt2"
    nice_len: int = 32
    version: str = field(default_factory=liblzma_version)

    def __post_init__(self):
        if self.codec != "lzma":
            raise ValueError(f"unsupported codec {self.codec!r}")
        if self.container not in ("raw", "alone", "xz"):
            raise ValueError(f"unknown container {self.container!r}")
        if not 0 <= self.preset <= 9:
            raise ValueError("preset must be in 0..9")
        if self.mf not in _MATCH_FINDERS:
            raise ValueError(f"unknown match finder {self.mf!r}")

    @property
    def key(self) -> str:
        e = "e" if self.extreme else ""
        return (f"{self.codec}-{self.version}-{self.preset}{e}-{self.container}"
                f"-lc{self.lc}lp{self.lp}pb{self.pb}-{self.mf}-n{self.nice_len}")

    def settings(self) -> dict:
        return asdict(self)

    def filters(self, length: int) -> list[dict]:
        preset = self.preset | (lzma.PRESET_EXTREME if self.extreme else 0)
        # The dictionary never needs to exceed the input; sizing it to the input
        # leaves the output unchanged and avoids allocating the preset's 64 MiB.
        dict_size = max(4096, 1 << max(length - 1, 1).bit_length())
        opts = {"preset": preset, "dict_size": dict_size, "lc": self.lc, "lp": self.lp,
                "pb": self.pb, "mf": _MATCH_FINDERS[self.mf], "nice_len": self.nice_len}
        if self.container == "xz":
            return [{"id": lzma.FILTER_LZMA2, **opts}]
        return [{"id": lzma.FILTER_LZMA1, **opts}]

    def compressor(self, length: int) -> lzma.LZMACompressor:
        fmt = {"raw": lzma.FORMAT_RAW, "alone": lzma.FORMAT_ALONE, "xz": lzma.FORMAT_XZ}[self.container]
        check = lzma.CHECK_NONE if self.container == "xz" else -1
        return lzma.LZMACompressor(format=fmt, check=check, filters=self.filters(length))


def _as_bytes(data) -> bytes:
    if isinstance(data, SymbolSeries):
        return data.to_bytes()
    if isinstance(data, np.ndarray):
        return data.tobytes()
    return bytes(data)


def compress_bytes(data, cfg: CodecConfig | None = None, chunk_size: int | None = None) -> bytes:
    """Compressed serialisation of ``data``.

    With ``chunk_size`` the input is fed to the codec incrementally; the output
    is identical to single-shot compression.
    """
    cfg = cfg or CodecConfig()
    raw = _as_bytes(data)
    try:
        comp = cfg.compressor(len(raw))
        if chunk_size is None:
            out = comp.compress(raw)
        else:
            out = b"".join(comp.compress(raw[i:i + chunk_size])
                           for i in range(0, len(raw), chunk_size))
        return out + comp.flush()
    except lzma.LZMAError as exc:
        raise CodecError(f"{cfg.key}: {exc}") from exc


def compress_size(data, cfg: CodecConfig | None = None, chunk_size: int | None = None) -> int:
    """Number of bytes in the compressed serialisation of ``data``."""
    if len(_as_bytes(data)) == 0:
        raise ValueError("cannot compress an empty series")
    return len(compress_bytes(data, cfg, chunk_size))


@dataclass(frozen=True)
class OverheadEntry:
    length: int
    mean_overhead: float
    sd: float
    reps: int


@dataclass(frozen=True)
class CalibrationTable:
    """Per-length overhead of ``codec`` on incompressible input of kind ``reference``."""

    codec: CodecConfig
    entries: tuple[OverheadEntry, ...]
    seed: int
    reference: str = "uniform"

    def __post_init__(self):
        if self.reference not in REFERENCES:
            raise ValueError(f"unknown reference {self.reference!r}")
        object.__setattr__(self, "entries",
                           tuple(sorted(self.entries, key=lambda e: e.length)))

    @property
    def lengths(self) -> np.ndarray:
        return np.array([e.length for e in self.entries], dtype=float)

    def overhead(self, length: int) -> float:
        """Overhead at ``length``, interpolated linearly in log-log space.

        Flat beyond the calibrated range. Overheads grow roughly in proportion
        to length for long inputs, which a power law between neighbouring
        grid points follows closely.
        """
        if not self.entries:
            raise ValueError("calibration table is empty")
        xs = self.lengths
        ys = np.array([max(e.mean_overhead, 0.0) for e in self.entries])
        if length <= xs[0]:
            return float(ys[0])
        if length >= xs[-1]:
            return float(ys[-1])
        j = int(np.searchsorted(xs, length))
        x0, x1, y0, y1 = xs[j - 1], xs[j], ys[j - 1], ys[j]
        t = (math.log(length) - math.log(x0)) / (math.log(x1) - math.log(x0))
        if y0 > 0 and y1 > 0:
            return float(math.exp(math.log(y0) + t * (math.log(y1) - math.log(y0))))
        return float(y0 + t * (y1 - y0))

    def fraction_increases(self) -> list[tuple[int, int]]:
        """Adjacent length pairs where overhead per byte rises by more than 1 sd.

        With a headerless stream the per-byte overhead is smallest around
        10^4 bytes and creeps up towards its asymptote beyond that, so this is
        a diagnostic rather than an invariant.
        """
        out = []
        for a, b in zip(self.entries, self.entries[1:]):
            if b.mean_overhead / b.length > a.mean_overhead / a.length + b.sd / b.length:
                out.append((a.length, b.length))
        return out

    def to_json(self) -> dict:
        return {
            "schema": CALIBRATION_SCHEMA,
            "codec": self.codec.codec,
            "version": self.codec.version,
            "preset": self.codec.preset,
            "settings": self.codec.settings(),
            "seed": self.seed,
            "reference": self.reference,
            "entries": [asdict(e) for e in self.entries],
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def from_json(cls, doc: dict, expect: CodecConfig | None = None) -> "CalibrationTable":
        cfg = CodecConfig(**doc["settings"])
        if expect is None and cfg.version != liblzma_version():
            raise CalibrationMismatch(
                f"table was calibrated with liblzma {cfg.version}, running {liblzma_version()}; recalibrate")
        if expect is not None and cfg != expect:
            raise CalibrationMismatch(
                f"table was calibrated for {cfg.key}, current codec is {expect.key}; recalibrate")
        entries = tuple(OverheadEntry(**e) for e in doc["entries"])
        return cls(cfg, entries, doc["seed"], doc.get("reference", "uniform"))

    @classmethod
    def load(cls, path, expect: CodecConfig | None = None) -> "CalibrationTable":
        """Read a table, rejecting it if it was made by a different codec build.

        Without ``expect`` only the liblzma version is checked.
        """
        return cls.from_json(json.loads(Path(path).read_text()), expect)


def _reference_bytes(seed: int, length: int, rep: int, reference: str = "uniform") -> bytes:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(length, rep)))
    if reference == "ranked":
        return rng.permutation((np.arange(length) << 8) // length).astype(np.uint8).tobytes()
    return rng.integers(0, 256, size=length, dtype=np.uint8).tobytes()


def _overhead_sample(args) -> float:
    cfg, seed, length, rep, reference = args
    return compress_size(_reference_bytes(seed, length, rep, reference), cfg) - length


def calibrate_overhead(lengths=DEFAULT_LENGTHS, reps: int = 20, cfg: CodecConfig | None = None,
                       seed: int = 0, threads: int | None = None,
                       reference: str = "uniform") -> CalibrationTable:
    """Measure codec overhead on incompressible bytes at each length.

    Every (length, rep) pair draws from its own stream keyed on the seed, so
    the table does not depend on how work is scheduled. With
    ``reference="ranked"`` the input is a shuffled, exactly balanced byte
    sequence; iid uniform bytes have slightly uneven counts and compress a
    few bytes better, which biases rank-discretised estimates downwards.
    """
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}")
    lengths = sorted({int(L) for L in lengths})
    if not lengths or lengths[0] < 1:
        raise ValueError("lengths must be a non-empty list of positive integers")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    cfg = cfg or CodecConfig()
    jobs = [(cfg, seed, L, r, reference) for L in lengths for r in range(reps)]
    with ThreadPoolExecutor(threads) as pool:
        samples = list(pool.map(_overhead_sample, jobs))
    arr = np.array(samples, dtype=float).reshape(len(lengths), reps)
    entries = tuple(
        OverheadEntry(L, float(row.mean()), float(row.std(ddof=1)) if reps > 1 else 0.0, reps)
        for L, row in zip(lengths, arr)
    )
    return CalibrationTable(cfg, entries, seed, reference)


@dataclass(frozen=True)
class CompressionEstimate:
    """Raw and overhead-corrected compression ratio of a symbol series.

    Ratios are taken against the nominal size of ``resolution_bits`` per
    symbol, so ``entropy_rate_bits = (1 - corrected_cr) * resolution_bits``
    holds at every resolution.
    """

    n_symbols: int
    resolution_bits: int
    input_bytes: int
    compressed_bytes: int
    overhead_bytes: float
    raw_cr: float
    corrected_cr: float
    entropy_rate_bits: float


def estimate_from_size(n_symbols: int, bits: int, input_bytes: int, compressed: int,
                       table: CalibrationTable) -> CompressionEstimate:
    overhead = table.overhead(input_bytes)
    nominal = n_symbols * bits / 8.0
    raw = 1.0 - compressed / nominal
    corrected = min(1.0, 1.0 - (compressed - overhead) / nominal)
    return CompressionEstimate(
        n_symbols=n_symbols,
        resolution_bits=bits,
        input_bytes=input_bytes,
        compressed_bytes=compressed,
        overhead_bytes=overhead,
        raw_cr=raw,
        corrected_cr=corrected,
        entropy_rate_bits=(1.0 - corrected) * bits,
    )


def estimate(sym: SymbolSeries, table: CalibrationTable, chunk_size: int | None = None) -> CompressionEstimate:
    """Bias-corrected compression estimate for ``sym``."""
    if not table.entries:
        raise ValueError("calibration table is empty")
    if len(sym) == 0:
        raise ValueError("cannot estimate an empty series")
    raw = sym.to_bytes()
    size = compress_size(raw, table.codec, chunk_size)
    return estimate_from_size(len(sym), sym.resolution_bits, len(raw), size, table)
