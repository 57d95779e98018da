"""Command-line front end.

Exit codes: 0 success, 2 bad input or usage, 3 codec failure, 4 a test
precondition was violated (e.g. too few repetitions for the requested alpha).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .compressor import (DEFAULT_LENGTHS, REFERENCES, CalibrationMismatch, CalibrationTable, CodecConfig,
                         CodecError, calibrate_overhead, liblzma_version)
from .discretize import RealSeries, SymbolSeries, discretize, log_returns, rank_plot_data
from .info import MarkovModel, Pmf, cr_from_entropy_rate, entropy, markov_entropy_rate
from .shuffle import independence_test, serial_dependence_curve, select_lag
from .synth import FAMILIES, GeneratorSpec

RESULT_SCHEMA = 1
CACHE_ENV = "COMPRESSDEP_CALIBRATION_DIR"

EXIT_OK, EXIT_INPUT, EXIT_CODEC, EXIT_PRECONDITION = 0, 2, 3, 4


class InputError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)
    seed: int | None = None
    seed_drawn: bool = False

    def provenance(self) -> dict:
        # output paths and thread counts do not influence results; keep them out
        # so identical runs produce identical files
        opts = {k: v for k, v in self.options.items()
                if k not in ("out", "json", "csv", "threads", "func") and v is not None}
        if isinstance(opts.get("input"), str):
            opts["input_sha256"] = _sha256(opts.pop("input"))
        if isinstance(opts.get("calibration"), str):
            opts["calibration_sha256"] = _sha256(opts.pop("calibration"))
        return {
            "tool": "compressdep",
            "tool_version": __version__,
            "codec": "lzma",
            "codec_version": liblzma_version(),
            "subcommand": self.subcommand,
            "seed": self.seed,
            "seed_drawn": self.seed_drawn,
            "config": opts,
        }


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def ingest(path, column: int | None = None, log_return: bool = False) -> RealSeries:
    """Read a numeric column from a text or CSV file.

    Lines starting with ``#`` are comments. A non-numeric first row is taken
    as a header; any later non-numeric or non-finite value is an error naming
    its line. ``column`` is 1-based and defaults to the last column.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"{path}: no such file")
    values = []
    seen_data = False
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = next(csv.reader([stripped])) if "," in stripped else stripped.split()
        col = (column - 1) if column else len(fields) - 1
        if not 0 <= col < len(fields):
            raise InputError(f"{path}:{lineno}: no column {column}")
        try:
            v = float(fields[col])
        except ValueError:
            if not seen_data:
                seen_data = True  # header row
                continue
            raise InputError(f"{path}:{lineno}: non-numeric value {fields[col]!r}") from None
        if not math.isfinite(v):
            raise InputError(f"{path}:{lineno}: non-finite value {fields[col]!r}")
        seen_data = True
        values.append(v)
    if not values:
        raise InputError(f"{path}: no numeric data")
    if log_return:
        try:
            values = log_returns(values)
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from None
        if values.size == 0:
            raise InputError(f"{path}: need at least two prices for log returns")
    return RealSeries(values)


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _param(text: str):
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, json.loads(val)
    except json.JSONDecodeError:
        return key, val


def _write_json(path, doc) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _header_lines(cfg: RunConfig) -> str:
    return "# " + json.dumps(cfg.provenance(), sort_keys=True) + "\n"


def _load_calibration(path) -> CalibrationTable:
    if path is None:
        cache = os.environ.get(CACHE_ENV)
        if cache:
            # test and sdf always see rank-discretised input; prefer its own reference
            for ref in ("ranked", "uniform"):
                candidate = Path(cache) / _cache_name(CodecConfig(), ref)
                if candidate.is_file():
                    return CalibrationTable.load(candidate)
        raise InputError("a calibration table is required: pass --calibration or run `calibrate` "
                         f"with {CACHE_ENV} set")
    if not Path(path).is_file():
        raise InputError(f"{path}: no such calibration file")
    return CalibrationTable.load(path)


def _cache_name(codec: CodecConfig, reference: str) -> str:
    return f"{codec.key}-{reference}.json"


def _series_from_args(args) -> RealSeries:
    return ingest(args.input, args.column, args.log_returns)


def _check_output(path) -> None:
    if path not in (None, "-") and not Path(path).parent.exists():
        raise InputError(f"{path}: output directory does not exist")


# subcommands ---------------------------------------------------------------

def cmd_calibrate(args, cfg: RunConfig) -> int:
    codec = CodecConfig(preset=args.preset, container=args.container)
    out = args.out
    if out is None:
        cache = os.environ.get(CACHE_ENV)
        if not cache:
            raise InputError(f"pass --out or set {CACHE_ENV}")
        Path(cache).mkdir(parents=True, exist_ok=True)
        out = str(Path(cache) / _cache_name(codec, args.reference))
    _check_output(out)
    table = calibrate_overhead(args.lengths, args.reps, codec, cfg.seed, args.threads, args.reference)
    table.save(out)
    for e in table.entries:
        print(f"{e.length}\t{e.mean_overhead:.1f}\t{e.sd:.1f}\t{e.mean_overhead / e.length:.6f}")
    return EXIT_OK


def cmd_discretize(args, cfg: RunConfig) -> int:
    _check_output(args.out)
    sym = discretize(_series_from_args(args), args.bits)
    Path(args.out).write_bytes(sym.to_bytes())
    return EXIT_OK


def cmd_rankplot(args, cfg: RunConfig) -> int:
    _check_output(args.out)
    sym = discretize(_series_from_args(args), args.bits)
    buf = io.StringIO()
    buf.write(_header_lines(cfg))
    buf.write("index,state\n")
    for i, s in rank_plot_data(sym):
        buf.write(f"{i},{s}\n")
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_generate(args, cfg: RunConfig) -> int:
    _check_output(args.out)
    params = {}
    if args.spec:
        params.update(json.loads(Path(args.spec).read_text()))
    params.update(dict(args.param or []))
    spec = GeneratorSpec(args.family, args.n, cfg.seed, params)
    series = spec.generate()
    buf = io.StringIO()
    buf.write(_header_lines(cfg))
    if isinstance(series, SymbolSeries):
        buf.writelines(f"{int(v)}\n" for v in series.symbols)
    else:
        buf.writelines(f"{v!r}\n" for v in series.values.tolist())
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


def cmd_test(args, cfg: RunConfig) -> int:
    _check_output(args.json)
    table = _load_calibration(args.calibration)
    series = _series_from_args(args)
    try:
        res = independence_test(series, args.k, args.reps, args.alpha, args.bits, table, cfg.seed,
                                phase=args.phase, threads=args.threads)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    doc = {"schema": RESULT_SCHEMA, "provenance": cfg.provenance(), "result": res.to_json()}
    if args.json:
        _write_json(args.json, doc)
    print(f"k={res.k} m={res.m} alpha={res.alpha} Q(alpha)={res.q_alpha:.6f} "
          f"p={res.p_value:.4f} unshuffled_cr={res.unshuffled.corrected_cr:.6f} "
          f"decision={'reject' if res.reject else 'fail-to-reject'}")
    return EXIT_OK


SDF_COLUMNS = ("block_size", "mean_cr", "q00", "q25", "q75", "q100", "sdf_increment", "gap")


def cmd_sdf(args, cfg: RunConfig) -> int:
    _check_output(args.csv)
    _check_output(args.json)
    table = _load_calibration(args.calibration)
    series = _series_from_args(args)
    try:
        curve = serial_dependence_curve(series, args.block_sizes, args.reps, args.bits, table,
                                        cfg.seed, phase=args.phase, threads=args.threads)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    rows = curve.rows()
    buf = io.StringIO()
    buf.write(_header_lines(cfg))
    w = csv.DictWriter(buf, fieldnames=SDF_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if isinstance(v, float) and math.isnan(v) else repr(v)) for k, v in r.items()})
    _write_text(args.csv, buf.getvalue())
    if args.json:
        doc = {
            "schema": RESULT_SCHEMA,
            "provenance": cfg.provenance(),
            "unshuffled_cr": curve.unshuffled.corrected_cr,
            "unshuffled_entropy_rate_bits": curve.unshuffled.entropy_rate_bits,
            "selected_lag": select_lag(curve, args.tolerance),
            "tolerance": args.tolerance,
            "rows": [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in r.items()}
                     for r in rows],
            "crs": {str(b): d.crs.tolist() for b, d in zip(curve.block_sizes, curve.distributions)},
        }
        _write_json(args.json, doc)
    return EXIT_OK


def cmd_entropy(args, cfg: RunConfig) -> int:
    if args.markov:
        m = MarkovModel.from_file(args.markov)
        h, n = markov_entropy_rate(m), m.size
    else:
        p = Pmf.from_file(args.pmf)
        h, n = entropy(p), p.size
    print(f"{h:.6g}")
    if args.verbose and n > 1:
        q = cr_from_entropy_rate(min(h, math.log2(n)), n)
        print(f"alphabet_bits={q.alphabet_bits:.6g} optimal_cr={q.optimal_cr:.6g}", file=sys.stderr)
    return EXIT_OK


# parser --------------------------------------------------------------------

STOCHASTIC = {"calibrate", "generate", "test", "sdf"}


def _add_input(p):
    p.add_argument("--input", required=True, help="text file (one value per line) or CSV")
    p.add_argument("--column", type=int, help="1-based CSV column (default: last)")
    p.add_argument("--log-returns", action="store_true",
                   help="treat the column as prices and use log(p_t / p_{t-1})")
    p.add_argument("--bits", type=int, default=8, help="resolution in bits per symbol (default 8)")


def _add_run(p):
    p.add_argument("--seed", type=int, help="master seed (drawn and recorded when omitted)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")


def _add_test_common(p):
    p.add_argument("--reps", type=int, default=1000, help="shuffles per block size / test")
    p.add_argument("--calibration", help=f"calibration JSON (default: cache in ${CACHE_ENV})")
    p.add_argument("--phase", type=int, default=0, help="offset of the first block")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compressdep",
        description="Compression-based tests for serial dependence in time series.")
    version = json.dumps({"tool": "compressdep", "version": __version__,
                          "codec": "lzma", "codec_version": liblzma_version()})
    parser.add_argument("--version", action="version", version=version)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("calibrate", help="measure codec overhead on incompressible input")
    p.add_argument("--lengths", type=_parse_ints, default=list(DEFAULT_LENGTHS),
                   help="comma-separated byte lengths")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--preset", type=int, default=9)
    p.add_argument("--container", choices=("raw", "alone", "xz"), default="raw")
    p.add_argument("--reference", choices=REFERENCES, default="uniform",
                   help="incompressible input: iid uniform bytes, or shuffled balanced bytes "
                        "matching rank-discretised series")
    p.add_argument("--out", help=f"output JSON (default: cache in ${CACHE_ENV})")
    _add_run(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("discretize", help="write rank-discretised symbols as raw bytes")
    _add_input(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_discretize)

    p = sub.add_parser("rankplot", help="emit index,state CSV for a rank plot")
    _add_input(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_rankplot)

    p = sub.add_parser("generate", help="simulate a synthetic series")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--param", type=_param, action="append", metavar="KEY=VALUE",
                   help="family parameter, JSON-decoded (repeatable)")
    p.add_argument("--spec", help="JSON file of family parameters")
    p.add_argument("--out", default="-")
    _add_run(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("test", help="block-shuffle independence test")
    _add_input(p)
    p.add_argument("--k", type=int, required=True, help="block size")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--json", help="result JSON path")
    _add_test_common(p)
    _add_run(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("sdf", help="compression ratio vs block size and serial dependence function")
    _add_input(p)
    p.add_argument("--block-sizes", type=_parse_ints, default=[1, 2, 3, 4, 5, 10, 50, 100, 500])
    p.add_argument("--tolerance", type=float, default=0.01, help="gap tolerance for lag selection")
    p.add_argument("--csv", default="-", help="per-block-size CSV")
    p.add_argument("--json", help="summary JSON with every per-repetition CR")
    _add_test_common(p)
    _add_run(p)
    p.set_defaults(func=cmd_sdf)

    p = sub.add_parser("entropy", help="entropy of a pmf or entropy rate of a Markov chain")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pmf", help="whitespace-separated probabilities")
    g.add_argument("--markov", help="transition matrix, one row per line")
    p.add_argument("--verbose", action="store_true", help="also report the optimal CR")
    p.set_defaults(func=cmd_entropy)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.subcommand, dict(vars(args)))
    if args.subcommand in STOCHASTIC:
        if args.seed is None:
            cfg.seed = int(np.random.SeedSequence().entropy % (1 << 63))
            cfg.seed_drawn = True
        else:
            cfg.seed = args.seed
        cfg.options.pop("seed", None)
    try:
        return args.func(args, cfg)
    except CodecError as exc:
        print(f"codec error: {exc}", file=sys.stderr)
        return EXIT_CODEC
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, CalibrationMismatch, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
