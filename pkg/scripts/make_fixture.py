"""Write tests/fixtures/returns_like.csv: a synthetic daily price series.

Prices follow exp(cumsum(r)) with GARCH(1,1) returns, so the file looks like a
market close series (date, price) without being one.
"""
import argparse
import datetime as dt
from pathlib import Path

import numpy as np

from compressdep.synth import gen_garch11


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=1995)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/fixtures/returns_like.csv"))
    args = ap.parse_args()
    r = gen_garch11(2e-6, 0.08, 0.9, args.n, args.seed).values
    prices = 1000.0 * np.exp(np.concatenate([[0.0], np.cumsum(r)]))
    day = dt.date(2000, 1, 3)
    lines = ["# synthetic GARCH(1,1) price path; not market data", "date,close"]
    for p in prices:
        while day.weekday() >= 5:
            day += dt.timedelta(days=1)
        lines.append(f"{day.isoformat()},{p:.4f}")
        day += dt.timedelta(days=1)
    Path(args.out).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
