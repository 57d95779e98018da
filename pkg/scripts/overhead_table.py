"""Codec overhead on incompressible input across lengths.

Prints length, compressed size, overhead bytes and overhead per byte for both
calibration references.
"""
import argparse

from compressdep.compressor import DEFAULT_LENGTHS, calibrate_overhead


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lengths", type=lambda s: [int(x) for x in s.split(",")], default=list(DEFAULT_LENGTHS))
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    tables = {ref: calibrate_overhead(args.lengths, args.reps, seed=args.seed, reference=ref)
              for ref in ("uniform", "ranked")}
    print("reference,length,compressed,overhead,sd,overhead_fraction")
    for ref, t in tables.items():
        for e in t.entries:
            print(f"{ref},{e.length},{e.length + e.mean_overhead:.1f},{e.mean_overhead:.1f},"
                  f"{e.sd:.1f},{e.mean_overhead / e.length:.6f}")


if __name__ == "__main__":
    main()
