"""Census of survival depths over 1..N with a table of survivors per depth.

    python scripts/survival_census.py --N 16777216 --workers 4 --csv out.csv
"""
import argparse
import time

from mahler_sieve.census import census


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=2**22)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--csv")
    args = ap.parse_args()

    t = time.perf_counter()
    rep = census(args.N, workers=args.workers)
    dt = time.perf_counter() - t

    print(f"N = {args.N}  ({dt:.2f}s, {args.workers} worker(s))")
    print(f"{'n':>4} {'survivors':>12} {'N // 2^n':>12}")
    for n, c in rep.survivors_at.items():
        print(f"{n:>4} {c:>12} {args.N // 2**n:>12}{'' if c == args.N // 2**n else '  MISMATCH'}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rep.to_csv())


if __name__ == "__main__":
    main()
