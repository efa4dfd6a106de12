"""Measure of the depth-N survivor set inside [g0, g0+1) for a grid of g0 and N."""
import argparse

from mahler_sieve.refine import measure, refine_history


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--g0-max", type=int, default=20)
    ap.add_argument("--N", type=int, default=16)
    args = ap.parse_args()

    for g0 in range(args.g0_max + 1):
        hist = refine_history(g0, args.N)
        dead = next((s.depth for s in hist if not s.intervals), None)
        last = hist[-1]
        print(
            f"g0={g0:>3}  intervals={len(last):>4}  measure={float(measure(last)):.3e}  "
            f"empty from depth {dead}"
        )


if __name__ == "__main__":
    main()
