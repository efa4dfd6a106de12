"""Build and certify eta for a few rational beta > 2 and print the enclosures."""
import argparse

from mahler_sieve.tijdeman import GENERAL, HALF, BetaParam, construct, verify_run

BETAS = [(5, 2, HALF), (7, 2, HALF), (3, 1, GENERAL), (7, 3, GENERAL), (9, 4, GENERAL)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=60)
    ap.add_argument("--m-max", type=int, default=5)
    args = ap.parse_args()

    for p, q, mode in BETAS:
        beta = BetaParam(p, q)
        for m in range(1, args.m_max + 1):
            cert = verify_run(construct(beta, m, args.N, mode))
            lo, hi = cert.enclosure
            print(
                f"beta={p}/{q:<2} {mode:<7} m={m}  eta ~ {float(lo):.15f}  "
                f"width {float(hi - lo):.2e}  max bound {cert.max_upper} (c = {cert.c})"
            )


if __name__ == "__main__":
    main()
