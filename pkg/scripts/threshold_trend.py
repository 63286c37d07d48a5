"""EXIT-curve threshold location and width for RM(1,3), RM(2,5), RM(3,7)."""

import argparse

import numpy as np

from exitweight import exit_mu
from exitweight.codes import rm_code
from exitweight.exit_mu import SamplingConfig, exit_curve, threshold_estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--points", type=int, default=51)
    args = ap.parse_args()

    grid = np.linspace(0, 1, args.points)
    mc = SamplingConfig("mc", samples=args.samples, seed=args.seed)
    print("code,n,p_star,p_star_err,width,width_err")
    for r, m in [(1, 3), (2, 5), (3, 7)]:
        code = rm_code(r, m)
        cfg = exit_mu.EXACT if code.n <= exit_mu.EXACT_CUTOFF else mc
        est = threshold_estimate(exit_curve(code, grid, cfg))
        print(f"\"RM({r},{m})\",{code.n},{est.p_star:.5f},{est.p_star_err:.5f},"
              f"{est.width:.5f},{est.width_err:.5f}")


if __name__ == "__main__":
    main()
