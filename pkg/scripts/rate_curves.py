"""Capacity and critical-rate curves over the BSC crossover probability."""

import argparse

import numpy as np

from exitweight.bsc import rate_curves


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=51)
    ap.add_argument("--plot", help="write a PNG here (needs matplotlib)")
    args = ap.parse_args()
    fc = rate_curves(np.linspace(0, 0.5, args.points))
    print("p,capacity,critical_rate")
    for p, c, r in zip(fc.p, fc.capacity, fc.critical_rate):
        print(f"{p:.4f},{c:.6f},{r:.6f}")
    if args.plot:
        import matplotlib.pyplot as plt

        plt.plot(fc.p, fc.capacity, label="1 - H(p)")
        plt.plot(fc.p, fc.critical_rate, label="critical rate")
        plt.xlabel("p")
        plt.ylabel("rate")
        plt.legend()
        plt.savefig(args.plot, dpi=150)


if __name__ == "__main__":
    main()
