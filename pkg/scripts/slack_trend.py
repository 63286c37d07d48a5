"""Largest slack of the spectrum bounds for first-order Reed-Muller codes."""

import argparse

from exitweight.codes import rm_code
from exitweight.spectrum import bound_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=8)
    args = ap.parse_args()
    print("m,n,max_eps1,max_eps2,branch1_rows,branch2_rows")
    for m in range(3, args.max_m + 1):
        rep = bound_report(rm_code(1, m))
        print(f"{m},{rep.n},{rep.max_eps1:.6f},{rep.max_eps2:.6f},{len(rep.branch_indices(1))},{len(rep.branch_indices(2))}")


if __name__ == "__main__":
    main()
