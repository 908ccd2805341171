#!/usr/bin/env python3
"""Compare the general lower bound with the padded s = 0 bound, and with exact values where cheap."""

import argparse

from kneser import KneserParams, SolveBudget, compare_bounds
from kneser.bounds import formula_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-N", type=int, default=6)
    ap.add_argument("--solve-up-to", type=int, default=56,
                    help="solve exactly when the vertex count is at most this")
    args = ap.parse_args()

    print(f"{'instance':>14} {'bound':>5} {'padded':>6} {'gain':>4} {'chi':>4}")
    for N in range(2, args.max_N + 1):
        for s in range(1, N):
            params = KneserParams(2 * N, N, 2, s)
            if params.num_vertices <= args.solve_up_to:
                rep = compare_bounds(params, SolveBudget(max_nodes=10**6))
            else:
                rep = formula_report(params)
            chi = "" if rep.exact_chi is None else rep.exact_chi
            print(f"{params.label():>14} {rep.theorem1:>5} {rep.homomorphism_eq3:>6} "
                  f"{rep.advantage:>4} {chi:>4}")


if __name__ == "__main__":
    main()
