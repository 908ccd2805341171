#!/usr/bin/env python3
"""Audit the size conditions of the composite-arity reduction over a parameter grid.

For every (r1, r2, t, k, s) and every n whose bound minus one equals t, report
whether m >= r1(k-1)+1 (inner) and n >= (r2-1)(t-1) + r2*m (outer) hold.
Failing cells are listed; a summary goes to the last line.
"""

import argparse
from collections import Counter
from itertools import product

from kneser.reduction import ReductionPlan


def cells(factors, t_max, k_max):
    for r1, r2, t, k in product(factors, factors, range(1, t_max + 1), range(1, k_max + 1)):
        for s in range(k):
            r = r1 * r2
            lo = max(r * (k - 1) + 1, r * (k - s - 1) + t * (r - 1) + 1)
            hi = r * (k - s - 1) + (t + 1) * (r - 1)
            for n in range(lo, hi + 1):
                yield ReductionPlan(r1, r2, t, k, s), n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--factors", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--t-max", type=int, default=6)
    ap.add_argument("--k-max", type=int, default=3)
    args = ap.parse_args()

    total, fails = 0, Counter()
    print("r1,r2,t,k,s,n,m,failed")
    for plan, n in cells(args.factors, args.t_max, args.k_max):
        total += 1
        chain = plan.size_chain(n)
        bad = [name for name in ("m_identity", "inner", "outer", "outer_identity") if not chain[name]]
        fails.update(bad)
        if bad:
            print(f"{plan.r1},{plan.r2},{plan.t},{plan.k},{plan.s},{n},{plan.m},{'+'.join(bad)}")
    print(f"# {total} plans; failures by condition: {dict(fails) or 'none'}")


if __name__ == "__main__":
    main()
