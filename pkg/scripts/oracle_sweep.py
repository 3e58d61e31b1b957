"""Compare the direct product-expansion search with the sheaf coboundary
expansion on random tuples, and report the sandwich by ε_max.

    python3 scripts/oracle_sweep.py --seeds 0 1 2
"""

import argparse
from collections import Counter

from prodexp.expansion import INF, eps_max, format_rational, gamma, rho_exact
from prodexp.sheaf import rho_via_sheaf
from prodexp.suites import oracle_tuples


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    args = p.parse_args()

    mismatches, values = 0, Counter()
    for seed in args.seeds:
        for tup in oracle_tuples(seed):
            a = rho_exact(tup).rho
            b = rho_via_sheaf(tup)
            mismatches += a != b
            values[format_rational(a)] += 1
            if a != INF and not tup.is_degenerate():
                e = eps_max(tup)
                print(f"seed {seed} {tup}: gamma={format_rational(gamma(e, tup.D))} rho={format_rational(a)} "
                      f"eps_max={format_rational(e)}")
    print(f"mismatches: {mismatches}")
    print("rho histogram: " + ", ".join(f"{k}: {v}" for k, v in sorted(values.items())))


if __name__ == "__main__":
    main()
