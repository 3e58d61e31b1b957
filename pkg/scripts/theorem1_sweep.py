"""Good-substitution failure rates of random codes against the union bound,
for a range of field degrees t.

    python3 scripts/theorem1_sweep.py --samples 500 --t 6 8 10 12 16
"""

import argparse

from prodexp.config import ExperimentConfig
from prodexp.experiments import run_theorem1


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--D", type=int, default=2)
    p.add_argument("--t", type=int, nargs="+", default=[4, 6, 8, 10, 12, 16])
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args()

    print(f"{'t':>3} {'failures':>9} {'fraction':>10} {'bound':>10} {'within':>7} {'certified':>9}")
    for t in args.t:
        cfg = ExperimentConfig(
            n=args.n, D=args.D, t=t, dims=(1,) * args.D, samples=args.samples,
            seed=args.seed, threads=args.threads,
        )
        rep = run_theorem1(cfg)
        print(
            f"{t:>3} {rep.failures:>9} {float(rep.failure_fraction):>10.2e} {min(float(rep.bound), 1):>10.2e}"
            f" {'yes' if rep.within_bound else 'no':>7} {'yes' if rep.certified_all_good else 'no':>9}"
        )


if __name__ == "__main__":
    main()
