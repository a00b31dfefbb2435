"""Sweep random matrices and report how tightly the weighted norm hugs rho.

For each (n, epsilon) cell, prints the mean and max of (norm - rho)/epsilon,
the selected t range, and how many instances hit the conditioning cap.

    python scripts/sandwich_sweep.py --per-cell 20 --max-kappa 1e12
"""

import argparse
import math

import numpy as np

from contraction_norm import construct_norm
from contraction_norm.errors import ConditioningExceeded


def ginibre(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2 * n)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=list(range(2, 9)))
    ap.add_argument("--epsilons", type=float, nargs="+", default=[0.5, 0.1, 0.01])
    ap.add_argument("--per-cell", type=int, default=20)
    ap.add_argument("--max-kappa", type=float, default=1e12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'eps':>6} {'mean gap/eps':>13} {'max gap/eps':>12} {'t min':>9} {'t max':>9} {'capped':>6}")
    for n in args.sizes:
        for eps in args.epsilons:
            gaps, ts, capped = [], [], 0
            for _ in range(args.per_cell):
                try:
                    _, cert = construct_norm(ginibre(rng, n), eps, max_kappa=args.max_kappa)
                except ConditioningExceeded:
                    capped += 1
                    continue
                gaps.append((cert.norm_value - cert.rho) / eps)
                ts.append(cert.t)
            if gaps:
                print(f"{n:>3} {eps:>6g} {np.mean(gaps):>13.4f} {np.max(gaps):>12.4f} "
                      f"{min(ts):>9.3g} {max(ts):>9.3g} {capped:>6}")
            else:
                print(f"{n:>3} {eps:>6g} {'-':>13} {'-':>12} {'-':>9} {'-':>9} {capped:>6}")


if __name__ == "__main__":
    main()
