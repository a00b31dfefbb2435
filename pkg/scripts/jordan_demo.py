"""Jordan blocks: the defective case where epsilon = 0 is out of reach.

Shows how t, kappa and the norm respond as epsilon shrinks, and where the
conditioning cap stops the construction.

    python scripts/jordan_demo.py --n 2 4 8 --lam 0.9
"""

import argparse

import numpy as np

from contraction_norm import construct_norm, verify_certificate
from contraction_norm.errors import ConditioningExceeded


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[2, 4, 8])
    ap.add_argument("--lam", type=float, default=0.9)
    ap.add_argument("--epsilons", type=float, nargs="+", default=[0.5, 0.1, 0.05, 0.01, 1e-3, 1e-4])
    args = ap.parse_args()

    print(f"{'n':>3} {'eps':>8} {'t':>12} {'kappa':>10} {'norm':>14} {'norm-rho':>10} verified")
    for n in args.n:
        J = args.lam * np.eye(n) + np.eye(n, k=1)
        for eps in args.epsilons:
            try:
                W, _ = construct_norm(J, eps)
            except ConditioningExceeded as exc:
                print(f"{n:>3} {eps:>8g} {exc.t:>12.6g} {exc.kappa:>10.3g} {'capped':>14}")
                continue
            cert = verify_certificate(W, J, trials=200)
            print(f"{n:>3} {eps:>8g} {cert.t:>12.6g} {cert.kappa:>10.3g} {cert.norm_value:>14.10f} "
                  f"{cert.norm_value - cert.rho:>10.3g} {cert.verified}")


if __name__ == "__main__":
    main()
