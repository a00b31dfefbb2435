"""Seed search for a consensus run whose Euclidean disagreement grows.

Screens candidates cheaply in plain Euclidean arithmetic, then confirms each
hit with the certified weighted norm. The first confirmed hit is pinned in the
test suite.

    python scripts/find_nonmonotone_seed.py --max-seed 3000 --self-weight 0.5
"""

import argparse

import numpy as np

from contraction_norm.contraction import (
    certify_contraction,
    disagreement_matrix,
    random_digraph,
    row_stochastic_weights,
    simulate_consensus,
)


def euclidean_jumps(W, x0, steps, growth, floor):
    M, pi = disagreement_matrix(W)
    d = (x0 - pi @ x0).astype(complex)
    e = [np.linalg.norm(d)]
    for _ in range(steps):
        d = M @ d
        e.append(np.linalg.norm(d))
    return [k for k in range(steps) if e[k + 1] > e[k] * growth and e[k] > floor * e[0]]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-seed", type=int, default=3000)
    ap.add_argument("--self-weight", type=float, default=0.5)
    ap.add_argument("--steps", type=int, default=50)
    ap.add_argument("--growth", type=float, default=1.01)
    ap.add_argument("--nodes", type=int, nargs="+", default=list(range(4, 11)))
    ap.add_argument("--probs", type=float, nargs="+", default=[0.2, 0.5])
    ap.add_argument("--hits", type=int, default=3)
    args = ap.parse_args()

    found = 0
    for seed in range(args.max_seed):
        for n in args.nodes:
            for p in args.probs:
                W = row_stochastic_weights(random_digraph(n, p, seed), args.self_weight)
                x0 = np.random.default_rng(seed).standard_normal(n)
                jumps = euclidean_jumps(W, x0, args.steps, args.growth, 1e-6)
                if not jumps:
                    continue
                norm, rate = certify_contraction(W)
                rep = simulate_consensus(W, x0, args.steps, norm)
                e = rep.euclidean_norms
                worst = max(e[k + 1] / e[k] for k in jumps)
                print(f"n={n} p={p} seed={seed} steps={jumps[:5]} euclid_growth={worst:.4f} "
                      f"max_ratio={rep.max_ratio:.4f} rate={rate:.4f} certified={rep.certified}",
                      flush=True)
                found += rep.certified
                if found >= args.hits:
                    return


if __name__ == "__main__":
    main()
