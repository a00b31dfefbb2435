"""Consensus over directed graphs, certified with the weighted norm.

With a row-stochastic primitive ``W`` and left Perron vector ``pi``, the
disagreement ``d_k = x_k - 1 (pi^T x_k)`` of ``x_{k+1} = W x_k`` obeys
``d_{k+1} = M d_k`` with ``M = W - 1 pi^T``. Since ``rho(M) < 1``, the norm
built for ``M`` with ``epsilon < 1 - rho(M)`` makes every step a contraction
by at least ``rho(M) + epsilon``, even when the Euclidean disagreement grows.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NoSpectralGap, NotStronglyConnected, PerronNoConvergence
from .linalg import as_matrix, as_vector
from .norm import MAX_KAPPA, construct_norm
from .schur import eigenvalues

PERRON_TOL = 1e-14
PERRON_MAXITER = 100_000
GAP_TOL = 1e-10
EXTINCTION = 1e-13
DEFAULT_EPSILON_FRACTION = 0.5
DEFAULT_SELF_WEIGHT = 0.5


@dataclass(frozen=True)
class Digraph:
    """Nodes ``0..n-1``; an edge ``(i, j)`` means ``j`` receives from ``i``."""

    n: int
    edges: frozenset

    def __post_init__(self):
        for i, j in self.edges:
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"invalid edge {(i, j)} for n={self.n}")

    def in_neighbors(self, j):
        return sorted(i for i, k in self.edges if k == j)

    def _reach(self, forward):
        adj = [[] for _ in range(self.n)]
        for i, j in self.edges:
            if forward:
                adj[i].append(j)
            else:
                adj[j].append(i)
        seen = {0}
        todo = deque([0])
        while todo:
            for k in adj[todo.popleft()]:
                if k not in seen:
                    seen.add(k)
                    todo.append(k)
        return len(seen) == self.n

    def is_strongly_connected(self):
        return self._reach(True) and self._reach(False)


def random_digraph(n, p, seed):
    """Directed ring ``0 -> 1 -> ... -> n-1 -> 0`` plus every other ordered
    pair independently with probability ``p``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    ring = {(i, (i + 1) % n) for i in range(n)}
    edges = set(ring)
    for i in range(n):
        for j in range(n):
            if i != j and (i, j) not in ring and rng.random() < p:
                edges.add((i, j))
    return Digraph(n, frozenset(edges))


def row_stochastic_weights(g, self_weight=DEFAULT_SELF_WEIGHT):
    """Averaging weights: ``self_weight`` on the diagonal, the rest split
    equally among in-neighbours."""
    if not 0.0 < self_weight < 1.0:
        raise ValueError("self_weight must lie in (0, 1)")
    if not g.is_strongly_connected():
        raise NotStronglyConnected("digraph is not strongly connected")
    W = np.zeros((g.n, g.n))
    for j in range(g.n):
        nbrs = g.in_neighbors(j)
        W[j, j] = self_weight
        W[j, nbrs] = (1.0 - self_weight) / len(nbrs)
    return W


def perron_vector(W, tol=PERRON_TOL, maxiter=PERRON_MAXITER):
    """Left Perron vector of a primitive row-stochastic ``W``, summing to 1."""
    W = as_matrix(W)
    n = W.shape[0]
    Wt = W.T
    pi = np.full(n, 1.0 / n, dtype=np.complex128)
    for _ in range(maxiter):
        nxt = Wt @ pi
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pi)) <= tol:
            return nxt
        pi = nxt
    raise PerronNoConvergence(f"Perron iteration did not converge in {maxiter} steps")


def disagreement_matrix(W):
    """``(M, pi)`` with ``M = W - 1 pi^T``."""
    W = as_matrix(W)
    pi = perron_vector(W)
    M = W - np.outer(np.ones(W.shape[0]), pi)
    return M, pi


def certify_contraction(W, epsilon_fraction=DEFAULT_EPSILON_FRACTION, max_kappa=MAX_KAPPA):
    """Weighted norm for the disagreement matrix and the certified rate.

    ``epsilon = epsilon_fraction * (1 - rho(M))`` so the rate ``rho + epsilon``
    sits strictly between ``rho(M)`` and 1. Returns ``(WeightedNorm, rate)``.
    """
    if not 0.0 < epsilon_fraction < 1.0:
        raise ValueError("epsilon_fraction must lie in (0, 1)")
    M, _ = disagreement_matrix(W)
    rho = eigenvalues(M).rho
    if rho >= 1.0 - GAP_TOL:
        raise NoSpectralGap(f"rho(M) = {rho!r} leaves no room for a contraction")
    epsilon = epsilon_fraction * (1.0 - rho)
    norm, _ = construct_norm(M, epsilon, max_kappa=max_kappa)
    return norm, rho + epsilon


@dataclass(frozen=True)
class ContractionReport:
    rho: float
    certified_rate: float
    step_norms: list
    step_ratios: list
    max_ratio: float
    euclidean_norms: list = field(default_factory=list)
    conserved: list = field(default_factory=list)

    @property
    def certified(self):
        return self.max_ratio <= self.certified_rate * (1.0 + 1e-8)


def simulate_consensus(W, x0, steps, norm):
    """Run ``x_{k+1} = W x_k`` and measure the disagreement in ``norm``.

    ``step_norms[k]`` is the weighted length of ``d_k`` for ``k = 0..steps``.
    A ratio is dropped once its denominator falls below
    ``1e-13 * kappa * max(step_norms[0], ||x0||_W)``, where the disagreement is
    at rounding level and no longer follows ``d_{k+1} = M d_k``.
    """
    W = as_matrix(W)
    x = as_vector(x0)
    n = W.shape[0]
    if x.shape[0] != n or norm.source_dim != n:
        raise DimensionMismatch("W, x0 and norm must share a dimension")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    _, pi = disagreement_matrix(W)
    ones = np.ones(n)

    scale = norm.vector_norm(x)
    step_norms, euclid, conserved = [], [], []
    for k in range(steps + 1):
        if k:
            x = W @ x
        avg = pi @ x
        d = x - ones * avg
        step_norms.append(norm.vector_norm(d))
        euclid.append(float(np.linalg.norm(d)))
        conserved.append(complex(avg))

    floor = EXTINCTION * norm.kappa * max(step_norms[0], scale)
    ratios = [
        step_norms[k + 1] / step_norms[k]
        for k in range(steps)
        if step_norms[k] > floor and step_norms[k] > 0.0
    ]
    rho = norm.rho
    return ContractionReport(
        rho=rho,
        certified_rate=rho + norm.epsilon,
        step_norms=step_norms,
        step_ratios=ratios,
        max_ratio=max(ratios, default=0.0),
        euclidean_norms=euclid,
        conserved=conserved,
    )


def worst_case_disagreement(norm, W):
    """Disagreement vector maximizing the one-step ratio ``||M d|| / ||d||``.

    The maximum is taken over ``d`` with ``pi^T d = 0`` (every disagreement
    satisfies this), as the top singular vector of ``P M Q R^{-1}`` where
    ``Q`` spans ``pi``'s orthogonal complement and ``P Q = Q_Y R``.
    """
    M, pi = disagreement_matrix(W)
    n = M.shape[0]
    # columns 1..n-1 of a full QR of conj(pi) span {d : pi^T d = 0}
    Qfull, _ = np.linalg.qr(np.conj(pi).reshape(n, 1), mode="complete")
    Q = Qfull[:, 1:]
    Y = norm.apply(Q)
    _, R = np.linalg.qr(Y)
    X = norm.apply(M @ Q)
    _, _, Vh = np.linalg.svd(np.linalg.solve(R.T, X.T).T)
    z = np.linalg.solve(R, Vh[0].conj())
    return Q @ z
