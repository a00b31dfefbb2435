"""Random test-matrix generators shared by the suite."""

import math

import numpy as np


def ginibre(rng, n, scale=None):
    """Complex Gaussian matrix; default scale puts the spectrum in the unit disk."""
    s = 1.0 / math.sqrt(2 * n) if scale is None else scale
    return s * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def random_unitary(rng, n):
    Q, R = np.linalg.qr(ginibre(rng, n, 1.0))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_conditioned(rng, n, kappa):
    """Random matrix with 2-norm condition number ``kappa``."""
    s = np.geomspace(1.0, 1.0 / kappa, n)
    return random_unitary(rng, n) @ np.diag(s) @ random_unitary(rng, n)


def jordan_block(n, lam, sup=1.0):
    return lam * np.eye(n) + sup * np.eye(n, k=1)

