"""Complex Schur decomposition ``A = U* Delta U``.

Householder reduction to Hessenberg form followed by single-shift complex QR
with Wilkinson shifts. The textbook factorization is ``A = Q T Q*``; the
stored unitary factor is ``U = Q*`` so that ``Delta = U A U*``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import QRNoConvergence
from .linalg import as_matrix

DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 30
EXCEPTIONAL_SHIFT_EVERY = 10


@dataclass(frozen=True, eq=False)
class SchurDecomposition:
    """``A = U* Delta U`` with ``U`` unitary and ``Delta`` upper triangular.

    ``residual`` is ``||A - U* Delta U||_F / max(1, ||A||_F)`` and
    ``unitarity_defect`` is ``||U U* - I||_F``.
    """

    U: np.ndarray
    Delta: np.ndarray
    residual: float
    unitarity_defect: float

    @property
    def n(self):
        return self.Delta.shape[0]

    @property
    def eigenvalues(self):
        return np.diag(self.Delta).copy()


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    rho: float


def hessenberg_reduce(A):
    """Return ``(Q, H)`` with ``A = Q H Q*`` and ``H`` upper Hessenberg."""
    H = as_matrix(A).copy()
    n = H.shape[0]
    Q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = H[k + 1 :, k]
        if not np.any(x[1:]):
            continue
        xnorm = np.linalg.norm(x)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        H[k + 1 :, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1 :, k:])
        H[:, k + 1 :] -= 2.0 * np.outer(H[:, k + 1 :] @ v, v.conj())
        Q[:, k + 1 :] -= 2.0 * np.outer(Q[:, k + 1 :] @ v, v.conj())
        H[k + 2 :, k] = 0.0
    return Q, H


def _givens(a, b):
    """``(c, s)`` such that ``[[c, s], [-conj(s), c]] @ [a, b] = [r, 0]``."""
    if b == 0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, np.conj(b) / abs(b)
    r = np.hypot(abs(a), abs(b))
    return abs(a) / r, a * np.conj(b) / (abs(a) * r)


def _wilkinson_shift(a, b, c, d):
    """Eigenvalue of ``[[a, b], [c, d]]`` closer to ``d``."""
    p = 0.5 * (a - d)
    disc = np.sqrt(p * p + b * c)
    den = p + disc if abs(p + disc) >= abs(p - disc) else p - disc
    if den == 0:
        return d
    return d - b * c / den


def _qr_sweep(H, Q, lo, hi, mu):
    idx = np.arange(lo, hi + 1)
    H[idx, idx] -= mu
    rots = []
    for k in range(lo, hi):
        c, s = _givens(H[k, k], H[k + 1, k])
        G = np.array([[c, s], [-np.conj(s), c]], dtype=np.complex128)
        H[k : k + 2, k:] = G @ H[k : k + 2, k:]
        H[k + 1, k] = 0.0
        rots.append(G)
    for k, G in zip(range(lo, hi), rots):
        Gh = G.conj().T
        H[: k + 2, k : k + 2] = H[: k + 2, k : k + 2] @ Gh
        Q[:, k : k + 2] = Q[:, k : k + 2] @ Gh
    H[idx, idx] += mu


def _finish(A, Q, H):
    U = Q.conj().T
    Delta = np.triu(H)
    normA = np.linalg.norm(A, "fro")
    residual = np.linalg.norm(A - U.conj().T @ Delta @ U, "fro") / max(1.0, normA)
    defect = np.linalg.norm(U @ U.conj().T - np.eye(A.shape[0]), "fro")
    return SchurDecomposition(U, Delta, float(residual), float(defect))


def schur_decompose(A, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Complex Schur form in the ``A = U* Delta U`` convention.

    A subdiagonal entry is deflated once its magnitude drops to
    ``tol * ||A||_F``. Raises :class:`QRNoConvergence` after
    ``max_sweeps * n**2`` QR sweeps; the exception carries the partial
    decomposition.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = as_matrix(A)
    n = A.shape[0]
    Q, H = hessenberg_reduce(A)
    thresh = tol * np.linalg.norm(A, "fro")
    budget = max_sweeps * n * n
    sweeps = 0
    its = 0
    hi = n - 1
    while hi > 0:
        lo = hi
        while lo > 0 and abs(H[lo, lo - 1]) > thresh:
            lo -= 1
        if lo > 0:
            H[lo, lo - 1] = 0.0
        if lo == hi:
            hi -= 1
            its = 0
            continue
        if sweeps >= budget:
            raise QRNoConvergence(
                f"QR iteration did not converge in {budget} sweeps",
                partial=SchurDecomposition(
                    Q.conj().T, H.copy(), float("nan"), float("nan")
                ),
            )
        its += 1
        sweeps += 1
        if its % EXCEPTIONAL_SHIFT_EVERY == 0:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1])
        else:
            mu = _wilkinson_shift(
                H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi]
            )
        _qr_sweep(H, Q, lo, hi, mu)
    return _finish(A, Q, H)


def eigenvalues(A, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Eigenvalues read off the Schur diagonal, in deflation order."""
    ev = schur_decompose(A, tol, max_sweeps).eigenvalues
    return Spectrum(ev, float(np.max(np.abs(ev))))
