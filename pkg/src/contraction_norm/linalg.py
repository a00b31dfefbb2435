"""Dense complex matrix helpers and baseline spectral quantities.

Every public function accepts anything ``numpy.asarray`` understands and works
on ``complex128`` copies; inputs are never modified.
"""

import math
import warnings

import numpy as np

from .errors import (
    DimensionMismatch,
    GelfandOverflow,
    NonFiniteInput,
    SingularMatrix,
)

DEFAULT_TOL = 1e-12
SVD_MAX_DIM = 64
POWER_MAXITER = 10_000


class ConvergenceWarning(RuntimeWarning):
    pass


def as_matrix(A, name="matrix"):
    """Validate and return ``A`` as a square complex128 array."""
    M = np.asarray(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be square with n >= 1, got shape {M.shape}")
    M = M.astype(np.complex128)
    if not np.all(np.isfinite(M)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return M


def as_vector(x, name="vector"):
    v = np.asarray(x)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be 1-d and non-empty, got shape {v.shape}")
    v = v.astype(np.complex128)
    if not np.all(np.isfinite(v)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return v


def mat_mul(A, B):
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def adjoint(A):
    """Conjugate transpose."""
    return as_matrix(A).conj().T


def frobenius_norm(A):
    return float(np.linalg.norm(as_matrix(A), "fro"))


def _power_iteration(G, x, tol, maxiter):
    """Largest eigenvalue of the Hermitian PSD matrix ``G`` from start ``x``."""
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        return 0.0, True
    x = x / nrm
    lam = 0.0
    for _ in range(maxiter):
        y = G @ x
        lam_new = float(np.real(np.vdot(x, y)))
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0, True
        x = y / ny
        if abs(lam_new - lam) <= tol * abs(lam_new):
            return lam_new, True
        lam = lam_new
    return lam, False


def power_iteration_norm(A, tol=DEFAULT_TOL, maxiter=POWER_MAXITER, seed=0):
    """Largest singular value by power iteration on ``A* A``.

    Starts from the normalized all-ones vector and again from a seeded random
    vector, keeping the larger estimate; the second start guards against the
    ones vector being orthogonal to the dominant singular subspace.

    Returns ``(sigma_max, converged)``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    G = A.conj().T @ A
    rng = np.random.default_rng(seed)
    starts = [
        np.ones(n, dtype=np.complex128),
        rng.standard_normal(n) + 1j * rng.standard_normal(n),
    ]
    best, ok = 0.0, True
    for x0 in starts:
        lam, conv = _power_iteration(G, x0, tol, maxiter)
        if lam >= best:
            best, ok = lam, conv
    return math.sqrt(max(best, 0.0)), ok


def spectral_norm(A, tol=DEFAULT_TOL):
    """Largest singular value of ``A``.

    Full SVD for ``n <= 64``; power iteration on ``A* A`` above that. A
    power iteration that hits its cap emits :class:`ConvergenceWarning` and
    returns the best estimate.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = as_matrix(A)
    if A.shape[0] <= SVD_MAX_DIM:
        return float(np.linalg.svd(A, compute_uv=False)[0])
    value, converged = power_iteration_norm(A, tol)
    if not converged:
        warnings.warn(
            f"power iteration did not reach tol={tol:g}; returning {value!r}",
            ConvergenceWarning,
            stacklevel=2,
        )
    return value


def spectral_radius_gelfand(A, k=7):
    """Spectral radius estimate ``||A^(2^k)||_2^(1/2^k)`` by repeated squaring.

    Each squaring is preceded by a rescale to unit Frobenius norm; the scale
    is carried in log form so that contractive matrices do not underflow and
    expansive ones do not overflow.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    B = as_matrix(A)
    log_scale = 0.0
    for _ in range(k):
        s = np.linalg.norm(B, "fro")
        if s == 0.0:
            return 0.0
        B = B / s
        log_scale = 2.0 * (log_scale + math.log(s))
        B = B @ B
        if not np.all(np.isfinite(B)) or not math.isfinite(log_scale):
            raise GelfandOverflow("repeated squaring left the double range")
    top = float(np.linalg.svd(B, compute_uv=False)[0])
    if top == 0.0:
        return 0.0
    value = math.exp((log_scale + math.log(top)) / 2.0**k)
    if not math.isfinite(value):
        raise GelfandOverflow("spectral radius estimate is not finite")
    return value


def condition_number_2(A):
    """``sigma_max / sigma_min``; raises :class:`SingularMatrix` when the ratio
    is beyond what double precision can resolve."""
    A = as_matrix(A)
    s = np.linalg.svd(A, compute_uv=False)
    smax, smin = float(s[0]), float(s[-1])
    if smin == 0.0 or smin <= smax * A.shape[0] * np.finfo(float).eps:
        raise SingularMatrix(f"matrix is numerically singular (sigma_min={smin:g})")
    return smax / smin
