"""Weighted spectral norms that approximate the spectral radius.

For a Schur form ``A = U* Delta U`` and ``D_t = diag(t, t^2, ..., t^n)`` the
norm ``||M|| = ||D_t U M U^{-1} D_t^{-1}||_2`` is induced by the vector norm
``||x|| = ||D_t U x||_2``. On ``A`` itself it equals ``||D_t Delta D_t^{-1}||_2``,
whose strictly upper part shrinks like ``1/t``; choosing ``t`` large enough
brings the norm within ``epsilon`` of the spectral radius.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _compensated as cp
from .errors import (
    ConditioningExceeded,
    DimensionMismatch,
    InvalidEpsilon,
    NotTriangular,
    ScalingOverflow,
)
from .linalg import as_matrix, as_vector, frobenius_norm, spectral_norm, spectral_radius_gelfand
from .schur import eigenvalues, schur_decompose

MARGIN = 0.01
MAX_KAPPA = 1e12
T_REL_PRECISION = 1e-3
CERTIFICATE_SLACK = 1e-8
NEGLIGIBLE_UPPER = 1e-14
TRIANGULAR_TOL = 1e-10
GELFAND_K = 12
GELFAND_AGREEMENT = 0.05
INDUCED_TOL = 1e-10
WITNESS_TOL = 1e-8

_LOG_MAX = math.log(np.finfo(float).max)


def _check_epsilon(epsilon):
    if not (isinstance(epsilon, (int, float, np.floating)) and epsilon > 0 and math.isfinite(epsilon)):
        raise InvalidEpsilon(f"epsilon must be a finite positive number, got {epsilon!r}")


def scaling_kappa(t, n):
    """Condition number of ``diag(t, ..., t^n)``: ``max(t, 1/t)^(n-1)``."""
    base = t if t >= 1.0 else 1.0 / t
    try:
        return base ** (n - 1)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class ScalingMatrix:
    """``D_t = diag(t, t^2, ..., t^n)``, materialized on demand."""

    t: float
    n: int

    def diagonal(self):
        return self.t ** np.arange(1, self.n + 1, dtype=float)

    def inverse_diagonal(self):
        return self.t ** -np.arange(1, self.n + 1, dtype=float)

    def matrix(self):
        return np.diag(self.diagonal())

    def inverse(self):
        return np.diag(self.inverse_diagonal())


def scaling_matrix(t, n):
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"t must be positive and finite, got {t!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n * abs(math.log(t)) >= _LOG_MAX:
        raise ScalingOverflow(t, n)
    return ScalingMatrix(float(t), int(n))


def _check_triangular(Delta):
    lower = np.abs(np.tril(Delta, -1))
    if lower.size and lower.max() > TRIANGULAR_TOL * max(frobenius_norm(Delta), np.finfo(float).tiny):
        raise NotTriangular(f"lower triangle has magnitude {lower.max():.3g}")


def scaled_triangular(Delta, t):
    """``D_t Delta D_t^{-1}`` for upper-triangular ``Delta``.

    Entry ``(i, j)`` is ``t^(i-j) * Delta[i, j]``, formed entrywise so that
    no power of ``t`` larger than ``t^(n-1)`` ever appears.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    Delta = as_matrix(Delta, "Delta")
    _check_triangular(Delta)
    out = np.triu(Delta)
    i, j = np.triu_indices(Delta.shape[0], 1)
    out[i, j] = Delta[i, j] * float(t) ** (i - j).astype(float)
    return out


def offdiagonal_part(Delta_tilde):
    """Strict upper triangle; adding back the diagonal reconstructs the input."""
    return np.triu(as_matrix(Delta_tilde), 1)


def diagonal_part(Delta_tilde):
    return np.diag(np.diag(as_matrix(Delta_tilde)))


def offdiagonal_norm(Delta, t):
    return spectral_norm(offdiagonal_part(scaled_triangular(Delta, t)))


def select_t(Delta, epsilon, margin=MARGIN, max_kappa=MAX_KAPPA, rel_precision=T_REL_PRECISION):
    """Smallest ``t >= 1`` with ``||offdiag(D_t Delta D_t^{-1})||_2 < epsilon*(1-margin)``.

    The Frobenius bound gives a feasible ``t0 = ||strict_upper(Delta)||_F /
    (epsilon*(1-margin))``; the off-diagonal norm decreases monotonically in
    ``t``, so bisection on ``[1, t0]`` (geometric midpoints, relative width
    ``rel_precision``) finds the minimum. Returns ``(t, delta_norm)``.
    """
    _check_epsilon(epsilon)
    Delta = as_matrix(Delta, "Delta")
    _check_triangular(Delta)
    n = Delta.shape[0]
    target = epsilon * (1.0 - margin)
    upper = frobenius_norm(offdiagonal_part(Delta))
    if upper <= NEGLIGIBLE_UPPER * frobenius_norm(Delta):
        return 1.0, offdiagonal_norm(Delta, 1.0)

    f_lo = offdiagonal_norm(Delta, 1.0)
    if f_lo < target:
        t, delta_norm = 1.0, f_lo
    else:
        hi = max(1.0, upper / target)
        scaling_matrix(hi, n)
        f_hi = offdiagonal_norm(Delta, hi)
        while not f_hi < target:
            hi *= 1.0 + rel_precision
            scaling_matrix(hi, n)
            f_hi = offdiagonal_norm(Delta, hi)
        lo = 1.0
        while hi > lo * (1.0 + rel_precision):
            mid = math.sqrt(lo * hi)
            f_mid = offdiagonal_norm(Delta, mid)
            if f_mid < target:
                hi, f_hi = mid, f_mid
            else:
                lo = mid
        t, delta_norm = hi, f_hi

    scaling_matrix(t, n)
    kappa = scaling_kappa(t, n)
    if kappa > max_kappa:
        raise ConditioningExceeded(t, kappa, max_kappa)
    return t, delta_norm


@dataclass(frozen=True, eq=False)
class WeightedNorm:
    """The norm ``||x|| = ||P x||_2`` with ``P = D_t U``, and its induced
    matrix norm ``||M|| = ||P M P^{-1}||_2``.

    ``P`` and ``P_inv = U* D_t^{-1}`` are materialized for inspection and
    serialization. Evaluations go through the factors instead: ``U x`` and
    ``U M U^{-1}`` are formed in double-double arithmetic before the diagonal
    scaling, which otherwise amplifies rounding by up to ``kappa``.
    """

    U: np.ndarray
    t: float
    epsilon: float
    rho: float = math.nan
    P: np.ndarray = field(init=False, repr=False)
    P_inv: np.ndarray = field(init=False, repr=False)
    kappa: float = field(init=False)
    source_dim: int = field(init=False)

    def __post_init__(self):
        U = as_matrix(self.U, "U")
        n = U.shape[0]
        D = scaling_matrix(self.t, n)
        d, dinv = D.diagonal(), D.inverse_diagonal()
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "P", d[:, None] * U)
        object.__setattr__(self, "P_inv", U.conj().T * dinv[None, :])
        object.__setattr__(self, "kappa", scaling_kappa(self.t, n))
        object.__setattr__(self, "source_dim", n)
        object.__setattr__(self, "_d", d)
        object.__setattr__(self, "_dinv", dinv)
        object.__setattr__(self, "_U_dd", cp.as_dd(U))
        object.__setattr__(self, "_Uinv_dd", cp.unitary_inverse(U))

    def _check_dim(self, k, what):
        if k != self.source_dim:
            raise DimensionMismatch(f"{what} has dimension {k}, norm expects {self.source_dim}")

    def transform(self, M):
        """``P M P^{-1}`` (evaluated through the factors)."""
        M = as_matrix(M)
        self._check_dim(M.shape[0], "matrix")
        UM = cp.dd_matmul(self._U_dd, cp.as_dd(M))
        C = cp.dd_value(cp.dd_matmul(UM, self._Uinv_dd))
        i, j = np.indices(C.shape)
        return C * self.t ** (i - j).astype(float)

    def apply(self, X):
        """``P X`` for a vector or a matrix of column vectors."""
        X = np.asarray(X, dtype=np.complex128)
        self._check_dim(X.shape[0], "vector")
        Y = cp.dd_value(cp.dd_matmul(self._U_dd, cp.as_dd(X)))
        return Y * (self._d if Y.ndim == 1 else self._d[:, None])

    def apply_inverse_dd(self, y):
        """``P^{-1} y`` as a double-double pair; rounding it to double would
        perturb its weighted length by up to ``kappa * eps``."""
        y = as_vector(y)
        self._check_dim(y.shape[0], "vector")
        return cp.dd_matmul(self._Uinv_dd, cp.as_dd(y * self._dinv))

    def length_dd(self, x_dd):
        """Weighted length of a double-double vector."""
        return float(np.linalg.norm(self._d * cp.dd_value(cp.dd_matmul(self._U_dd, x_dd))))

    def matrix_norm(self, M):
        return spectral_norm(self.transform(M))

    def vector_norm(self, x):
        x = as_vector(x)
        return float(np.linalg.norm(self.apply(x)))


def matrix_norm(W, M):
    return W.matrix_norm(M)


def vector_norm(W, x):
    return W.vector_norm(x)


def sandwich_holds(rho, norm_value, epsilon):
    slack = CERTIFICATE_SLACK * max(1.0, rho)
    return rho - slack <= norm_value <= rho + epsilon + slack


@dataclass(frozen=True)
class NormCertificate:
    """Numeric record of the check ``rho <= ||A|| <= rho + epsilon``.

    ``checks`` names every test that was run; ``verified`` is their
    conjunction. :func:`construct_norm` runs only ``sandwich``;
    :func:`verify_certificate` adds the Gelfand cross-check and the two
    induced-norm checks.
    """

    rho: float
    norm_value: float
    epsilon: float
    t: float
    kappa: float
    delta_norm: float
    schur_residual: float
    verified: bool
    checks: dict = field(default_factory=dict)
    rho_gelfand: float = math.nan
    induced_max_ratio: float = math.nan
    witness_ratio: float = math.nan


def construct_norm(A, epsilon, max_kappa=MAX_KAPPA, margin=MARGIN):
    """Build the weighted norm for ``A`` and certify the sandwich bound.

    Returns ``(WeightedNorm, NormCertificate)``.
    """
    _check_epsilon(epsilon)
    A = as_matrix(A)
    S = schur_decompose(A)
    rho = float(np.max(np.abs(S.eigenvalues)))
    t, delta_norm = select_t(S.Delta, epsilon, margin=margin, max_kappa=max_kappa)
    W = WeightedNorm(S.U, t, float(epsilon), rho=rho)
    value = W.matrix_norm(A)
    ok = sandwich_holds(rho, value, epsilon)
    cert = NormCertificate(
        rho=rho,
        norm_value=value,
        epsilon=float(epsilon),
        t=t,
        kappa=W.kappa,
        delta_norm=delta_norm,
        schur_residual=S.residual,
        verified=ok,
        checks={"sandwich": ok},
    )
    return W, cert


def verify_certificate(W, A, trials=1000, seed=0, gelfand_k=GELFAND_K):
    """Re-derive every claim about ``W`` on ``A`` from scratch.

    Recomputes the spectral radius from a fresh Schur form and from the
    Gelfand oracle, re-evaluates the norm, checks the sandwich, bounds
    ``||A x|| / ||x||`` over ``trials`` seeded random vectors, and checks the
    supremum is attained at the mapped-back top singular vector. Failures are
    recorded, never raised.
    """
    A = as_matrix(A)
    W._check_dim(A.shape[0], "matrix")
    n = A.shape[0]
    S = schur_decompose(A)
    rho = float(np.max(np.abs(S.eigenvalues)))
    rho_g = spectral_radius_gelfand(A, gelfand_k)

    B = W.transform(A)
    _, sv, Vh = np.linalg.svd(B)
    value = float(sv[0])

    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, trials)) + 1j * rng.standard_normal((n, trials))
    num = np.linalg.norm(W.apply(A @ X), axis=0)
    den = np.linalg.norm(W.apply(X), axis=0)
    max_ratio = float(np.max(num / den)) if trials else 0.0

    x_star = W.apply_inverse_dd(Vh[0].conj())
    Ax_star = cp.dd_matmul(cp.as_dd(A), x_star)
    den_star = W.length_dd(x_star)
    witness = W.length_dd(Ax_star) / den_star if den_star > 0 else 0.0

    checks = {
        "sandwich": sandwich_holds(rho, value, W.epsilon),
        "gelfand": abs(rho_g - rho) <= GELFAND_AGREEMENT * max(1.0, rho),
        "induced_bound": max_ratio <= value * (1.0 + INDUCED_TOL),
        "witness": witness >= value * (1.0 - WITNESS_TOL),
    }
    delta_norm = offdiagonal_norm(S.Delta, W.t)
    return NormCertificate(
        rho=rho,
        norm_value=value,
        epsilon=W.epsilon,
        t=W.t,
        kappa=W.kappa,
        delta_norm=delta_norm,
        schur_residual=S.residual,
        verified=all(checks.values()),
        checks=checks,
        rho_gelfand=rho_g,
        induced_max_ratio=max_ratio,
        witness_ratio=witness,
    )

