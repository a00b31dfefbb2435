"""Weighted spectral norms within epsilon of the spectral radius, with
certificates and a consensus-contraction harness."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConditioningExceeded,
    ContractionNormError,
    InvalidEpsilon,
    QRNoConvergence,
)
from .norm import (  # noqa: E402
    NormCertificate,
    WeightedNorm,
    construct_norm,
    matrix_norm,
    vector_norm,
    verify_certificate,
)
from .schur import SchurDecomposition, eigenvalues, schur_decompose  # noqa: E402

__all__ = [
    "ConditioningExceeded",
    "ContractionNormError",
    "InvalidEpsilon",
    "NormCertificate",
    "QRNoConvergence",
    "SchurDecomposition",
    "WeightedNorm",
    "construct_norm",
    "eigenvalues",
    "matrix_norm",
    "schur_decompose",
    "vector_norm",
    "verify_certificate",
]
