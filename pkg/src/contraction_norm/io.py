"""Matrix text files and certificate documents.

Matrix files hold one row per line with comma-separated complex literals
(``2``, ``-1.5e-3``, ``1i``, ``0.5-0.25i``). Blank lines and lines starting
with ``#`` are skipped. Certificates are JSON with sorted keys; matrices
inside them are stored as lists of row strings in the same literal syntax.
"""

import hashlib
import json
import math
import re
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import DimensionMismatch, MatrixSyntaxError, NonFiniteInput
from .linalg import as_matrix
from .norm import NormCertificate, WeightedNorm

CERTIFICATE_FORMAT = "contraction-norm-certificate/1"

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_IMAG = re.compile(rf"^(?P<sign>[+-]?)(?P<mag>{_NUM})?i$")
_COMPLEX = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<isign>[+-])(?P<im>{_NUM})?i)?$")


def parse_complex(token):
    """Parse one literal; raises ``ValueError`` on bad syntax."""
    s = re.sub(r"\s+", "", token)
    m = _IMAG.match(s)
    if m:
        im = float(m["mag"]) if m["mag"] else 1.0
        return complex(0.0, -im if m["sign"] == "-" else im)
    m = _COMPLEX.match(s)
    if not m:
        raise ValueError(f"not a complex literal: {token.strip()!r}")
    re_part = float(m["re"])
    im = 0.0
    if m["isign"]:
        im = float(m["im"]) if m["im"] else 1.0
        if m["isign"] == "-":
            im = -im
    return complex(re_part, im)


def _parse_rows(text):
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        row = []
        col = 1
        for token in line.split(","):
            lead = len(token) - len(token.lstrip())
            try:
                z = parse_complex(token)
            except ValueError as exc:
                raise MatrixSyntaxError(str(exc), lineno, col + lead) from None
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise NonFiniteInput(f"line {lineno}, column {col + lead}: literal overflows")
            row.append(z)
            col += len(token) + 1
        if rows and len(row) != len(rows[0][1]):
            raise MatrixSyntaxError(
                f"row has {len(row)} entries, expected {len(rows[0][1])}", lineno, 1
            )
        rows.append((lineno, row))
    if not rows:
        raise MatrixSyntaxError("no rows", 1, 1)
    return [r for _, r in rows]


def parse_matrix(text):
    rows = _parse_rows(text)
    if len(rows) != len(rows[0]):
        raise DimensionMismatch(f"matrix is {len(rows)}x{len(rows[0])}, not square")
    return np.array(rows, dtype=np.complex128)


def parse_vector(text):
    """A single row, or one entry per line."""
    rows = _parse_rows(text)
    if len(rows) == 1:
        return np.array(rows[0], dtype=np.complex128)
    if all(len(r) == 1 for r in rows):
        return np.array([r[0] for r in rows], dtype=np.complex128)
    raise DimensionMismatch("vector file must be one row or one column")


def format_complex(z):
    re_part, im = float(z.real), float(z.imag)
    if im == 0.0:
        return f"{re_part:.17g}"
    if re_part == 0.0:
        return f"{im:.17g}i"
    return f"{re_part:.17g}{im:+.17g}i"


def emit_matrix(M):
    M = as_matrix(M)
    return "".join(",".join(format_complex(z) for z in row) + "\n" for row in M)


def emit_vector(x):
    return ",".join(format_complex(z) for z in np.asarray(x, dtype=np.complex128)) + "\n"


def matrix_digest(A):
    return "sha256:" + hashlib.sha256(emit_matrix(A).encode()).hexdigest()


def _rows(M):
    return emit_matrix(M).splitlines()


def _unrows(rows):
    return parse_matrix("\n".join(rows))


def _num(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else float(x)


def emit_certificate(cert, W, A):
    """Deterministic JSON text for a certificate and the norm it describes."""
    doc = {
        "format": CERTIFICATE_FORMAT,
        "tool_version": __version__,
        "input_digest": matrix_digest(A),
        "source_dim": W.source_dim,
        "rho": _num(cert.rho),
        "norm_value": _num(cert.norm_value),
        "epsilon": _num(cert.epsilon),
        "t": _num(cert.t),
        "kappa": _num(cert.kappa),
        "delta_norm": _num(cert.delta_norm),
        "schur_residual": _num(cert.schur_residual),
        "rho_gelfand": _num(cert.rho_gelfand),
        "induced_max_ratio": _num(cert.induced_max_ratio),
        "witness_ratio": _num(cert.witness_ratio),
        "verified": bool(cert.verified),
        "checks": {k: bool(v) for k, v in cert.checks.items()},
        "U": _rows(W.U),
        "P": _rows(W.P),
        "P_inv": _rows(W.P_inv),
    }
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


@dataclass(frozen=True, eq=False)
class CertificateFile:
    certificate: NormCertificate
    norm: WeightedNorm
    input_digest: str
    tool_version: str
    P: np.ndarray
    P_inv: np.ndarray

    def factors_consistent(self):
        """Stored ``P`` and ``P_inv`` equal those rebuilt from ``U`` and ``t``."""
        return np.array_equal(self.P, self.norm.P) and np.array_equal(self.P_inv, self.norm.P_inv)


def _nan(x):
    return math.nan if x is None else float(x)


def load_certificate(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"certificate is not valid JSON: {exc}") from None
    if doc.get("format") != CERTIFICATE_FORMAT:
        raise ValueError(f"unknown certificate format {doc.get('format')!r}")
    try:
        W = WeightedNorm(_unrows(doc["U"]), float(doc["t"]), float(doc["epsilon"]), rho=_nan(doc["rho"]))
        cert = NormCertificate(
            rho=_nan(doc["rho"]),
            norm_value=_nan(doc["norm_value"]),
            epsilon=float(doc["epsilon"]),
            t=float(doc["t"]),
            kappa=_nan(doc["kappa"]),
            delta_norm=_nan(doc["delta_norm"]),
            schur_residual=_nan(doc["schur_residual"]),
            verified=bool(doc["verified"]),
            checks=dict(doc.get("checks", {})),
            rho_gelfand=_nan(doc.get("rho_gelfand")),
            induced_max_ratio=_nan(doc.get("induced_max_ratio")),
            witness_ratio=_nan(doc.get("witness_ratio")),
        )
        return CertificateFile(
            certificate=cert,
            norm=W,
            input_digest=doc["input_digest"],
            tool_version=doc["tool_version"],
            P=_unrows(doc["P"]),
            P_inv=_unrows(doc["P_inv"]),
        )
    except KeyError as exc:
        raise ValueError(f"certificate is missing field {exc}") from None
