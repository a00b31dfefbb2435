import json

import hypothesis.extra.numpy as hnp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from contraction_norm import io
from contraction_norm.errors import DimensionMismatch, MatrixSyntaxError, NonFiniteInput
from contraction_norm.norm import construct_norm, verify_certificate
from helpers import ginibre, jordan_block

entries = st.complex_numbers(allow_nan=False, allow_infinity=False, allow_subnormal=True)


class TestParseComplex:
    @pytest.mark.parametrize(
        "text, value",
        [
            ("2", 2),
            ("-1.5e-3", -1.5e-3),
            ("1i", 1j),
            ("i", 1j),
            ("-i", -1j),
            ("0.5-0.25i", 0.5 - 0.25j),
            ("3+i", 3 + 1j),
            (" 4 - 2i ", 4 - 2j),
            (".5", 0.5),
            ("1e2+1e-2i", 100 + 0.01j),
        ],
    )
    def test_literals(self, text, value):
        assert io.parse_complex(text) == value

    @pytest.mark.parametrize("text", ["", "abc", "1+", "1j", "2ii", "1,2", "--1"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            io.parse_complex(text)


class TestParseMatrix:
    def test_basic(self):
        M = io.parse_matrix("1, 2i\n# comment\n\n-3, 0.5-0.5i\n")
        assert np.array_equal(M, [[1, 2j], [-3, 0.5 - 0.5j]])
        assert M.dtype == np.complex128

    def test_syntax_error_location(self):
        with pytest.raises(MatrixSyntaxError) as info:
            io.parse_matrix("1, 2\n3,  x4\n")
        assert (info.value.line, info.value.column) == (2, 5)

    def test_ragged(self):
        with pytest.raises(MatrixSyntaxError) as info:
            io.parse_matrix("1, 2\n3\n")
        assert info.value.line == 2

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            io.parse_matrix("1, 2\n")

    def test_empty(self):
        with pytest.raises(MatrixSyntaxError):
            io.parse_matrix("# nothing\n")

    def test_overflowing_literal(self):
        with pytest.raises(NonFiniteInput):
            io.parse_matrix("1e400\n")

    def test_vector_row_and_column(self):
        assert np.array_equal(io.parse_vector("1, 2, 3i\n"), [1, 2, 3j])
        assert np.array_equal(io.parse_vector("1\n2\n3i\n"), [1, 2, 3j])
        with pytest.raises(DimensionMismatch):
            io.parse_vector("1, 2\n3, 4\n")


class TestRoundTrip:
    @given(st.integers(1, 5).flatmap(lambda n: hnp.arrays(np.complex128, (n, n), elements=entries)))
    def test_matrix_is_lossless(self, M):
        assert np.array_equal(io.parse_matrix(io.emit_matrix(M)), M)

    @given(hnp.arrays(np.complex128, st.integers(1, 6), elements=entries))
    def test_vector_is_lossless(self, x):
        assert np.array_equal(io.parse_vector(io.emit_vector(x)), x)

    def test_format_examples(self):
        assert io.format_complex(2.0) == "2"
        assert io.format_complex(-1j) == "-1i"
        assert io.format_complex(0.5 - 0.25j) == "0.5-0.25i"

    def test_digest_is_stable(self):
        A = np.eye(2)
        assert io.matrix_digest(A) == io.matrix_digest(np.eye(2, dtype=complex))
        assert io.matrix_digest(A) != io.matrix_digest(2 * A)


def build(A, eps, trials=50):
    W, _ = construct_norm(A, eps)
    cert = verify_certificate(W, A, trials=trials)
    return W, cert, io.emit_certificate(cert, W, A)


class TestCertificate:
    def test_round_trip(self, rng):
        A = ginibre(rng, 4)
        W, cert, text = build(A, 0.1)
        cf = io.load_certificate(text)
        assert cf.certificate == cert
        assert np.array_equal(cf.norm.U, W.U) and cf.norm.t == W.t
        assert cf.factors_consistent()
        assert cf.input_digest == io.matrix_digest(A)

    def test_emission_is_deterministic(self, rng):
        A = ginibre(rng, 3)
        assert build(A, 0.1)[2] == build(A, 0.1)[2]

    def test_keys_sorted(self, rng):
        text = build(ginibre(rng, 3), 0.1)[2]
        doc = json.loads(text)
        assert list(doc) == sorted(doc)
        assert doc["format"] == io.CERTIFICATE_FORMAT

    def test_identity(self):
        _, cert, text = build(np.eye(3), 0.1)
        doc = json.loads(text)
        assert doc["rho"] == pytest.approx(1.0, rel=1e-14)
        assert doc["norm_value"] == pytest.approx(1.0, rel=1e-14)
        assert doc["t"] == 1.0 and doc["verified"] is True

    def test_tampered_factor_detected(self):
        A = jordan_block(3, 0.5)
        _, _, text = build(A, 0.1)
        doc = json.loads(text)
        doc["P"][0] = doc["P"][0].replace(doc["P"][0].split(",")[0], "7", 1)
        cf = io.load_certificate(json.dumps(doc))
        assert not cf.factors_consistent()

    def test_bad_documents(self):
        with pytest.raises(ValueError):
            io.load_certificate("not json")
        with pytest.raises(ValueError):
            io.load_certificate(json.dumps({"format": "other"}))
        with pytest.raises(ValueError):
            io.load_certificate(json.dumps({"format": io.CERTIFICATE_FORMAT}))
