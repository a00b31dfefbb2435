import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from contraction_norm.errors import QRNoConvergence
from contraction_norm.linalg import frobenius_norm, spectral_radius_gelfand
from contraction_norm.schur import eigenvalues, hessenberg_reduce, schur_decompose
from helpers import ginibre, random_conditioned, random_unitary


def match_multisets(a, b):
    """Largest distance after greedy nearest pairing."""
    b = list(b)
    worst = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b.pop(k)))
    return worst


class TestHessenberg:
    def test_upper_triangular_is_untouched(self, rng):
        A = np.triu(ginibre(rng, 5))
        Q, H = hessenberg_reduce(A)
        assert np.array_equal(Q, np.eye(5))
        assert np.array_equal(H, A)

    def test_two_by_two_is_untouched(self, rng):
        A = ginibre(rng, 2)
        Q, H = hessenberg_reduce(A)
        assert np.array_equal(Q, np.eye(2))
        assert np.array_equal(H, A)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_residual(self, seed):
        rng = np.random.default_rng(seed)
        A = ginibre(rng, 5, 1.0)
        Q, H = hessenberg_reduce(A)
        nA = frobenius_norm(A)
        assert frobenius_norm(A - Q @ H @ Q.conj().T) / nA <= 1e-12
        assert frobenius_norm(Q @ Q.conj().T - np.eye(5)) <= 1e-13
        assert np.max(np.abs(np.tril(H, -2))) <= 1e-14 * nA


class TestSchurExamples:
    def test_diagonal(self):
        S = schur_decompose(np.diag([1, 2j]))
        assert sorted(S.eigenvalues, key=abs) == [1, 2j]
        assert abs(S.Delta[0, 1]) <= 1e-12

    def test_nilpotent_already_triangular(self):
        A = np.array([[0, 1], [0, 0]], dtype=complex)
        S = schur_decompose(A)
        assert np.array_equal(S.U, np.eye(2))
        assert np.array_equal(S.Delta, A)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_six_against_gelfand(self, seed):
        rng = np.random.default_rng(seed)
        A = ginibre(rng, 6)
        S = schur_decompose(A)
        rho = np.max(np.abs(S.eigenvalues))
        g = spectral_radius_gelfand(A, 7)
        assert abs(rho - g) <= 0.05 * g

    def test_zero_matrix(self):
        S = schur_decompose(np.zeros((3, 3)))
        assert np.array_equal(S.Delta, np.zeros((3, 3)))
        assert S.residual == 0.0

    def test_one_by_one(self):
        S = schur_decompose([[2 - 1j]])
        assert S.Delta[0, 0] == 2 - 1j

    def test_convention_delta_equals_uau_star(self, rng):
        A = ginibre(rng, 6)
        S = schur_decompose(A)
        assert_allclose(S.U @ A @ S.U.conj().T, S.Delta, atol=1e-12)

    def test_no_convergence_carries_partial(self):
        # cyclic permutation: the Wilkinson shift is 0 and unshifted QR maps
        # the matrix to itself; a budget of 9 sweeps ends before the first
        # exceptional shift
        C = np.roll(np.eye(3), 1, axis=0)
        with pytest.raises(QRNoConvergence) as info:
            schur_decompose(C, max_sweeps=1)
        assert info.value.partial.Delta.shape == (3, 3)

    def test_exceptional_shift_breaks_cycle(self):
        C = np.roll(np.eye(3), 1, axis=0)
        spectrum = eigenvalues(C)
        roots = np.exp(2j * np.pi * np.arange(3) / 3)
        assert match_multisets(spectrum.eigenvalues, roots) <= 1e-12

    def test_deterministic(self, rng):
        A = ginibre(rng, 7)
        a, b = schur_decompose(A), schur_decompose(A)
        assert np.array_equal(a.U, b.U) and np.array_equal(a.Delta, b.Delta)

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            schur_decompose(np.eye(2), tol=0.0)


class TestEigenvalues:
    def test_companion_of_z2_minus_1(self):
        # roots of z^2 - 1 are +1 and -1
        spectrum = eigenvalues([[0, 1], [1, 0]])
        assert match_multisets(spectrum.eigenvalues, [1, -1]) <= 1e-14
        assert spectrum.rho == pytest.approx(1.0, rel=1e-14)

    def test_triangular(self, rng):
        T = np.triu(ginibre(rng, 5))
        assert np.array_equal(eigenvalues(T).eigenvalues, np.diag(T))

    @pytest.mark.parametrize("seed", range(5))
    def test_unitary_similarity(self, seed):
        rng = np.random.default_rng(seed)
        A = ginibre(rng, 6)
        V = random_unitary(rng, 6)
        ea = eigenvalues(A).eigenvalues
        eb = eigenvalues(V @ A @ V.conj().T).eigenvalues
        assert match_multisets(ea, eb) <= 1e-8

    def test_rho_is_max_modulus(self, rng):
        spectrum = eigenvalues(ginibre(rng, 5))
        assert spectrum.rho == np.max(np.abs(spectrum.eigenvalues))


class TestSchurProperties:
    @pytest.mark.parametrize("seed", range(30))
    def test_reconstruction_unitarity_triangularity(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 33))
        A = ginibre(rng, n, 1.0)
        if seed % 3 == 0:
            A = A.real
        S = schur_decompose(A)
        nA = frobenius_norm(A)
        recon = frobenius_norm(A - S.U.conj().T @ S.Delta @ S.U)
        assert recon <= 1e-9 * max(1.0, nA)
        assert S.residual <= 1e-9
        assert frobenius_norm(S.U @ S.U.conj().T - np.eye(n)) <= 1e-10 * n
        assert np.max(np.abs(np.tril(S.Delta, -1)), initial=0.0) <= 1e-10 * frobenius_norm(S.Delta)
        assert abs(np.sum(S.eigenvalues) - np.trace(A)) <= 1e-9 * n * nA

    @pytest.mark.parametrize("seed", range(15))
    def test_similarity_invariance(self, seed):
        rng = np.random.default_rng(500 + seed)
        n = int(rng.integers(2, 9))
        A = ginibre(rng, n)
        S = random_conditioned(rng, n, 10.0)
        ea = eigenvalues(A).eigenvalues
        eb = eigenvalues(S @ A @ np.linalg.inv(S)).eigenvalues
        assert match_multisets(ea, eb) <= 1e-6

    @pytest.mark.parametrize("seed", range(15))
    def test_normal_matrix_has_diagonal_schur_form(self, seed):
        rng = np.random.default_rng(700 + seed)
        n = int(rng.integers(2, 12))
        V = random_unitary(rng, n)
        A = V @ np.diag(rng.standard_normal(n) + 1j * rng.standard_normal(n)) @ V.conj().T
        assert frobenius_norm(A @ A.conj().T - A.conj().T @ A) <= 1e-12 * max(1, frobenius_norm(A)) ** 2
        S = schur_decompose(A)
        assert frobenius_norm(np.triu(S.Delta, 1)) <= 1e-8 * frobenius_norm(A)

    @pytest.mark.parametrize("seed", range(10))
    def test_eigenvalues_match_lapack(self, seed):
        rng = np.random.default_rng(900 + seed)
        n = int(rng.integers(2, 16))
        A = ginibre(rng, n)
        ours = eigenvalues(A).eigenvalues
        theirs = np.linalg.eigvals(A)
        assert match_multisets(ours, theirs) <= 1e-9 * math.sqrt(n)
