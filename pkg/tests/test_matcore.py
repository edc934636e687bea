import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectra.exceptions import DefectivePair, LengthMismatch, NotAnEigenvalue, ShapeMismatch
from spectra.matcore import (
    eigenvalues,
    locate_pair,
    matadd,
    matmul,
    permutation_matrix,
    permute_similarity,
    real_pair_eigenvectors,
    spectrum_difference,
    spectrum_match,
    transpose,
)

CYCLIC = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
# cube roots of unity from the factorisation x^3 - 1 = (x - 1)(x^2 + x + 1)
CUBE_ROOTS = np.array([1.0, complex(-0.5, math.sqrt(3) / 2), complex(-0.5, -math.sqrt(3) / 2)])


def test_identity_spectrum():
    assert spectrum_match(eigenvalues(np.eye(3)), [1, 1, 1], 1e-12)


def test_cyclic_spectrum_is_cube_roots():
    assert spectrum_match(eigenvalues(CYCLIC), CUBE_ROOTS, 1e-12)


def test_triangular_spectrum():
    assert spectrum_match(eigenvalues([[2.0, 1.0], [0.0, 3.0]]), [2, 3], 1e-12)


def test_eigenvalues_rejects_non_square():
    with pytest.raises(ShapeMismatch):
        eigenvalues(np.ones((2, 3)))


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_trace_and_determinant(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        A = rng.normal(size=(n, n))
        w = eigenvalues(A)
        scale = 1 + np.linalg.norm(A)
        assert abs(w.sum() - np.trace(A)) <= 1e-8 * scale
        det = np.linalg.det(A)
        assert abs(np.prod(w) - det) <= 1e-6 * max(abs(det), 1e-12) + 1e-12 * scale**n
        # real input: non-real values come in conjugate pairs
        assert spectrum_match(w, np.conj(w), 1e-10 * scale)


def test_pair_eigenvectors_cyclic_residual():
    b, c = -0.5, math.sqrt(3) / 2
    u, v = real_pair_eigenvectors(CYCLIC, b, c)
    UV = np.column_stack([u, v])
    resid = np.linalg.norm(CYCLIC @ UV - UV @ np.array([[b, c], [-c, b]]))
    assert resid < 1e-10
    assert np.dot(u, u) + np.dot(v, v) == pytest.approx(1.0, abs=1e-14)
    assert np.linalg.matrix_rank(UV) == 2


@pytest.mark.parametrize("b,c", [(0.3, 1.7), (-2.0, -0.5)])
def test_pair_eigenvectors_of_rotation_block(b, c):
    A = np.array([[b, c], [-c, b]])
    u, v = real_pair_eigenvectors(A, b, c)
    UV = np.column_stack([u, v])
    assert np.linalg.matrix_rank(UV) == 2
    assert np.linalg.norm(A @ UV - UV @ A) < 1e-12


def test_pair_eigenvectors_rejects_non_eigenvalue():
    with pytest.raises(NotAnEigenvalue):
        real_pair_eigenvectors(np.eye(3), 1.0, 0.5)


def test_pair_eigenvectors_rejects_repeated_pair():
    R = np.array([[0.0, 1.0], [-1.0, 0.0]])
    A = np.block([[R, np.zeros((2, 2))], [np.zeros((2, 2)), R]])
    with pytest.raises(DefectivePair):
        real_pair_eigenvectors(A, 0.0, 1.0)


def test_pair_eigenvectors_random_matrices():
    rng = np.random.default_rng(5)
    for n in range(2, 9):
        A = rng.random(size=(n, n))
        for lam in eigenvalues(A):
            if lam.imag > 1e-3:
                u, v = real_pair_eigenvectors(A, lam.real, lam.imag)
                UV = np.column_stack([u, v])
                blk = np.array([[lam.real, lam.imag], [-lam.imag, lam.real]])
                assert np.linalg.norm(A @ UV - UV @ blk) <= 1e-8 * (1 + np.linalg.norm(A)) * np.linalg.norm(UV)


def test_locate_pair_snaps_and_keeps_sign():
    lam = locate_pair(CYCLIC, -0.5, 0.866, tol=1e-3)
    assert lam == pytest.approx(CUBE_ROOTS[1], abs=1e-14)
    assert locate_pair(CYCLIC, -0.5, -0.866, tol=1e-3).imag < 0
    with pytest.raises(NotAnEigenvalue):
        locate_pair(CYCLIC, 0.0, 2.0)


def test_match_permutation():
    assert spectrum_match([1, 1j, -1j], [-1j, 1, 1j], 1e-12)


def test_match_distance_exceeds_tol():
    assert not spectrum_match([1, 1], [1, 1 + 1e-3], 1e-6)


def test_match_is_not_greedy():
    # greedy nearest-first pairs 0.05 with 0.06 and strands 0.12 at distance 0.12
    S1 = [0.05, 0.12]
    S2 = [0.06, 0.0]
    assert spectrum_match(S1, S2, 0.07)


def test_match_report_pairs():
    rep = spectrum_match([3, 1], [1, 3], 1e-12, report=True)
    assert rep.matched and sorted(rep.pairs) == [(0, 1), (1, 0)]


def test_match_length_mismatch():
    with pytest.raises(LengthMismatch):
        spectrum_match([1, 2], [1], 1.0)


complexes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(complexes, complexes), min_size=1, max_size=8), st.floats(1e-6, 5))
def test_match_symmetric(pairs, tol):
    S1 = [a for a, _ in pairs]
    S2 = [b for _, b in pairs]
    assert spectrum_match(S1, S2, tol) == spectrum_match(S2, S1, tol)


@settings(max_examples=100, deadline=None)
@given(st.lists(complexes, min_size=1, max_size=8), st.randoms(use_true_random=False))
def test_match_order_independent(S, rnd):
    T = list(S)
    rnd.shuffle(T)
    assert spectrum_match(S, T, 1e-12)


def test_spectrum_difference():
    rest = spectrum_difference([1, 2, 2, 3j], [2, 3j], 1e-9)
    assert spectrum_match(rest, [1, 2], 1e-12)
    with pytest.raises(LengthMismatch):
        spectrum_difference([1, 2], [5], 1e-9)


def test_permute_similarity_identity_and_spectrum():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(5, 5))
    assert np.array_equal(permute_similarity(A, np.eye(5)), A)
    Q = permutation_matrix([2, 0, 4, 1, 3])
    B = permute_similarity(A, Q)
    assert np.allclose(B, Q @ A @ Q.T, atol=0)
    assert spectrum_match(eigenvalues(A), eigenvalues(B), 1e-10 * (1 + np.linalg.norm(A)))


def test_matrix_arithmetic_wrappers():
    A = np.arange(6.0).reshape(2, 3)
    assert np.array_equal(transpose(transpose(A)), A)
    assert np.array_equal(matmul(A, transpose(A)), A @ A.T)
    assert np.array_equal(matadd(A, A), 2 * A)
    with pytest.raises(ShapeMismatch):
        matmul(A, A)
    with pytest.raises(ShapeMismatch):
        matadd(A, A.T)
    with pytest.raises(ShapeMismatch):
        permute_similarity(np.eye(2), np.array([[1.0, 1.0], [0.0, 0.0]]))
