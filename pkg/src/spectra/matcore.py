"""Dense real matrix helpers, eigen-solvers and multiset spectrum comparison.

Matrices are plain ``numpy.ndarray`` objects (float64, validated on entry);
spectra are 1-D complex arrays whose order carries no meaning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .exceptions import (
    DefectivePair,
    LengthMismatch,
    NonConvergence,
    NotAnEigenvalue,
    ShapeMismatch,
)
from .validation import check_matrix, matrix_scale

__all__ = [
    "eigenvalues",
    "locate_pair",
    "real_pair_eigenvectors",
    "spectrum_match",
    "spectrum_difference",
    "MatchReport",
    "matmul",
    "matadd",
    "transpose",
    "permutation_matrix",
    "permute_similarity",
]


def eigenvalues(A) -> np.ndarray:
    """All eigenvalues of a square real matrix, with algebraic multiplicity.

    Uses LAPACK's Hessenberg reduction followed by shifted QR (``geev``).
    Conjugate pairs are symmetrised so that a real input always yields a
    spectrum that is exactly closed under conjugation.

    Raises
    ------
    NonConvergence
        If the QR iteration fails to converge.
    """
    A = check_matrix(A)
    try:
        w = scipy.linalg.eigvals(A, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"eigenvalue iteration did not converge: {exc}") from None
    return _symmetrise_conjugates(np.asarray(w, dtype=complex))


def _symmetrise_conjugates(w: np.ndarray) -> np.ndarray:
    # geev returns pairs as adjacent (a+ib, a-ib); make them exact conjugates.
    w = w.copy()
    i = 0
    while i < len(w):
        if w[i].imag != 0 and i + 1 < len(w) and np.isclose(w[i + 1], np.conj(w[i]), rtol=1e-12, atol=0):
            mid = 0.5 * (w[i] + np.conj(w[i + 1]))
            w[i], w[i + 1] = mid, np.conj(mid)
            i += 2
        else:
            i += 1
    return w


def locate_pair(A, b: float, c: float, tol: float | None = None) -> complex:
    """Snap an approximate eigenvalue ``b + ic`` to the nearest computed one.

    The sign of ``c`` is kept: asking for ``b - ic`` returns the member of
    the pair with negative imaginary part.

    Parameters
    ----------
    tol : float, optional
        Detection tolerance on ``|lambda - (b + ic)|``. Defaults to
        ``1e-6 * (1 + ||A||)``.

    Raises
    ------
    NotAnEigenvalue
        If no eigenvalue lies within ``tol``.
    """
    A = check_matrix(A)
    if tol is None:
        tol = 1e-6 * matrix_scale(A)
    target = complex(b, c)
    w = eigenvalues(A)
    k = int(np.argmin(np.abs(w - target)))
    if abs(w[k] - target) > tol:
        raise NotAnEigenvalue(
            f"{target} is not an eigenvalue of A (closest {w[k]}, distance {abs(w[k] - target):.3e} > {tol:.3e})"
        )
    lam = w[k]
    if c != 0 and np.sign(lam.imag) != np.sign(c):
        lam = np.conj(lam)
    return complex(lam)


def _check_simple(A: np.ndarray, lam: complex, scale: float) -> None:
    w = eigenvalues(A)
    cluster = np.abs(w - lam) <= 1e-6 * scale
    if np.count_nonzero(cluster) > 1:
        raise DefectivePair(f"eigenvalue {lam} is repeated (multiplicity {np.count_nonzero(cluster)})")
    n = A.shape[0]
    sv = scipy.linalg.svdvals(A - lam * np.eye(n))
    # sv is descending; sv[-1] ~ 0 for an eigenvalue, sv[-2] must stay clear of 0
    if n >= 2 and sv[-2] <= 1e-8 * scale:
        raise DefectivePair(f"eigenvalue {lam} has a multi-dimensional eigenspace")


def _inverse_iteration(A: np.ndarray, lam: complex, rng: np.random.Generator, scale: float, steps: int = 3):
    n = A.shape[0]
    shift = lam + 1e-10 * scale * (1 + 1j)
    lu = scipy.linalg.lu_factor(A - shift * np.eye(n), check_finite=False)
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w /= np.linalg.norm(w)
    for _ in range(steps):
        w = scipy.linalg.lu_solve(lu, w, check_finite=False)
        nrm = np.linalg.norm(w)
        if not np.isfinite(nrm) or nrm == 0:
            return None
        w /= nrm
    return w


def _canonical_phase(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Rotate w by a unit complex scalar so that u ⟂ v and |u| >= |v|,
    # then fix the overall sign by the largest entry of u.
    theta = 0.5 * np.angle(np.dot(w, w))
    w = w * np.exp(-1j * theta)
    u, v = w.real.copy(), w.imag.copy()
    if np.dot(u, u) < np.dot(v, v):
        u, v = v, -u
    k = int(np.argmax(np.abs(u)))
    if u[k] < 0:
        u, v = -u, -v
    nrm = np.sqrt(np.dot(u, u) + np.dot(v, v))
    return u / nrm, v / nrm


def real_pair_eigenvectors(A, b: float, c: float, *, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Real vectors ``u, v`` with ``A [u|v] = [u|v] [[b, c], [-c, b]]``.

    ``u + iv`` is an eigenvector for ``b + ic``. The pair is normalised so
    that ``|u|^2 + |v|^2 = 1``, ``u . v = 0`` and ``|u| >= |v|``; the largest
    entry of ``u`` is positive. These choices make the output deterministic.

    Raises
    ------
    NotAnEigenvalue
        If ``b + ic`` is farther than ``1e-6 * (1 + ||A||)`` from every
        eigenvalue.
    DefectivePair
        If the eigenvalue is repeated or no real invariant plane is found.
    """
    A = check_matrix(A)
    if c == 0:
        raise DefectivePair("c must be nonzero for a conjugate pair")
    scale = matrix_scale(A)
    lam = complex(b, c)
    w_all = eigenvalues(A)
    if np.min(np.abs(w_all - lam)) > 1e-6 * scale:
        raise NotAnEigenvalue(f"{lam} is not an eigenvalue of A")
    _check_simple(A, lam, scale)

    block = np.array([[b, c], [-c, b]])
    tol = 1e-8 * scale
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(2):
        w = _inverse_iteration(A, lam, rng, scale)
        if w is None:
            continue
        u, v = _canonical_phase(w)
        UV = np.column_stack([u, v])
        resid = np.linalg.norm(A @ UV - UV @ block)
        best = min(best, resid)
        if resid <= tol * np.linalg.norm(UV) and np.linalg.svd(UV, compute_uv=False)[-1] > 1e-10:
            return u, v
    if best < np.inf and best > tol:
        raise NotAnEigenvalue(f"eigenvector residual {best:.3e} exceeds {tol:.3e} for {lam}")
    raise DefectivePair(f"no rank-2 real invariant plane found for {lam}")


@dataclass(frozen=True)
class MatchReport:
    """Outcome of :func:`spectrum_match` with the optimal pairing.

    ``pairs[k] = (i, j)`` pairs ``S1[i]`` with ``S2[j]``.
    """

    matched: bool
    pairs: tuple[tuple[int, int], ...]
    max_distance: float
    tol: float


def _assignment(S1: np.ndarray, S2: np.ndarray, tol: float):
    d = np.abs(S1[:, None] - S2[None, :])
    # Edges above tol get a penalty larger than any sum of admissible edges, so a
    # min-cost assignment is a perfect matching inside the tol-graph whenever one exists.
    penalty = (d.sum() + 1.0) * (len(S1) + 1)
    cost = np.where(d <= tol, d, penalty)
    rows, cols = linear_sum_assignment(cost)
    return rows, cols, d[rows, cols]


def spectrum_match(S1, S2, tol: float, *, report: bool = False):
    """Whether two multisets of complex numbers agree up to ``tol``.

    True iff some bijection pairs every element of ``S1`` with an element of
    ``S2`` at distance ``<= tol``. Decided exactly by an assignment problem,
    so the answer depends on neither ordering.

    Raises
    ------
    LengthMismatch
        If the two spectra have different sizes.
    """
    S1 = np.atleast_1d(np.asarray(S1, dtype=complex))
    S2 = np.atleast_1d(np.asarray(S2, dtype=complex))
    if S1.shape != S2.shape:
        raise LengthMismatch(f"spectra have lengths {S1.size} and {S2.size}")
    if S1.size == 0:
        result = MatchReport(True, (), 0.0, tol)
        return result if report else True
    rows, cols, dist = _assignment(S1, S2, tol)
    max_d = float(dist.max())
    matched = bool(max_d <= tol)
    if not report:
        return matched
    return MatchReport(matched, tuple(zip(rows.tolist(), cols.tolist())), max_d, tol)


def spectrum_difference(S, remove, tol: float) -> np.ndarray:
    """Multiset difference ``S \\ remove`` where elements match within ``tol``.

    Raises
    ------
    LengthMismatch
        If ``remove`` is larger than ``S`` or cannot be embedded in it.
    """
    S = np.atleast_1d(np.asarray(S, dtype=complex))
    remove = np.atleast_1d(np.asarray(remove, dtype=complex))
    if remove.size > S.size:
        raise LengthMismatch("cannot remove more values than the spectrum holds")
    if remove.size == 0:
        return S.copy()
    rows, cols, dist = _assignment(remove, S, tol)
    if dist.max() > tol:
        raise LengthMismatch(f"value {remove[rows[np.argmax(dist)]]} not found in spectrum within {tol:.3e}")
    keep = np.ones(S.size, dtype=bool)
    keep[cols] = False
    return S[keep]


def matmul(A, B) -> np.ndarray:
    A = check_matrix(A, square=False, name="A")
    B = check_matrix(B, square=False, name="B")
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def matadd(A, B) -> np.ndarray:
    A = check_matrix(A, square=False, name="A")
    B = check_matrix(B, square=False, name="B")
    if A.shape != B.shape:
        raise ShapeMismatch(f"cannot add {A.shape} and {B.shape}")
    return A + B


def transpose(A) -> np.ndarray:
    return check_matrix(A, square=False).T.copy()


def permutation_matrix(order) -> np.ndarray:
    """``Q`` with ``(Q x)[k] = x[order[k]]``."""
    order = np.asarray(order, dtype=int)
    n = order.size
    if sorted(order.tolist()) != list(range(n)):
        raise ShapeMismatch(f"{order.tolist()} is not a permutation of 0..{n - 1}")
    Q = np.zeros((n, n))
    Q[np.arange(n), order] = 1.0
    return Q


def permute_similarity(A, Q) -> np.ndarray:
    """``Q A Q^T`` for a permutation matrix ``Q`` (computed by re-indexing, so exact)."""
    A = check_matrix(A)
    Q = check_matrix(Q, name="Q")
    if Q.shape != A.shape:
        raise ShapeMismatch(f"Q has shape {Q.shape}, A has {A.shape}")
    if not (np.all((Q == 0) | (Q == 1)) and np.all(Q.sum(axis=0) == 1) and np.all(Q.sum(axis=1) == 1)):
        raise ShapeMismatch("Q is not a permutation matrix")
    order = np.argmax(Q, axis=1)
    return A[np.ix_(order, order)]
