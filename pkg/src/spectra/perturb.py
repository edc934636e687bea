"""Shifting a complex conjugate eigenvalue pair of a nonnegative matrix.

Given an irreducible nonnegative ``A`` with Perron root ``rho`` and a simple
pair ``b +/- ic``, :func:`shift_complex_pair` builds a nonnegative matrix with
spectrum ``{rho + t_tilde, b + t +/- ic, rest}`` by a rank-3 update

    A_out = B + [e|u|v] [z|t x|t y]^T,

where ``B`` is the constant-row-sum form of ``A``, ``u + iv`` an eigenvector
of ``B`` for ``b + ic`` and ``x, y`` are supported on the three coordinates
whose points ``(u_l, v_l)`` span the triangle of largest area.

Indices in every returned object are zero-based and refer to the original
row/column order of ``A``; no permutation is ever applied to the matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exceptions import (
    CollinearEigenvectors,
    DegeneratePair,
    NotConstantRowSums,
    NotInvariant,
    NotIrreducible,
    NotNonnegative,
    PostconditionFailed,
    RankDeficientX,
    ShapeMismatch,
    ThresholdViolated,
)
from .matcore import (
    eigenvalues,
    locate_pair,
    permutation_matrix,
    real_pair_eigenvectors,
    spectrum_difference,
    spectrum_match,
)
from .nonneg import is_irreducible, is_nonnegative, perron, to_constant_row_sums
from .polygeom import gamma
from .validation import check_matrix, check_nonnegative_scalar, matrix_scale

__all__ = [
    "PerturbPlan",
    "Certificate",
    "rank_update",
    "rank_update_spectrum",
    "build_plan",
    "construction_threshold",
    "shift_complex_pair",
    "expected_spectrum",
]


def rank_update(A, X, D, C, *, invariance_tol: float | None = None) -> np.ndarray:
    """Return ``A + X C`` after checking that ``A X = X D`` with ``X`` of full column rank.

    When the check passes, the spectrum of the result is the spectrum of
    ``D + C X`` together with the eigenvalues of ``A`` not belonging to ``D``
    (see :func:`rank_update_spectrum`).

    Raises
    ------
    RankDeficientX
        If the smallest singular value of ``X`` is ``<= 1e-10 * ||X||``.
    NotInvariant
        If ``||A X - X D|| > invariance_tol`` (default
        ``1e-8 * (1 + ||A||) * ||X||``).
    """
    A = check_matrix(A)
    X = check_matrix(X, square=False, name="X")
    D = check_matrix(D, name="D")
    C = check_matrix(C, square=False, name="C")
    n, r = X.shape
    if A.shape[0] != n or D.shape[0] != r or C.shape != (r, n):
        raise ShapeMismatch(f"incompatible shapes A{A.shape} X{X.shape} D{D.shape} C{C.shape}")
    xnorm = np.linalg.norm(X)
    sv = np.linalg.svd(X, compute_uv=False)
    if r > n or sv[-1] <= 1e-10 * xnorm:
        raise RankDeficientX(f"X does not have full column rank {r}")
    if invariance_tol is None:
        invariance_tol = 1e-8 * matrix_scale(A) * xnorm
    resid = np.linalg.norm(A @ X - X @ D)
    if resid > invariance_tol:
        raise NotInvariant(f"||AX - XD|| = {resid:.3e} exceeds {invariance_tol:.3e}")
    return A + X @ C


def rank_update_spectrum(A, X, D, C, tol: float | None = None) -> np.ndarray:
    """Predicted spectrum of ``A + X C``: ``eig(D + C X)`` joined with ``eig(A) \\ eig(D)``."""
    A = check_matrix(A)
    D = check_matrix(D, name="D")
    if tol is None:
        tol = 1e-6 * matrix_scale(A)
    rest = spectrum_difference(eigenvalues(A), eigenvalues(D), tol)
    return np.concatenate([eigenvalues(np.asarray(D) + np.asarray(C) @ np.asarray(X)), rest])


@dataclass(frozen=True)
class PerturbPlan:
    """Every intermediate quantity of the rank-3 construction.

    ``triple`` lists the three coordinates (original indices) whose points
    ``(u_l, v_l)`` form the largest triangle, in counterclockwise order;
    ``alpha[l, m] = u_l x_{triple[m]} + v_l y_{triple[m]}``; ``minimizers``
    holds the rows attaining each column minimum of ``alpha``.
    """

    u: np.ndarray
    v: np.ndarray
    b: float
    c: float
    rho: float
    triple: tuple[int, int, int]
    Delta: float
    x: np.ndarray
    y: np.ndarray
    alpha: np.ndarray
    minimizers: tuple[int, int, int]
    alpha_sum: float
    t: float
    t_tilde: float
    delta: float
    z: np.ndarray

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def permutation(self) -> np.ndarray:
        """Permutation matrix ``Q`` moving ``triple`` to positions 0, 1, 2."""
        rest = [l for l in range(self.n) if l not in self.triple]
        return permutation_matrix(list(self.triple) + rest)

    @property
    def c_table(self) -> np.ndarray:
        """``alpha`` with each column shifted to vanish on the other two triple rows.

        Column ``m`` equals ``det3`` of the triple with vertex ``m`` replaced
        by row ``l``, divided by ``Delta``.
        """
        p, q, r = self.triple
        a = self.alpha
        return np.column_stack([a[:, 0] - a[q, 0], a[:, 1] - a[r, 1], a[:, 2] - a[q, 2]])

    @property
    def beta(self) -> np.ndarray:
        """Nonzero columns of ``[e|u|v][z|t x|t y]^T`` (an ``n x 3`` table)."""
        i, j, k = self.minimizers
        mins = np.array([self.alpha[i, 0], self.alpha[j, 1], self.alpha[k, 2]])
        return self.t * (self.alpha - mins[None, :]) + self.delta

    def update_factors(self) -> tuple[np.ndarray, np.ndarray]:
        """``(X, C)`` with ``X = [e|u|v]`` and ``C = [z|t x|t y]^T``."""
        n = self.n
        X = np.column_stack([np.ones(n), self.u, self.v])
        C = np.vstack([self.z, self.t * self.x, self.t * self.y])
        return X, C

    def interaction(self) -> np.ndarray:
        """``[z|t x|t y]^T [e|u|v]``; upper triangular with diagonal ``(t_tilde, t, t)``."""
        X, C = self.update_factors()
        return C @ X


def _max_triangle(u: np.ndarray, v: np.ndarray) -> tuple[tuple[int, int, int], float]:
    n = u.size
    T = np.array(list(combinations(range(n), 3)), dtype=int)
    p, q, r = T[:, 0], T[:, 1], T[:, 2]
    det = (u[q] - u[p]) * (v[r] - v[p]) - (v[q] - v[p]) * (u[r] - u[p])
    absdet = np.abs(det)
    best = int(np.argmax(absdet))  # first hit = lexicographically smallest
    p, q, r = (int(s) for s in T[best])
    triple = (p, q, r) if det[best] > 0 else (p, r, q)
    return triple, float(absdet[best])


def build_plan(B, b: float, c: float, t: float, t_tilde: float, *, pair_tol: float | None = None,
               row_sum_tol: float | None = None) -> PerturbPlan:
    """Assemble the rank-3 construction for a constant-row-sum matrix ``B``.

    ``b + ic`` is snapped to the nearest computed eigenvalue of ``B`` within
    ``pair_tol`` (default ``1e-6 * (1 + ||B||)``) before eigenvectors are taken.

    Raises
    ------
    DegeneratePair
        If ``c == 0``.
    NotConstantRowSums
        If the row sums of ``B`` spread by more than ``row_sum_tol``
        (default ``1e-8 * (1 + ||B||)``).
    CollinearEigenvectors
        If the largest triangle has (numerically) zero area.
    """
    B = check_matrix(B)
    n = B.shape[0]
    if c == 0:
        raise DegeneratePair("c must be nonzero")
    t = check_nonnegative_scalar(t, "t")
    t_tilde = check_nonnegative_scalar(t_tilde, "t_tilde")
    if n < 3:
        raise DegeneratePair(f"a matrix of order {n} cannot carry a Perron root and a complex pair")
    scale = matrix_scale(B)
    ok, margin = is_nonnegative(B, 0.0)
    if not ok:
        raise NotNonnegative(f"matrix has a negative entry {margin:.3e}")
    if not is_irreducible(B):
        raise NotIrreducible("matrix is reducible")
    if row_sum_tol is None:
        row_sum_tol = 1e-8 * scale
    sums = B.sum(axis=1)
    if sums.max() - sums.min() > row_sum_tol:
        raise NotConstantRowSums(f"row sums spread by {sums.max() - sums.min():.3e}")
    rho = float(sums.mean())

    lam = locate_pair(B, b, c, pair_tol)
    b, c = lam.real, lam.imag
    u, v = real_pair_eigenvectors(B, b, c)

    triple, Delta = _max_triangle(u, v)
    if Delta <= 1e-12 * (1.0 + np.abs(u).max() + np.abs(v).max()) ** 2:
        raise CollinearEigenvectors(f"largest triangle is degenerate (Delta={Delta:.3e})")
    p, q, r = triple

    x = np.zeros(n)
    y = np.zeros(n)
    x[[p, q, r]] = np.array([v[q] - v[r], v[r] - v[p], v[p] - v[q]]) / Delta
    y[[p, q, r]] = np.array([u[r] - u[q], u[p] - u[r], u[q] - u[p]]) / Delta

    cols = np.array([p, q, r])
    alpha = u[:, None] * x[cols][None, :] + v[:, None] * y[cols][None, :]
    minimizers = tuple(int(s) for s in np.argmin(alpha, axis=0))
    i, j, k = minimizers
    alpha_sum = float(alpha[i, 0] + alpha[j, 1] + alpha[k, 2])
    delta = (t_tilde + t * alpha_sum) / 3.0

    z = np.zeros(n)
    z[[p, q, r]] = -t * np.array([alpha[i, 0], alpha[j, 1], alpha[k, 2]]) + delta

    return PerturbPlan(
        u=u, v=v, b=float(b), c=float(c), rho=rho, triple=triple, Delta=Delta, x=x, y=y,
        alpha=alpha, minimizers=minimizers, alpha_sum=alpha_sum, t=t, t_tilde=t_tilde,
        delta=delta, z=z,
    )


def construction_threshold(plan: PerturbPlan) -> float:
    """Least ``t_tilde`` for which this construction stays nonnegative: ``-t * alpha_sum``."""
    return -plan.t * plan.alpha_sum


def expected_spectrum(spectrum, rho: float, lam: complex, t: float, t_tilde: float, tol: float) -> np.ndarray:
    """Replace ``rho``, ``lam`` and ``conj(lam)`` in ``spectrum`` by their shifted values."""
    lam = complex(lam)
    rest = spectrum_difference(spectrum, [rho, lam, lam.conjugate()], tol)
    return np.concatenate([[rho + t_tilde, lam + t, lam.conjugate() + t], rest])


@dataclass(frozen=True)
class Certificate:
    """Witness that ``A_out`` is nonnegative with the shifted spectrum.

    ``A_in`` is the matrix supplied by the caller, ``A_const`` its
    constant-row-sum form (the base of the update). ``threshold`` is the
    construction threshold, not a claim about all nonnegative realisations.
    """

    A_in: np.ndarray
    A_const: np.ndarray
    A_out: np.ndarray
    spectrum_before: np.ndarray
    spectrum_expected: np.ndarray
    spectrum_after: np.ndarray
    spectrum_error: float
    nonneg_margin: float
    t: float
    t_tilde: float
    threshold: float
    gamma_n: float
    plan: PerturbPlan = field(repr=False)

    @property
    def beta(self) -> np.ndarray:
        return self.plan.beta

    @property
    def beta_margin(self) -> float:
        return float(self.plan.beta.min())


def shift_complex_pair(A, b: float, c: float, t: float, t_tilde: float | None = None, tol: float = 1e-9, *,
                       spectrum_tol: float | None = None, pair_tol: float | None = None,
                       verify: bool = True) -> Certificate:
    """Nonnegative matrix with ``rho -> rho + t_tilde`` and ``b +/- ic -> b + t +/- ic``.

    Parameters
    ----------
    A : array-like, shape (n, n)
        Irreducible nonnegative matrix, ``n >= 3``.
    b, c : float
        The pair ``b +/- ic`` (approximate values are snapped to the
        computed eigenvalue).
    t : float
        Real shift of the pair, ``t >= 0``.
    t_tilde : float, optional
        Shift of the Perron root. Defaults to ``gamma(n) * t``, which always
        clears the construction threshold.
    tol : float
        Allowed negativity of the entries of ``A_out`` and slack on the
        threshold test.
    spectrum_tol : float, optional
        Matching tolerance for the spectral postcondition, default
        ``1e-8 * (1 + ||A||)``.
    verify : bool
        Recompute the spectrum of the result and raise on mismatch.

    Raises
    ------
    ThresholdViolated
        If ``t_tilde`` is below the construction threshold by more than ``tol``.
    PostconditionFailed
        If the result is not nonnegative within ``tol`` or its spectrum does not
        match; ``margins`` on the exception carry the measured values.
    """
    A = check_matrix(A)
    n = A.shape[0]
    ok, margin = is_nonnegative(A, 0.0)
    if not ok:
        raise NotNonnegative(f"matrix has a negative entry {margin:.3e}")
    if not is_irreducible(A):
        raise NotIrreducible("matrix is reducible")
    if n < 3:
        raise DegeneratePair(f"a matrix of order {n} cannot carry a Perron root and a complex pair")
    gamma_n = gamma(n)
    if t_tilde is None:
        t_tilde = gamma_n * float(t)
    scale = matrix_scale(A)
    if spectrum_tol is None:
        spectrum_tol = 1e-8 * scale

    pd = perron(A)
    B = to_constant_row_sums(A, pd)
    plan = build_plan(B, b, c, t, t_tilde, pair_tol=pair_tol)
    threshold = construction_threshold(plan)
    if plan.t_tilde < threshold - tol:
        raise ThresholdViolated(f"t_tilde={plan.t_tilde!r} is below the construction threshold {threshold!r}")

    X, C = plan.update_factors()
    A_out = B + X @ C
    nonneg_margin = float(A_out.min())

    before = eigenvalues(A)
    lam = complex(plan.b, plan.c)
    expected = expected_spectrum(before, pd.rho, lam, plan.t, plan.t_tilde, max(spectrum_tol, 1e-6 * scale))
    after = eigenvalues(A_out) if verify else expected.copy()
    rep = spectrum_match(after, expected, spectrum_tol, report=True)
    if verify:
        if nonneg_margin < -tol:
            raise PostconditionFailed(
                f"result has a negative entry {nonneg_margin:.3e}", nonneg_margin=nonneg_margin,
                spectrum_error=rep.max_distance,
            )
        if not rep.matched:
            raise PostconditionFailed(
                f"spectrum mismatch {rep.max_distance:.3e} > {spectrum_tol:.3e}", nonneg_margin=nonneg_margin,
                spectrum_error=rep.max_distance,
            )
    return Certificate(
        A_in=A, A_const=B, A_out=A_out, spectrum_before=before, spectrum_expected=expected,
        spectrum_after=after, spectrum_error=rep.max_distance, nonneg_margin=nonneg_margin,
        t=plan.t, t_tilde=plan.t_tilde, threshold=threshold, gamma_n=gamma_n, plan=plan,
    )
