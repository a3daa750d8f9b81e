"""Extrinsic analysis through the Veronese-Whitney embedding ``[u] -> uu*``.

The sample extrinsic mean is the top eigenvector of the averaged embedding
and the extrinsic variation is ``2(1 - lambda_max)``. Two-sample tests work in
the tangent coordinates ``Re/Im(U_a* X U_k)``, ``a = 2..k-1``, taken in the
eigenframe of the pooled average.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySample, FocalMean, InputError, NumericalFailure, SingularCovariance
from .frechet import (
    MetricKind,
    TestReport,
    VariationSummary,
    check_alpha,
    chi_squared_report,
    variation_summary,
    variation_test,
)
from .shape_core import Shape, stack

GAP_TOL = 1e-10
MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues and matching unit eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def k(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def top(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def top_vector(self) -> np.ndarray:
        return self.eigenvectors[:, -1]

    @property
    def spectral_gap(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[-2])

    def is_simple_top(self) -> bool:
        return self.spectral_gap > GAP_TOL * max(1.0, self.top)


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Make the largest-modulus entry of each column real and positive."""
    idx = np.argmax(np.abs(vecs), axis=0)
    lead = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.conj(lead) / np.abs(lead))


def embed(s: Shape) -> np.ndarray:
    """The Hermitian rank-one projector ``uu*``."""
    u = s.u
    return np.outer(u, np.conj(u))


def mean_embedding(sample: Sequence[Shape]) -> np.ndarray:
    if len(sample) == 0:
        raise EmptySample("sample is empty")
    z = stack(sample)
    return z.T @ z.conj() / z.shape[0]


def hermitian_eigensystem(a: np.ndarray) -> EigenSystem:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("expected a square matrix")
    if not np.allclose(a, a.conj().T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise InputError("matrix is not self-adjoint")
    try:
        w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    return EigenSystem(w, _fix_phases(v))


def helmert_basis(k: int) -> np.ndarray:
    """(k-1, k) real matrix whose rows are an orthonormal basis of {x : sum(x) = 0}."""
    h = np.zeros((k - 1, k))
    for j in range(1, k):
        h[j - 1, :j] = -1.0 / np.sqrt(j * (j + 1))
        h[j - 1, j] = j / np.sqrt(j * (j + 1))
    return h


def embedding_eigensystem(a: np.ndarray) -> EigenSystem:
    """Eigensystem of an averaged embedding, whose null space contains the ones vector.

    The problem is solved on the centered hyperplane and the constant
    eigenvector is prepended with eigenvalue 0. This keeps ``U_1`` proportional
    to the ones vector even when zero is a repeated eigenvalue (``n < k - 1``).
    """
    k = a.shape[0]
    h = helmert_basis(k)
    inner = hermitian_eigensystem(h @ a @ h.T)
    vals = np.concatenate([[0.0], np.clip(inner.eigenvalues, 0.0, None)])
    vecs = np.column_stack([np.full(k, 1.0 / np.sqrt(k)), h.T @ inner.eigenvectors])
    return EigenSystem(vals, _fix_phases(vecs))


def _require_simple_top(eig: EigenSystem) -> None:
    if not eig.is_simple_top():
        raise FocalMean(
            f"largest eigenvalue of the averaged embedding is not simple "
            f"(gap {eig.spectral_gap:.3g}); the extrinsic mean is not unique"
        )


def extrinsic_mean(sample: Sequence[Shape]) -> tuple[Shape, EigenSystem]:
    eig = embedding_eigensystem(mean_embedding(sample))
    _require_simple_top(eig)
    return Shape.from_vector(eig.top_vector), eig


def extrinsic_variation(eig: EigenSystem) -> float:
    return max(0.0, 2.0 * (1.0 - eig.top))


def tangent_coords(x: np.ndarray, eig: EigenSystem) -> np.ndarray:
    """Real ``2k-4`` vector: Re then Im of ``U_a* X U_k`` for ``a = 2..k-1``."""
    u = eig.eigenvectors
    z = u[:, 1:-1].conj().T @ np.asarray(x) @ u[:, -1]
    return np.concatenate([z.real, z.imag])


def sample_tangent_coords(sample: Sequence[Shape], eig: EigenSystem) -> np.ndarray:
    """``tangent_coords(embed(X_j), eig)`` for every observation, as rows.

    Uses ``U_a* uu* U_k = (U_a* u) conj(U_k* u)``.
    """
    c = stack(sample) @ eig.eigenvectors.conj()
    z = c[:, 1:-1] * np.conj(c[:, -1:])
    return np.hstack([z.real, z.imag])


def _covariance(t: np.ndarray) -> np.ndarray:
    mean = t.mean(axis=0)
    return t.T @ t / t.shape[0] - np.outer(mean, mean)


def spd_quadratic_form(cov: np.ndarray, d: np.ndarray, what: str = "covariance") -> float:
    """``d' cov^{-1} d`` for symmetric positive definite ``cov``."""
    cov = 0.5 * (cov + cov.T)
    w, v = np.linalg.eigh(cov)
    if w[0] <= 0 or w[-1] / w[0] > MAX_CONDITION:
        cond = np.inf if w[0] <= 0 else w[-1] / w[0]
        raise SingularCovariance(
            f"{what} matrix is singular or ill-conditioned (condition number {cond:.3g}); "
            f"this happens when a sample has fewer than 2k-4 observations or no spread "
            f"in some tangent direction"
        )
    proj = v.T @ d
    return float(np.sum(proj * proj / w))


def extrinsic_mean_test(a: Sequence[Shape], b: Sequence[Shape], alpha: float = 0.05) -> TestReport:
    """Two-sample test of equal extrinsic mean shapes, chi-squared with 2k-4 df."""
    check_alpha(alpha)
    if len(a) == 0 or len(b) == 0:
        raise EmptySample("both samples must be nonempty")
    n, m = len(a), len(b)
    pooled = (n * mean_embedding(a) + m * mean_embedding(b)) / (n + m)
    eig = embedding_eigensystem(pooled)
    _require_simple_top(eig)
    t = sample_tangent_coords(a, eig)
    s = sample_tangent_coords(b, eig)
    diff = t.mean(axis=0) - s.mean(axis=0)
    cov = _covariance(t) / n + _covariance(s) / m
    stat = spd_quadratic_form(cov, diff)
    return chi_squared_report("extrinsic_mean", stat, 2 * eig.k - 4, alpha)


def extrinsic_summary(sample: Sequence[Shape]) -> tuple[Shape, EigenSystem, VariationSummary]:
    """Mean, eigensystem and variation summary; variation is ``2(1 - lambda_max)``."""
    mean, eig = extrinsic_mean(sample)
    summ = variation_summary(sample, mean, MetricKind.EXTRINSIC)
    return mean, eig, VariationSummary(summ.n, extrinsic_variation(eig), summ.s_sq)


def extrinsic_variation_test(a: Sequence[Shape], b: Sequence[Shape], alpha: float = 0.05) -> TestReport:
    """``2(lambda_B - lambda_A) / sqrt(s_A^2/n + s_B^2/m)``, two-sided normal reference."""
    _, _, sa = extrinsic_summary(a)
    _, _, sb = extrinsic_summary(b)
    report = variation_test(sa, sb, alpha)
    return TestReport(
        "extrinsic_variation",
        report.statistic,
        report.distribution,
        report.p_value,
        report.alpha,
        report.reject,
        extra={"variation_a": sa.variation, "variation_b": sb.variation},
    )
