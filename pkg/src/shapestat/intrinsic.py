"""Riemannian geometry of planar shape space and intrinsic inference.

Shape space is treated as complex projective space with the metric in which
``d([u], [v]) = arccos |u*v|``; sectional curvatures then lie in [1, 4].
Tangent vectors at ``[u]`` are represented by their horizontal lifts: centered
complex vectors ``w`` with ``u*w = 0``. Normal coordinates come from a fixed
real orthonormal frame of that horizontal space.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CutLocus,
    EmptySample,
    FocalMean,
    InputError,
    NoConvergence,
    OutOfInjectivityRadius,
    SingularLambda,
    SupportTooWide,
)
from .extrinsic import extrinsic_mean, helmert_basis, spd_quadratic_form
from .frechet import (
    MetricKind,
    TestReport,
    VariationSummary,
    check_alpha,
    chi_squared_report,
    variation_summary,
    variation_test,
)
from .shape_core import Preshape, Shape, stack
from .statdist import chi2_quantile

CURVATURE_BOUND = 4.0
SUPPORT_RADIUS = math.pi / (2.0 * math.sqrt(CURVATURE_BOUND))
INJECTIVITY_RADIUS = math.pi / 2.0
CUT_TOL = 1e-9
MAX_LAMBDA_CONDITION = 1e10

DEFAULT_STEP = 1.0
DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100
DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: Preshape
    w: np.ndarray

    def __post_init__(self):
        w = np.array(np.ravel(self.w), dtype=complex)
        if w.shape != self.base.u.shape:
            raise InputError("tangent vector and base have different lengths")
        scale = max(1.0, float(np.linalg.norm(w)))
        if abs(w.sum()) > 1e-12 * scale * math.sqrt(w.shape[0]):
            raise InputError("tangent vector is not centered")
        if abs(np.vdot(self.base.u, w)) > 1e-12 * scale:
            raise InputError("tangent vector is not horizontal at its base")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.w))


def _exp_vec(u: np.ndarray, w: np.ndarray) -> np.ndarray:
    r = float(np.linalg.norm(w))
    if r >= INJECTIVITY_RADIUS:
        raise OutOfInjectivityRadius(f"tangent norm {r:.6g} is not below pi/2")
    if r == 0.0:
        return u.copy()
    return math.cos(r) * u + (math.sin(r) / r) * w


def _log_rows(u: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Horizontal log vectors at ``u`` for each row of ``z``."""
    c = z @ u.conj()
    ac = np.abs(c)
    if np.any(ac <= CUT_TOL):
        raise CutLocus("a target lies on the cut locus of the base shape")
    phase = np.conj(c) / ac
    r = z * phase[:, None] - np.minimum(ac, 1.0)[:, None] * u[None, :]
    s = np.linalg.norm(r, axis=1)
    d = np.arctan2(s, np.minimum(ac, 1.0))
    scale = np.divide(d, s, out=np.zeros_like(d), where=s > 0)
    return r * scale[:, None]


def exp_map(v: TangentVector) -> Shape:
    """Shape reached by the geodesic from ``v.base`` with initial velocity ``v``."""
    return Shape.from_vector(_exp_vec(v.base.u, v.w))


def log_map(base: Shape, target: Shape) -> TangentVector:
    """Inverse of ``exp_map`` at ``base``; its norm is the geodesic distance."""
    w = _log_rows(base.u, target.u[None, :])[0]
    return TangentVector(base.rep, w)


def sample_logs(base: Shape, sample: Sequence[Shape]) -> np.ndarray:
    if len(sample) == 0:
        raise EmptySample("sample is empty")
    return _log_rows(base.u, stack(sample))


@dataclass(frozen=True, eq=False)
class KarcherResult:
    mean: Shape
    iterations: int
    gradient_norm: float
    support_radius: float
    warnings: tuple = ()

    @property
    def support_ok(self) -> bool:
        return self.support_radius < SUPPORT_RADIUS


def _default_init(sample: Sequence[Shape]) -> Shape:
    try:
        return extrinsic_mean(sample)[0]
    except FocalMean:
        return sample[0]


def karcher_mean(
    sample: Sequence[Shape],
    init: Optional[Shape] = None,
    step: float = DEFAULT_STEP,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> KarcherResult:
    """Intrinsic sample mean by fixed-step Riemannian gradient descent.

    Iterates ``mu <- exp_mu(step * mean_j log_mu(X_j))`` until the averaged log
    vector has norm below ``tol``. Starts from the extrinsic mean unless
    ``init`` is given.
    """
    if len(sample) == 0:
        raise EmptySample("sample is empty")
    if not step > 0 or not tol > 0 or max_iter < 1:
        raise InputError("step and tol must be positive and max_iter at least 1")
    z = stack(sample)
    mu = _default_init(sample) if init is None else init
    u = mu.u
    radius = float(np.max(np.linalg.norm(_log_rows(u, z), axis=1)))
    notes = []
    if radius >= SUPPORT_RADIUS:
        msg = (
            f"sample extends to geodesic distance {radius:.4f} from the starting point, "
            f"beyond pi/4; uniqueness of the local minimum is not guaranteed"
        )
        warnings.warn(msg, SupportTooWide, stacklevel=2)
        notes.append(msg)
    for it in range(1, max_iter + 1):
        grad = _log_rows(u, z).mean(axis=0)
        gnorm = float(np.linalg.norm(grad))
        if gnorm < tol:
            return KarcherResult(Shape.from_vector(u), it, gnorm, radius, tuple(notes))
        u = _exp_vec(u, step * grad)
        u = u - u.mean()
        u = u / np.linalg.norm(u)
    raise NoConvergence(f"Karcher iteration did not reach tolerance {tol:g} in {max_iter} steps (last gradient norm {gnorm:.3g})")


@dataclass(frozen=True, eq=False)
class Chart:
    """Normal coordinates ``y -> exp_base(sum_i y_i f_i)`` about ``base``."""

    base: Shape
    frame: np.ndarray  # (2k-4, k) complex, rows orthonormal in Re<.,.>

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    def coords_of_vector(self, w: np.ndarray) -> np.ndarray:
        return np.real(np.asarray(w) @ self.frame.conj().T)

    def vector(self, y: np.ndarray) -> np.ndarray:
        return np.asarray(y, dtype=float) @ self.frame

    def coords(self, target: Shape) -> np.ndarray:
        return self.coords_of_vector(_log_rows(self.base.u, target.u[None, :])[0])

    def sample_coords(self, sample: Sequence[Shape]) -> np.ndarray:
        return self.coords_of_vector(sample_logs(self.base, sample))

    def point(self, y: np.ndarray) -> Shape:
        return Shape.from_vector(_exp_vec(self.base.u, self.vector(y)))

    def point_vec(self, y: np.ndarray) -> np.ndarray:
        return _exp_vec(self.base.u, self.vector(y))

    def differential(self, y: np.ndarray) -> np.ndarray:
        """Rows ``d/dy_i`` of the lifted chart map at ``y``, shape (dim, k)."""
        u = self.base.u
        f = self.frame
        w = self.vector(y)
        r = float(np.linalg.norm(w))
        if r < 1e-12:
            return f.copy()
        dr = np.asarray(y, dtype=float) / r  # d|w|/dy_i, frame is orthonormal
        cr, sr = math.cos(r), math.sin(r)
        return (
            (-sr * dr)[:, None] * u[None, :]
            + ((cr / r - sr / r**2) * dr)[:, None] * w[None, :]
            + (sr / r) * f
        )


def build_chart(base: Shape) -> Chart:
    """Orthonormal real frame of the horizontal space at ``base``.

    Greedy Gram-Schmidt over the centered directions ``h_j`` and ``i h_j``
    (Helmert basis ``h_j``), always taking the candidate with the largest
    residual after removing ``u``, ``iu`` and the vectors already chosen.
    """
    u = base.u
    k = u.shape[0]
    h = helmert_basis(k).astype(complex)
    cand = np.vstack([h, 1j * h])

    def remove(vecs, basis):
        for b in basis:
            vecs = vecs - np.real(vecs @ b.conj())[:, None] * b[None, :]
        return vecs

    fixed = [u, 1j * u]
    cand = remove(remove(cand, fixed), fixed)
    chosen = []
    for _ in range(2 * k - 4):
        norms = np.linalg.norm(cand, axis=1)
        j = int(np.argmax(norms))
        v = cand[j] / norms[j]
        v = remove(remove(v[None, :], fixed + chosen), fixed + chosen)[0]
        v = v / np.linalg.norm(v)
        chosen.append(v)
        cand = remove(cand, [v])
        cand[j] = 0.0
    return Chart(base, np.array(chosen))


@dataclass(frozen=True, eq=False)
class CltParams:
    lam: np.ndarray
    sigma: np.ndarray
    gradient_mean: np.ndarray
    at: np.ndarray

    @property
    def mean_covariance(self) -> np.ndarray:
        """Asymptotic covariance ``Lambda^-1 Sigma Lambda^-1`` of sqrt(n)(mu_n - mu)."""
        li = np.linalg.inv(self.lam)
        c = li @ self.sigma @ li.T
        return 0.5 * (c + c.T)


def chart_gradients(sample: Sequence[Shape], chart: Chart, y: np.ndarray) -> np.ndarray:
    """Per-observation gradients of ``y -> d^2(X_j, chart.point(y))``, shape (n, dim).

    The quotient gradient of ``d^2(X, .)`` at ``q`` lifts to ``-2 log_q X``, which
    is paired with the chart differential under the real inner product.
    """
    q = chart.point_vec(y)
    logs = _log_rows(q, stack(sample))
    return -2.0 * np.real(logs @ chart.differential(y).conj().T)


def frechet_in_chart(sample: Sequence[Shape], chart: Chart, y: np.ndarray) -> float:
    q = chart.point_vec(y)
    d = np.linalg.norm(_log_rows(q, stack(sample)), axis=1)
    return float(np.mean(d * d))


def estimate_clt_params(
    sample: Sequence[Shape],
    mean: Shape,
    chart: Chart,
    fd_step: float = DEFAULT_FD_STEP,
) -> CltParams:
    """Hessian and gradient covariance of the sample Fréchet function at ``mean``.

    Both are expressed in ``chart`` coordinates. The Hessian is the symmetrized
    central difference of the analytic mean gradient with step ``fd_step``.
    """
    if len(sample) == 0:
        raise EmptySample("sample is empty")
    y0 = chart.coords(mean)
    g = chart_gradients(sample, chart, y0)
    gbar = g.mean(axis=0)
    sigma = g.T @ g / g.shape[0] - np.outer(gbar, gbar)
    dim = chart.dim
    lam = np.empty((dim, dim))
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = fd_step
        gp = chart_gradients(sample, chart, y0 + e).mean(axis=0)
        gm = chart_gradients(sample, chart, y0 - e).mean(axis=0)
        lam[:, i] = (gp - gm) / (2.0 * fd_step)
    lam = 0.5 * (lam + lam.T)
    ev = np.linalg.eigvalsh(lam)
    if ev[0] <= 0 or ev[-1] / ev[0] > MAX_LAMBDA_CONDITION:
        raise SingularLambda(f"Hessian estimate is singular or indefinite (eigenvalues {ev[0]:.3g} .. {ev[-1]:.3g})")
    return CltParams(lam, 0.5 * (sigma + sigma.T), gbar, y0)


@dataclass(frozen=True, eq=False)
class ConfidenceRegion:
    """Ellipsoid ``{y : (y - center)' shape_matrix (y - center) <= threshold}`` in ``chart``."""

    chart: Chart
    center: np.ndarray
    shape_matrix: np.ndarray
    threshold: float
    n: int

    def statistic(self, target: Shape) -> float:
        d = self.chart.coords(target) - self.center
        return float(d @ self.shape_matrix @ d)

    def contains(self, target: Shape) -> bool:
        return self.statistic(target) <= self.threshold

    def log_volume(self) -> float:
        """Log volume of the ellipsoid, up to the unit-ball constant."""
        sign, logdet = np.linalg.slogdet(self.shape_matrix / self.threshold)
        return -0.5 * logdet


@dataclass(frozen=True)
class KarcherOptions:
    step: float = DEFAULT_STEP
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    fd_step: float = DEFAULT_FD_STEP

    def mean(self, sample: Sequence[Shape], init: Optional[Shape] = None) -> KarcherResult:
        return karcher_mean(sample, init, self.step, self.max_iter, self.tol)


def intrinsic_confidence_region(
    sample: Sequence[Shape], alpha: float = 0.05, options: KarcherOptions = KarcherOptions()
) -> ConfidenceRegion:
    check_alpha(alpha)
    mean = options.mean(sample).mean
    chart = build_chart(mean)
    params = estimate_clt_params(sample, mean, chart, options.fd_step)
    n = len(sample)
    shape = n * np.linalg.inv(params.mean_covariance)
    return ConfidenceRegion(
        chart, chart.coords(mean), 0.5 * (shape + shape.T), chi2_quantile(1.0 - alpha, chart.dim), n
    )


def intrinsic_mean_test(
    a: Sequence[Shape],
    b: Sequence[Shape],
    alpha: float = 0.05,
    options: KarcherOptions = KarcherOptions(),
) -> TestReport:
    """Two-sample test of equal intrinsic means in one normal chart at the pooled mean."""
    check_alpha(alpha)
    if len(a) == 0 or len(b) == 0:
        raise EmptySample("both samples must be nonempty")
    notes = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportTooWide)
        pooled = options.mean(list(a) + list(b))
        ra = options.mean(a)
        rb = options.mean(b)
    for label, res in (("pooled", pooled), ("a", ra), ("b", rb)):
        notes.extend(f"{label}: {w}" for w in res.warnings)
    chart = build_chart(pooled.mean)
    pa = estimate_clt_params(a, ra.mean, chart, options.fd_step)
    pb = estimate_clt_params(b, rb.mean, chart, options.fd_step)
    n, m = len(a), len(b)
    cov = pa.mean_covariance / n + pb.mean_covariance / m
    stat = spd_quadratic_form(cov, pa.at - pb.at, "intrinsic mean covariance")
    extra = {"warnings": notes} if notes else {}
    return chi_squared_report("intrinsic_mean", stat, chart.dim, alpha, **extra)


def intrinsic_summary(
    sample: Sequence[Shape], options: KarcherOptions = KarcherOptions()
) -> tuple[KarcherResult, VariationSummary]:
    res = options.mean(sample)
    return res, variation_summary(sample, res.mean, MetricKind.INTRINSIC)


def intrinsic_variation_test(
    a: Sequence[Shape],
    b: Sequence[Shape],
    alpha: float = 0.05,
    options: KarcherOptions = KarcherOptions(),
) -> TestReport:
    _, sa = intrinsic_summary(a, options)
    _, sb = intrinsic_summary(b, options)
    report = variation_test(sa, sb, alpha)
    return TestReport(
        "intrinsic_variation",
        report.statistic,
        report.distribution,
        report.p_value,
        report.alpha,
        report.reject,
        extra={"variation_a": sa.variation, "variation_b": sb.variation},
    )
