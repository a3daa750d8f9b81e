"""k-ads, preshapes and planar shapes.

A planar k-ad is stored as a complex k-vector ``x + iy``. Removing
translation and scale gives the preshape, a unit vector in the hyperplane
``sum(u) == 0``; the shape is the orbit of the preshape under ``u -> e^{it} u``.
Shapes keep whatever representative they were built from, and every function
here is invariant under a change of that representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateConfiguration, InputError

MAX_LANDMARKS = 512
CENTER_TOL = 1e-12
NORM_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class KAd:
    """Ordered planar landmark configuration."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points)
        if pts.ndim == 2 and pts.shape[1] == 2 and not np.iscomplexobj(pts):
            pts = pts[:, 0] + 1j * pts[:, 1]
        pts = _frozen(np.ravel(pts))
        k = pts.shape[0]
        if k <= 2:
            raise InputError(f"a k-ad needs k > 2 landmarks, got {k}")
        if k > MAX_LANDMARKS:
            raise InputError(f"k = {k} exceeds the supported maximum of {MAX_LANDMARKS}")
        if not np.all(np.isfinite(pts)):
            raise InputError("landmark coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_xy(cls, xy) -> "KAd":
        xy = np.asarray(xy, dtype=float)
        return cls(xy[:, 0] + 1j * xy[:, 1])

    @property
    def k(self) -> int:
        return self.points.shape[0]

    def xy(self) -> np.ndarray:
        return np.column_stack([self.points.real, self.points.imag])


@dataclass(frozen=True, eq=False)
class Preshape:
    """Centered unit-norm complex k-vector."""

    u: np.ndarray

    def __post_init__(self):
        u = _frozen(np.ravel(self.u))
        if u.shape[0] <= 2:
            raise InputError("a preshape needs k > 2 entries")
        if abs(u.sum()) > CENTER_TOL * max(1, np.sqrt(u.shape[0])):
            raise InputError("preshape is not centered")
        if abs(np.linalg.norm(u) - 1.0) > NORM_TOL * max(1, np.sqrt(u.shape[0])):
            raise InputError("preshape does not have unit norm")
        object.__setattr__(self, "u", u)

    @property
    def k(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True, eq=False)
class Shape:
    """Rotation orbit of a preshape, carried by one representative."""

    rep: Preshape

    @classmethod
    def from_vector(cls, u) -> "Shape":
        """Wrap an (approximately) centered unit vector, re-normalizing it."""
        u = np.asarray(u, dtype=complex).ravel()
        u = u - u.mean()
        return cls(Preshape(u / np.linalg.norm(u)))

    @classmethod
    def from_kad(cls, kad: KAd) -> "Shape":
        return cls(to_preshape(kad))

    @property
    def u(self) -> np.ndarray:
        return self.rep.u

    @property
    def k(self) -> int:
        return self.rep.k


def to_preshape(kad: KAd) -> Preshape:
    z = kad.points
    centered = z - z.mean()
    size = np.linalg.norm(centered)
    if size == 0.0 or size <= 1e-300:
        raise DegenerateConfiguration("all landmarks coincide")
    w = centered / size
    # one pass of re-centering and re-normalizing takes the residuals to ~eps
    w = w - w.mean()
    return Preshape(w / np.linalg.norm(w))


def centroid_size(kad: KAd) -> float:
    z = kad.points
    return float(np.linalg.norm(z - z.mean()))


def stack(sample: Sequence[Shape]) -> np.ndarray:
    """Representatives as rows of an (n, k) complex array."""
    if len(sample) == 0:
        return np.empty((0, 0), dtype=complex)
    return np.vstack([s.u for s in sample])


def _overlap(u: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.vdot(u, v))


def _cos_sin(u: np.ndarray, v: np.ndarray) -> tuple[float, float, complex]:
    """|u*v|, the norm of v's component orthogonal to the complex line of u, and u*v.

    The orthogonal residual is computed directly rather than as
    sqrt(1 - |u*v|^2), which keeps small angles accurate.
    """
    c = _overlap(u, v)
    s = float(np.linalg.norm(v - c * u))
    return min(abs(c), 1.0), s, c


def procrustes_distance_sq(a: Shape, b: Shape) -> float:
    """Squared full Procrustes distance ``2(1 - |u*v|^2)``.

    Evaluated as ``2 |v - (u*v) u|^2``, the same quantity for unit vectors,
    which avoids cancellation for nearby shapes.
    """
    _, s, _ = _cos_sin(a.u, b.u)
    return float(min(2.0 * s * s, 2.0))


def geodesic_distance(a: Shape, b: Shape) -> float:
    """Geodesic distance ``arccos |u*v|`` in [0, pi/2].

    Evaluated as ``atan2(sin, cos)`` with both parts computed directly, which
    equals arccos|u*v| but does not lose precision near zero distance.
    """
    c, s, _ = _cos_sin(a.u, b.u)
    return float(np.arctan2(s, c))


def align_rotation(u: Preshape, m: Preshape) -> Preshape:
    """Rotate ``u`` to minimize its Euclidean distance to ``m``."""
    c = _overlap(m.u, u.u)
    if c == 0:
        return u
    return Preshape(u.u * (np.conj(c) / abs(c)))
