"""Concentrated shape distributions from isotropic landmark noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .shape_core import KAd, Shape, centroid_size, to_preshape


@dataclass(frozen=True)
class SimSpec:
    """Template plus Gaussian noise with sd ``noise_sd * centroid_size(template)``."""

    template: KAd
    noise_sd: float
    n: int

    def __post_init__(self):
        if not self.noise_sd > 0:
            raise InputError("noise_sd must be positive")
        if self.n < 1:
            raise InputError("sample size must be at least 1")


def default_template(k: int) -> KAd:
    """A fixed, mildly irregular k-gon."""
    j = np.arange(k)
    radius = 1.0 + 0.25 * np.cos(3.0 * j + 0.5)
    return KAd(radius * np.exp(2j * np.pi * j / k))


def simulate_kads(spec: SimSpec, rng: np.random.Generator) -> np.ndarray:
    """(n, k) complex array of perturbed landmark configurations."""
    z = spec.template.points
    sd = spec.noise_sd * centroid_size(spec.template)
    noise = rng.standard_normal((spec.n, z.shape[0], 2)) * sd
    return z[None, :] + noise[..., 0] + 1j * noise[..., 1]


def simulate_sample(spec: SimSpec, rng: np.random.Generator) -> list[Shape]:
    return [Shape(to_preshape(KAd(row))) for row in simulate_kads(spec, rng)]
