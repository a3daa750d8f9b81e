import numpy as np
import pytest

from shapestat.shape_core import KAd, Shape, to_preshape

ACCEPTANCE_LINES: list[str] = []


def random_preshape_vec(rng, k):
    z = rng.normal(size=k) + 1j * rng.normal(size=k)
    z -= z.mean()
    return z / np.linalg.norm(z)


def random_shape(rng, k):
    return Shape.from_vector(random_preshape_vec(rng, k))


def perturbed(rng, center: Shape, sd, n):
    """n shapes near ``center``: Gaussian landmark noise of size ``sd`` on its preshape."""
    out = []
    for _ in range(n):
        z = center.u + sd * (rng.normal(size=center.k) + 1j * rng.normal(size=center.k))
        out.append(Shape(to_preshape(KAd(z))))
    return out


def rotate(s: Shape, theta) -> Shape:
    return Shape.from_vector(np.exp(1j * theta) * s.u)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
