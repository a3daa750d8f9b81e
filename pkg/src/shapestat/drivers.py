"""Command drivers: file in, JSON document out.

Every document has the layout::

    {"command": ..., "config": {...}, "samples": [...], "tests": [...], "warnings": [...]}

with one ``samples`` entry per (sample, method) pair.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass
from typing import Optional

from .bootstrap import bootstrap_variation_test
from .errors import InputError, SupportTooWide
from .extrinsic import extrinsic_mean_test, extrinsic_summary, extrinsic_variation_test
from .intrinsic import (
    KarcherOptions,
    intrinsic_mean_test,
    intrinsic_summary,
    intrinsic_variation_test,
)
from .io import LandmarkFile
from .rng import check_seed

METHODS = ("extrinsic", "intrinsic", "both")


@dataclass(frozen=True)
class AnalysisConfig:
    alpha: float = 0.05
    method: str = "both"
    step: float = 1.0
    tol: float = 1e-9
    max_iter: int = 100
    fd_step: float = 1e-4
    seed: int = 0
    replicates: int = 500
    bootstrap: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InputError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.method not in METHODS:
            raise InputError(f"method must be one of {METHODS}, got {self.method!r}")
        if not self.tol > 0 or not self.step > 0 or not self.fd_step > 0:
            raise InputError("tol, step and fd_step must be positive")
        if self.max_iter < 1 or self.replicates < 1 or self.bootstrap < 0:
            raise InputError("max_iter and replicates must be >= 1, bootstrap >= 0")
        try:
            check_seed(self.seed)
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    @property
    def methods(self) -> tuple[str, ...]:
        return ("extrinsic", "intrinsic") if self.method == "both" else (self.method,)

    @property
    def karcher(self) -> KarcherOptions:
        return KarcherOptions(self.step, self.tol, self.max_iter, self.fd_step)

    def to_dict(self) -> dict:
        return asdict(self)


def _pairs(u) -> list:
    return [[float(z.real), float(z.imag)] for z in u]


def sample_entries(lf: LandmarkFile, config: AnalysisConfig, notes: list) -> list[dict]:
    shapes = lf.shapes()
    out = []
    for method in config.methods:
        if method == "extrinsic":
            mean, _, summ = extrinsic_summary(shapes)
        else:
            res, summ = intrinsic_summary(shapes, config.karcher)
            mean = res.mean
            notes.extend(f"{lf.label}: {w}" for w in res.warnings)
        out.append(
            {
                "label": lf.label,
                "method": method,
                "n": lf.n,
                "k": lf.k,
                "variation": summ.variation,
                "s_sq": summ.s_sq,
                "mean_preshape": _pairs(mean.u),
            }
        )
    return out


def document(command: str, config: AnalysisConfig, samples, tests, notes) -> dict:
    return {
        "command": command,
        "config": config.to_dict(),
        "samples": samples,
        "tests": [t.to_dict() for t in tests],
        "warnings": notes,
    }


def _check_pair(a: LandmarkFile, b: LandmarkFile) -> None:
    if a.k != b.k:
        raise InputError(f"samples have different numbers of landmarks ({a.k} vs {b.k})")


def run_mean_test(a: LandmarkFile, b: LandmarkFile, config: AnalysisConfig = AnalysisConfig()) -> dict:
    _check_pair(a, b)
    notes: list = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportTooWide)
        samples = sample_entries(a, config, notes) + sample_entries(b, config, notes)
        sa, sb = a.shapes(), b.shapes()
        tests = []
        for method in config.methods:
            if method == "extrinsic":
                tests.append(extrinsic_mean_test(sa, sb, config.alpha))
            else:
                rep = intrinsic_mean_test(sa, sb, config.alpha, config.karcher)
                notes.extend(rep.extra.get("warnings", []))
                tests.append(rep)
    return document("mean-test", config, samples, tests, sorted(set(notes)))


def run_variation_test(a: LandmarkFile, b: LandmarkFile, config: AnalysisConfig = AnalysisConfig()) -> dict:
    _check_pair(a, b)
    notes: list = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportTooWide)
        samples = sample_entries(a, config, notes) + sample_entries(b, config, notes)
        sa, sb = a.shapes(), b.shapes()
        tests = []
        for method in config.methods:
            if config.bootstrap:
                tests.append(
                    bootstrap_variation_test(
                        sa, sb, method, config.bootstrap, config.seed, config.alpha, config.karcher
                    )
                )
            elif method == "extrinsic":
                tests.append(extrinsic_variation_test(sa, sb, config.alpha))
            else:
                tests.append(intrinsic_variation_test(sa, sb, config.alpha, config.karcher))
    return document("variation-test", config, samples, tests, sorted(set(notes)))


def run_summary(files: list[LandmarkFile], config: AnalysisConfig = AnalysisConfig()) -> dict:
    notes: list = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportTooWide)
        samples = [e for lf in files for e in sample_entries(lf, config, notes)]
    return document("summary", config, samples, [], sorted(set(notes)))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def error_document(command: Optional[str], exc: BaseException) -> dict:
    return {"command": command, "error": {"type": type(exc).__name__, "message": str(exc)}}
