"""Nonparametric inference on Kendall's planar shape space."""

from .calibrate import calibrate
from .errors import *  # noqa: F401,F403
from .extrinsic import (
    EigenSystem,
    embed,
    extrinsic_mean,
    extrinsic_mean_test,
    extrinsic_variation,
    extrinsic_variation_test,
    hermitian_eigensystem,
    tangent_coords,
)
from .frechet import MetricKind, TestReport, VariationSummary, frechet_function, variation_summary, variation_test
from .intrinsic import (
    Chart,
    CltParams,
    KarcherOptions,
    TangentVector,
    build_chart,
    estimate_clt_params,
    exp_map,
    intrinsic_confidence_region,
    intrinsic_mean_test,
    intrinsic_variation_test,
    karcher_mean,
    log_map,
)
from .io import LandmarkFile, parse_landmarks, write_landmarks
from .shape_core import KAd, Preshape, Shape, align_rotation, geodesic_distance, procrustes_distance_sq, to_preshape
from .simulate import SimSpec, simulate_sample
from .statdist import chi2_quantile, chi2_sf, normal_two_sided_p

__version__ = "0.1.0"
