"""Affine and mixed affine quermassintegrals of convex bodies.

Monte Carlo estimation over the Grassmannian of mixed volumes of projected
bodies, plus numerical verification of the associated inequalities. The heavy
lifting lives in the compiled extension; this package re-exports its surface.
"""

from ._core import (  # noqa: F401
    Body,
    CheckParams,
    Estimate,
    InequalityReport,
    LinearMap,
    SuiteConfig,
    SuiteReport,
    Subspace,
    affine_dim,
    ball_approx,
    check_af,
    check_bm,
    check_minkowski,
    check_product,
    check_sl_invariance,
    convex_hull,
    haar_sample,
    is_homothetic,
    linear_image,
    minkowski_sum,
    mixed_volume,
    mixed_volume_oracle,
    paired_phi_batch,
    phi,
    phi_exact_2d,
    phi_ith,
    phi_ith_mixed,
    phi_mixed,
    phi_pair,
    project,
    random_polytope,
    random_sl_matrix,
    run_suite,
    scale,
    set_max_threads,
    translate,
    unit_ball_volume,
    volume,
)

__all__ = [
    "Body",
    "CheckParams",
    "Estimate",
    "InequalityReport",
    "LinearMap",
    "SuiteConfig",
    "SuiteReport",
    "Subspace",
    "affine_dim",
    "ball_approx",
    "check_af",
    "check_bm",
    "check_minkowski",
    "check_product",
    "check_sl_invariance",
    "convex_hull",
    "haar_sample",
    "is_homothetic",
    "linear_image",
    "minkowski_sum",
    "mixed_volume",
    "mixed_volume_oracle",
    "paired_phi_batch",
    "phi",
    "phi_exact_2d",
    "phi_ith",
    "phi_ith_mixed",
    "phi_mixed",
    "phi_pair",
    "project",
    "random_polytope",
    "random_sl_matrix",
    "run_suite",
    "scale",
    "set_max_threads",
    "translate",
    "unit_ball_volume",
    "volume",
]

__version__ = "0.1.0"
