"""Numerical geometry of spherically symmetric Finsler metrics
F = |y| phi(|x|, <x, y>/|y|), driven by degree-4 Taylor-jet arithmetic."""

from .curvature import (
    CurvaturePack,
    ScalarCurvatureReport,
    flag_curvature,
    riemann_pack,
    scalar_classify,
)
from .expr import DomainError, ParseError, eval_value, parse, to_string
from .geometry import (
    CartanPack,
    Degeneracy,
    EvalPoint,
    GeometryError,
    MetricPack,
    canonical_point,
    cartan_pack,
    degeneracy_classify,
    metric_pack,
    random_rotation,
)
from .jet import Jet, eval_jet, fd_partials
from .spray import (
    MetrizabilityResiduals,
    SprayPack,
    horizontal_residual,
    metrizability_from_spray,
    metrizability_residuals,
    pq_from_phi,
)
from .surface import (
    BerwaldFrame,
    MainScalarPack,
    berwald_frame,
    main_scalar,
    riemannian_test,
)

__version__ = "0.1.0"

__all__ = [
    "BerwaldFrame",
    "CartanPack",
    "CurvaturePack",
    "Degeneracy",
    "DomainError",
    "EvalPoint",
    "GeometryError",
    "Jet",
    "MainScalarPack",
    "MetricPack",
    "MetrizabilityResiduals",
    "ParseError",
    "ScalarCurvatureReport",
    "SprayPack",
    "berwald_frame",
    "canonical_point",
    "cartan_pack",
    "degeneracy_classify",
    "eval_jet",
    "eval_value",
    "fd_partials",
    "flag_curvature",
    "horizontal_residual",
    "metrizability_from_spray",
    "main_scalar",
    "metric_pack",
    "metrizability_residuals",
    "parse",
    "pq_from_phi",
    "random_rotation",
    "riemann_pack",
    "riemannian_test",
    "scalar_classify",
    "to_string",
]
