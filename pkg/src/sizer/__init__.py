"""Capacity sizing engine for service-oriented platforms.

Turns deployment-time and runtime workload descriptions into hardware
plans (machines, hosts, nodes per tier), performance-degradation curves,
recommendations and downloadable reports, with a calibration pipeline
that fits the demand model from measurement data.
"""

from .domain import (
    DEFAULT_TIERS,
    HardwareTier,
    PackerConfig,
    PerformanceCurve,
    Recommendation,
    RequestValidationError,
    ResourceDemand,
    RuntimeProfile,
    ServiceSpec,
    SizerError,
    SizingRequest,
    SizingResult,
    Topology,
    validate_request,
)
from .engine import compare_tiers, size
from .packer import distribute_to_nodes, exact_pack_oracle, pack
from .perfmodel import (
    DEFAULT_COEFFICIENTS,
    CalibrationSample,
    ModelCoefficients,
    deployment_demand,
    estimate_demand,
    fit_coefficients,
    performance_curve,
    tier_scale_factor,
    validate_extrapolation,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_COEFFICIENTS",
    "DEFAULT_TIERS",
    "CalibrationSample",
    "HardwareTier",
    "ModelCoefficients",
    "PackerConfig",
    "PerformanceCurve",
    "Recommendation",
    "RequestValidationError",
    "ResourceDemand",
    "RuntimeProfile",
    "ServiceSpec",
    "SizerError",
    "SizingRequest",
    "SizingResult",
    "Topology",
    "compare_tiers",
    "deployment_demand",
    "distribute_to_nodes",
    "estimate_demand",
    "exact_pack_oracle",
    "fit_coefficients",
    "pack",
    "performance_curve",
    "size",
    "tier_scale_factor",
    "validate_extrapolation",
    "validate_request",
]
