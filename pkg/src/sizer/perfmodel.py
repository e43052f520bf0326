"""Parametric per-service resource demand model and its calibration.

The demand model is affine in the workload variables. With U concurrent
users, T requests/second and P total payload KB, a service of a given
implementation/binding pair needs, on the reference tier:

    cpu_pct   = c0 + c1*U + c2*T + c3*T*P
    memory_mb = m0 + m1*U + m2*P

CPU percentages transfer across tiers in inverse proportion to compute
capacity (processors x cores x frequency); memory is treated as a
property of the workload and does not scale with the machine.

Calibration fits the coefficients per pair by ordinary least squares on
measurement samples, rescaling CPU readings from non-reference tiers to
the reference first. Negative fits are clamped to zero and the remaining
coefficients refit, keeping the model monotone in load.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .domain import (
    DEFAULT_TIERS,
    HardwareTier,
    PackerConfig,
    PerformanceCurve,
    ResourceDemand,
    RuntimeProfile,
    ServiceSpec,
    SizerError,
)


class UnknownPairError(SizerError):
    """No coefficients for this implementation/binding pair."""

    def __init__(self, implementation_type: str, binding_type: str):
        self.implementation_type = implementation_type
        self.binding_type = binding_type
        super().__init__(f"no coefficients for pair {implementation_type}/{binding_type}")


class CalibrationError(SizerError):
    """Calibration input cannot produce a fit.

    ``code`` is one of insufficient_samples, collinear_samples,
    unknown_tier, bad_row, empty_holdout.
    """

    def __init__(self, code: str, message: str, pair: tuple[str, str] | None = None):
        self.code = code
        self.pair = pair
        super().__init__(message)


# Fallback static deployment footprint when calibration sees no zero-load
# samples and no prior table supplies one.
DEFAULT_DEPLOY_MEM_MB = 192.0

CALIBRATION_CSV_HEADER = ["tier", "impl", "binding", "concurrency",
                          "throughput", "payload_kb", "cpu_pct", "mem_mb"]


@dataclass(frozen=True)
class PairCoefficients:
    """Demand-model coefficients for one implementation/binding pair."""

    c0_cpu_pct: float
    c1_cpu_per_user: float
    c2_cpu_per_rps: float
    c3_cpu_per_rps_kb: float
    m0_mem_mb: float
    m1_mem_per_user_mb: float
    m2_mem_per_kb_mb: float
    deploy_mem_mb: float

    def cpu_fields(self) -> tuple[float, float, float, float]:
        return (self.c0_cpu_pct, self.c1_cpu_per_user, self.c2_cpu_per_rps, self.c3_cpu_per_rps_kb)

    def mem_fields(self) -> tuple[float, float, float]:
        return (self.m0_mem_mb, self.m1_mem_per_user_mb, self.m2_mem_per_kb_mb)


@dataclass(frozen=True)
class ModelCoefficients:
    """A coefficient table: one PairCoefficients per pair, plus the tier
    the CPU percentages are expressed against."""

    reference_tier: str
    pairs: dict[tuple[str, str], PairCoefficients]

    def pair_for(self, service: ServiceSpec) -> PairCoefficients:
        key = (service.implementation_type, service.binding_type)
        try:
            return self.pairs[key]
        except KeyError:
            raise UnknownPairError(*key) from None

    def to_dict(self) -> dict[str, Any]:
        return {
            "reference_tier": self.reference_tier,
            "pairs": [
                {
                    "implementation_type": impl,
                    "binding_type": binding,
                    "c0_cpu_pct": p.c0_cpu_pct,
                    "c1_cpu_per_user": p.c1_cpu_per_user,
                    "c2_cpu_per_rps": p.c2_cpu_per_rps,
                    "c3_cpu_per_rps_kb": p.c3_cpu_per_rps_kb,
                    "m0_mem_mb": p.m0_mem_mb,
                    "m1_mem_per_user_mb": p.m1_mem_per_user_mb,
                    "m2_mem_per_kb_mb": p.m2_mem_per_kb_mb,
                    "deploy_mem_mb": p.deploy_mem_mb,
                }
                for (impl, binding), p in self.pairs.items()
            ],
        }


# Builtin model. Anchored so that on the performance-lab tier the
# reference workload (U=100, T=100, P=64) costs 6.5 CPU% per service:
# twelve such services stay under the default 80% cap, thirteen do not.
DEFAULT_COEFFICIENTS = ModelCoefficients(
    reference_tier="perflab",
    pairs={
        ("java", "soap_http"): PairCoefficients(
            c0_cpu_pct=2.5,
            c1_cpu_per_user=0.02,
            c2_cpu_per_rps=0.01,
            c3_cpu_per_rps_kb=1.5625e-4,
            m0_mem_mb=256.0,
            m1_mem_per_user_mb=0.5,
            m2_mem_per_kb_mb=0.25,
            deploy_mem_mb=192.0,
        ),
    },
)


def parse_coefficients(obj: Mapping[str, Any]) -> ModelCoefficients:
    """Parse a coefficient table from its JSON form, enforcing the
    non-negative invariant on every coefficient."""
    if not isinstance(obj, Mapping):
        raise SizerError("coefficient table must be an object")
    reference = obj.get("reference_tier")
    if not isinstance(reference, str) or not reference:
        raise SizerError("coefficient table needs a 'reference_tier' name")
    raw_pairs = obj.get("pairs")
    if not isinstance(raw_pairs, list) or not raw_pairs:
        raise SizerError("coefficient table needs a non-empty 'pairs' list")
    pairs: dict[tuple[str, str], PairCoefficients] = {}
    numeric = ("c0_cpu_pct", "c1_cpu_per_user", "c2_cpu_per_rps", "c3_cpu_per_rps_kb",
               "m0_mem_mb", "m1_mem_per_user_mb", "m2_mem_per_kb_mb", "deploy_mem_mb")
    for entry in raw_pairs:
        if not isinstance(entry, Mapping):
            raise SizerError("each pair entry must be an object")
        impl = entry.get("implementation_type")
        binding = entry.get("binding_type")
        if not isinstance(impl, str) or not isinstance(binding, str) or not impl or not binding:
            raise SizerError("pair entries need implementation_type and binding_type")
        values = []
        for key in numeric:
            v = entry.get(key)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise SizerError(f"pair {impl}/{binding}: {key} must be a finite number")
            if v < 0:
                raise SizerError(f"pair {impl}/{binding}: {key} must be >= 0")
            values.append(float(v))
        if (impl, binding) in pairs:
            raise SizerError(f"duplicate pair {impl}/{binding}")
        pairs[(impl, binding)] = PairCoefficients(*values)
    return ModelCoefficients(reference_tier=reference, pairs=pairs)


def load_coefficients(text: str) -> ModelCoefficients:
    import json
    return parse_coefficients(json.loads(text))


@dataclass(frozen=True)
class CalibrationSample:
    """One measured operating point from a load test."""

    tier: str
    implementation_type: str
    binding_type: str
    concurrency: int
    throughput: float
    payload_total_kb: float
    measured_cpu_pct: float
    measured_mem_mb: float

    @property
    def pair(self) -> tuple[str, str]:
        return (self.implementation_type, self.binding_type)

    def is_zero_load(self) -> bool:
        return self.concurrency == 0 and self.throughput == 0 and self.payload_total_kb == 0


@dataclass(frozen=True)
class ValidationReport:
    """Holdout accuracy of a fitted model."""

    holdout_count: int
    cpu_rmse_pct: float
    mem_rmse_mb: float
    max_abs_cpu_err_pct: float
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        # serialized key is "pass"; the attribute avoids the keyword
        return {
            "holdout_count": self.holdout_count,
            "cpu_rmse_pct": self.cpu_rmse_pct,
            "mem_rmse_mb": self.mem_rmse_mb,
            "max_abs_cpu_err_pct": self.max_abs_cpu_err_pct,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# Demand estimation
# ---------------------------------------------------------------------------

def tier_scale_factor(tier: HardwareTier, reference: HardwareTier) -> float:
    """Factor converting CPU% on the reference tier to CPU% on ``tier``.

    A machine with less compute capacity spends proportionally more of
    itself on the same work: factor = reference capacity / tier capacity.
    """
    return reference.capacity_units / tier.capacity_units


def resolve_reference_tier(coeffs: ModelCoefficients,
                           tiers: Sequence[HardwareTier] = ()) -> HardwareTier:
    """Find the tier object the coefficient table is expressed against,
    searching the given table first and the builtin tiers second."""
    for t in tiers:
        if t.name == coeffs.reference_tier:
            return t
    for t in DEFAULT_TIERS:
        if t.name == coeffs.reference_tier:
            return t
    raise SizerError(f"reference tier {coeffs.reference_tier!r} is not a known tier")


def estimate_demand(service: ServiceSpec, profile: RuntimeProfile,
                    coeffs: ModelCoefficients, tier: HardwareTier,
                    reference: HardwareTier | None = None) -> ResourceDemand:
    """Predict one service's runtime demand on ``tier``.

    ``reference`` is the tier object for ``coeffs.reference_tier``;
    resolved from the builtin table when not supplied.
    """
    p = coeffs.pair_for(service)
    if reference is None:
        reference = resolve_reference_tier(coeffs, (tier,))
    u = float(profile.concurrency)
    t = profile.throughput
    payload = profile.payload_total_kb
    cpu_ref = p.c0_cpu_pct + p.c1_cpu_per_user * u + p.c2_cpu_per_rps * t \
        + p.c3_cpu_per_rps_kb * t * payload
    memory = p.m0_mem_mb + p.m1_mem_per_user_mb * u + p.m2_mem_per_kb_mb * payload
    return ResourceDemand(
        cpu_pct=cpu_ref * tier_scale_factor(tier, reference),
        memory_mb=memory,
        tier=tier.name,
    )


def deployment_demand(service: ServiceSpec, coeffs: ModelCoefficients) -> ResourceDemand:
    """Static footprint of merely deploying a service: no CPU, only the
    deployment memory, expressed against the reference tier."""
    p = coeffs.pair_for(service)
    return ResourceDemand(cpu_pct=0.0, memory_mb=p.deploy_mem_mb, tier=coeffs.reference_tier)


# ---------------------------------------------------------------------------
# Performance curve
# ---------------------------------------------------------------------------

def curve_from_unit_cpu(tier_name: str, unit_cpu_pct: float, cpu_cap_pct: float,
                        max_services: int) -> PerformanceCurve:
    """Build the n-identical-services CPU curve from one service's cost."""
    if max_services < 1:
        raise ValueError("max_services must be >= 1")
    points = tuple((n, n * unit_cpu_pct) for n in range(1, max_services + 1))
    threshold = 0
    for n, cpu in points:
        if cpu < cpu_cap_pct:
            threshold = n
    return PerformanceCurve(tier=tier_name, points=points, degradation_threshold=threshold)


def performance_curve(profile: RuntimeProfile, service_template: ServiceSpec,
                      coeffs: ModelCoefficients, tier: HardwareTier,
                      packer: PackerConfig, max_services: int,
                      reference: HardwareTier | None = None) -> PerformanceCurve:
    """Predicted machine CPU for 1..max_services copies of the template
    service, with the degradation threshold against the packer's cap."""
    demand = estimate_demand(service_template, profile, coeffs, tier, reference)
    return curve_from_unit_cpu(tier.name, demand.cpu_pct, packer.cpu_cap_pct, max_services)


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------

def parse_samples_csv(text: str) -> list[CalibrationSample]:
    """Parse calibration samples from CSV.

    Expected header: tier,impl,binding,concurrency,throughput,payload_kb,
    cpu_pct,mem_mb. Raises CalibrationError naming the offending row.
    """
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise CalibrationError("bad_row", "empty CSV")
    header = [cell.strip() for cell in rows[0]]
    if header != CALIBRATION_CSV_HEADER:
        raise CalibrationError(
            "bad_row", f"expected header {','.join(CALIBRATION_CSV_HEADER)!r}, got {','.join(header)!r}")
    samples = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(CALIBRATION_CSV_HEADER):
            raise CalibrationError("bad_row", f"row {lineno}: expected {len(CALIBRATION_CSV_HEADER)} columns")
        tier, impl, binding = (cell.strip() for cell in row[:3])
        if not tier or not impl or not binding:
            raise CalibrationError("bad_row", f"row {lineno}: tier, impl and binding must be non-empty")
        try:
            concurrency = int(float(row[3]))
            throughput = float(row[4])
            payload = float(row[5])
            cpu = float(row[6])
            mem = float(row[7])
        except ValueError as exc:
            raise CalibrationError("bad_row", f"row {lineno}: {exc}") from None
        if min(concurrency, throughput, payload, cpu, mem) < 0:
            raise CalibrationError("bad_row", f"row {lineno}: values must be >= 0")
        samples.append(CalibrationSample(tier, impl, binding, concurrency,
                                         throughput, payload, cpu, mem))
    return samples


def _nonneg_lstsq(design: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Least squares with coefficients clamped to be non-negative.

    Plain OLS first; any negative coefficient is pinned to zero and the
    remaining columns refit, repeating until none are negative. Adequate
    at this problem size (at most four columns).
    """
    n_cols = design.shape[1]
    active = list(range(n_cols))
    coefs = np.zeros(n_cols)
    while active:
        sol, *_ = np.linalg.lstsq(design[:, active], target, rcond=None)
        if np.all(sol >= 0):
            coefs[:] = 0.0
            coefs[active] = sol
            return coefs
        worst = int(np.argmin(sol))
        del active[worst]
    return np.zeros(n_cols)


def _tier_by_name(name: str, tiers: Sequence[HardwareTier]) -> HardwareTier | None:
    for t in tiers:
        if t.name == name:
            return t
    return None


def fit_coefficients(samples: Sequence[CalibrationSample], reference: HardwareTier,
                     tier_table: Sequence[HardwareTier] = DEFAULT_TIERS,
                     prior: ModelCoefficients | None = None) -> ModelCoefficients:
    """Fit a coefficient table from measurement samples.

    Per (implementation, binding) pair, CPU readings from non-reference
    tiers are rescaled to the reference (divided by the tier scale
    factor), then CPU coefficients are fit on (1, U, T, T*P) and memory
    coefficients on (1, U, P), both with the non-negative clamp.

    The deployment footprint is the mean measured memory of zero-load
    samples (U = T = P = 0) when any exist; otherwise it is retained from
    ``prior`` (falling back to the builtin default).

    Raises CalibrationError per pair on unknown tiers, insufficient
    samples (< 4 CPU / < 3 memory rows), or collinear designs.
    """
    if not samples:
        raise CalibrationError("insufficient_samples", "no samples given")

    groups: dict[tuple[str, str], list[CalibrationSample]] = {}
    for s in samples:
        groups.setdefault(s.pair, []).append(s)

    pairs: dict[tuple[str, str], PairCoefficients] = {}
    for pair, group in groups.items():
        pair_name = "/".join(pair)
        cpu_rows, cpu_y, mem_rows, mem_y = [], [], [], []
        zero_load_mem = []
        for s in group:
            tier = _tier_by_name(s.tier, tier_table)
            if tier is None:
                raise CalibrationError("unknown_tier", f"pair {pair_name}: unknown tier {s.tier!r}", pair)
            factor = tier_scale_factor(tier, reference)
            u, t, p = float(s.concurrency), s.throughput, s.payload_total_kb
            cpu_rows.append([1.0, u, t, t * p])
            cpu_y.append(s.measured_cpu_pct / factor)
            mem_rows.append([1.0, u, p])
            mem_y.append(s.measured_mem_mb)
            if s.is_zero_load():
                zero_load_mem.append(s.measured_mem_mb)

        cpu_design = np.asarray(cpu_rows)
        mem_design = np.asarray(mem_rows)
        if len(group) < 4:
            raise CalibrationError(
                "insufficient_samples",
                f"pair {pair_name}: {len(group)} sample(s), need at least 4", pair)
        if np.linalg.matrix_rank(cpu_design) < 4:
            raise CalibrationError(
                "collinear_samples",
                f"pair {pair_name}: CPU design (1, U, T, T*P) is rank-deficient", pair)
        if np.linalg.matrix_rank(mem_design) < 3:
            raise CalibrationError(
                "collinear_samples",
                f"pair {pair_name}: memory design (1, U, P) is rank-deficient", pair)

        c = _nonneg_lstsq(cpu_design, np.asarray(cpu_y))
        m = _nonneg_lstsq(mem_design, np.asarray(mem_y))

        if zero_load_mem:
            deploy = float(np.mean(zero_load_mem))
        elif prior is not None and pair in prior.pairs:
            deploy = prior.pairs[pair].deploy_mem_mb
        else:
            deploy = DEFAULT_DEPLOY_MEM_MB
        pairs[pair] = PairCoefficients(
            c0_cpu_pct=float(c[0]), c1_cpu_per_user=float(c[1]),
            c2_cpu_per_rps=float(c[2]), c3_cpu_per_rps_kb=float(c[3]),
            m0_mem_mb=float(m[0]), m1_mem_per_user_mb=float(m[1]),
            m2_mem_per_kb_mb=float(m[2]), deploy_mem_mb=deploy,
        )
    return ModelCoefficients(reference_tier=reference.name, pairs=pairs)


def validate_extrapolation(coeffs: ModelCoefficients,
                           holdout: Sequence[CalibrationSample],
                           tolerance_cpu_pct: float,
                           tier_table: Sequence[HardwareTier] = DEFAULT_TIERS) -> ValidationReport:
    """Score the model against held-out samples.

    Predictions are made on each sample's own tier so errors compare
    like with like. Passing means the worst absolute CPU error is within
    the tolerance.
    """
    if not holdout:
        raise CalibrationError("empty_holdout", "holdout set is empty")
    reference = resolve_reference_tier(coeffs, tier_table)
    cpu_sq, mem_sq, max_abs_cpu = 0.0, 0.0, 0.0
    for s in holdout:
        tier = _tier_by_name(s.tier, tier_table)
        if tier is None:
            raise CalibrationError("unknown_tier", f"unknown tier {s.tier!r} in holdout")
        service = ServiceSpec(id="holdout", implementation_type=s.implementation_type,
                              binding_type=s.binding_type)
        profile = RuntimeProfile(concurrency=s.concurrency, throughput=s.throughput,
                                 payload_request_kb=s.payload_total_kb)
        demand = estimate_demand(service, profile, coeffs, tier, reference)
        cpu_err = demand.cpu_pct - s.measured_cpu_pct
        mem_err = demand.memory_mb - s.measured_mem_mb
        cpu_sq += cpu_err * cpu_err
        mem_sq += mem_err * mem_err
        max_abs_cpu = max(max_abs_cpu, abs(cpu_err))
    n = len(holdout)
    return ValidationReport(
        holdout_count=n,
        cpu_rmse_pct=math.sqrt(cpu_sq / n),
        mem_rmse_mb=math.sqrt(mem_sq / n),
        max_abs_cpu_err_pct=max_abs_cpu,
        passed=max_abs_cpu <= tolerance_cpu_pct,
    )
