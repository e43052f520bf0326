"""End-to-end sizing: demands per tier, packing, curves, recommendations.

``size`` is pure and deterministic for a given (request, coefficients)
pair: the default run id is a digest of both, and ``created_at`` stays
None until a server persists the run and stamps the wall clock. One
tier's failure never suppresses another tier's output; failed tiers get
an entry in ``per_tier_errors`` plus an advisory recommendation.

Deployment-level sizing uses only the static deployment footprint
(zero CPU). Runtime-level sizing uses the full demand model and adds
the deployment footprint to each service's memory.
"""

from __future__ import annotations

import hashlib
import math
from typing import Sequence

from .domain import (
    HardwareTier,
    MachinePlan,
    PerformanceCurve,
    Recommendation,
    ResourceDemand,
    ServiceSpec,
    SizerError,
    SizingRequest,
    SizingResult,
    TierError,
    Topology,
    dump_canonical,
)
from .packer import OversizedServiceError, PackingTrace, distribute_to_nodes, pack
from .perfmodel import (
    DEFAULT_COEFFICIENTS,
    ModelCoefficients,
    UnknownPairError,
    curve_from_unit_cpu,
    deployment_demand,
    estimate_demand,
    resolve_reference_tier,
)

DEFAULT_MACHINE_COUNT_THRESHOLD = 10
NEAR_DEGRADATION_FRACTION = 0.9


class NoFeasibleTierError(SizerError):
    """Every requested tier failed to produce a topology."""


def _run_id_digest(request: SizingRequest, coeffs: ModelCoefficients) -> str:
    blob = dump_canonical(request) + dump_canonical(coeffs)
    return "run-" + hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _tier_demands(request: SizingRequest, coeffs: ModelCoefficients,
                  tier: HardwareTier, reference: HardwareTier) -> list[tuple[ServiceSpec, ResourceDemand]]:
    demands = []
    for svc in request.services:
        deploy = deployment_demand(svc, coeffs)
        if request.level == "deployment":
            demand = ResourceDemand(cpu_pct=0.0, memory_mb=deploy.memory_mb, tier=tier.name)
        else:
            profile = svc.profile if svc.profile is not None else request.default_profile
            if profile is None:
                raise SizerError(f"service {svc.id!r} has no profile for runtime-level sizing")
            runtime = estimate_demand(svc, profile, coeffs, tier, reference)
            demand = ResourceDemand(cpu_pct=runtime.cpu_pct,
                                    memory_mb=runtime.memory_mb + deploy.memory_mb,
                                    tier=tier.name)
        demands.append((svc, demand))
    return demands


def _pack_single(demands: Sequence[tuple[ServiceSpec, ResourceDemand]],
                 tier: HardwareTier, request: SizingRequest) -> tuple[Topology, PackingTrace] | TierError:
    """All services on one machine, or the reason that cannot work."""
    config = request.packer
    if not demands:
        return Topology(tier=tier.name, machines=()), PackingTrace(())
    cpu_total = sum(d.cpu_pct for _, d in demands)
    node_count = math.ceil(len(demands) / config.services_per_node_cap)
    mem_total = sum(d.memory_mb for _, d in demands) + node_count * config.node_overhead_mb
    mem_cap = config.mem_cap_fraction * tier.ram_gb * 1024.0
    problems = []
    if cpu_total >= config.cpu_cap_pct:
        problems.append(f"CPU {cpu_total:g}% is not below the {config.cpu_cap_pct:g}% cap")
    if mem_total > mem_cap:
        problems.append(f"memory {mem_total:g} MB exceeds the usable {mem_cap:g} MB")
    if problems:
        return TierError(
            code="single_infeasible",
            message=f"{len(demands)} service(s) cannot share one {tier.name} machine: "
                    + "; ".join(problems))
    hosts = distribute_to_nodes([s.id for s, _ in demands], config, id_prefix="m1-")
    machine = MachinePlan(index=1, tier=tier.name, hosts=tuple(hosts),
                          total_cpu_pct=cpu_total, total_memory_mb=mem_total)
    events = [{"event": "place", "service_id": s.id, "machine_index": 1, "reason": "first_fit"}
              for s, _ in demands]
    events.append({"event": "close", "machine_index": 1, "services": len(demands),
                   "total_cpu_pct": cpu_total, "total_memory_mb": mem_total})
    return Topology(tier=tier.name, machines=(machine,)), PackingTrace(tuple(events))


def recommend(per_tier: dict[str, Topology], per_tier_errors: dict[str, TierError],
              request: SizingRequest,
              machine_count_threshold: int = DEFAULT_MACHINE_COUNT_THRESHOLD,
              near_degradation_fraction: float = NEAR_DEGRADATION_FRACTION,
              ) -> tuple[list[Recommendation], list[Recommendation]]:
    """Derive advisory messages from the per-tier outcomes.

    Returns (recommendations, warnings): tier switches when a plan needs
    more machines than the threshold and a larger tier was requested,
    architecture switches when the single-machine architecture is
    infeasible, infeasibility notes for tiers that failed outright, and
    near-degradation warnings for machines at or above 90% of the cap.
    """
    recs: list[Recommendation] = []
    warns: list[Recommendation] = []
    cap = request.packer.cpu_cap_pct

    for tier in request.tiers:
        err = per_tier_errors.get(tier.name)
        if err is not None:
            if err.code == "single_infeasible":
                recs.append(Recommendation(
                    kind="use_distributed", tier=tier.name,
                    message=f"{tier.name}: {err.message}; switch to the distributed architecture",
                    details={"code": err.code}))
            else:
                recs.append(Recommendation(
                    kind="infeasible", tier=tier.name,
                    message=f"{tier.name}: {err.message}",
                    details={"code": err.code, "service_id": err.service_id}))
            continue
        topo = per_tier.get(tier.name)
        if topo is None:
            continue
        count = len(topo.machines)
        if count > machine_count_threshold:
            larger = [t for t in request.tiers if t.capacity_units > tier.capacity_units]
            if larger:
                target = min(larger, key=lambda t: t.capacity_units)
                recs.append(Recommendation(
                    kind="switch_tier", tier=tier.name,
                    message=f"{tier.name} needs {count} machines (threshold {machine_count_threshold}); "
                            f"consider the larger {target.name} configuration",
                    details={"to_tier": target.name, "machine_count": count,
                             "machine_count_threshold": machine_count_threshold}))

    for tier in request.tiers:
        topo = per_tier.get(tier.name)
        if topo is None:
            continue
        for machine in topo.machines:
            if machine.total_cpu_pct >= near_degradation_fraction * cap:
                warns.append(Recommendation(
                    kind="near_degradation", tier=tier.name,
                    message=f"{tier.name} machine {machine.index} is at "
                            f"{machine.total_cpu_pct:g}% CPU, within 10% of the {cap:g}% cap",
                    details={"machine_index": machine.index,
                             "total_cpu_pct": machine.total_cpu_pct,
                             "cpu_cap_pct": cap}))
    return recs, warns


def size(request: SizingRequest, coeffs: ModelCoefficients | None = None, *,
         machine_count_threshold: int = DEFAULT_MACHINE_COUNT_THRESHOLD,
         curve_max_services: int | None = None,
         run_id: str | None = None,
         created_at: str | None = None) -> SizingResult:
    """Size a validated request across all its tiers.

    ``coeffs`` defaults to the request's inline table or the builtin
    model; a stored-profile reference must be resolved by the caller.
    """
    if coeffs is None:
        if isinstance(request.coefficients, ModelCoefficients):
            coeffs = request.coefficients
        elif request.coefficients is None:
            coeffs = DEFAULT_COEFFICIENTS
        else:
            raise SizerError(
                f"coefficients profile {request.coefficients!r} must be resolved before sizing")

    per_tier: dict[str, Topology] = {}
    per_tier_errors: dict[str, TierError] = {}
    curves: dict[str, PerformanceCurve] = {}
    traces: dict[str, PackingTrace] = {}

    try:
        reference = resolve_reference_tier(coeffs, request.tiers)
    except SizerError as exc:
        reference = None
        for tier in request.tiers:
            per_tier_errors[tier.name] = TierError(code="unknown_reference_tier", message=str(exc))

    max_services = curve_max_services or max(20, 2 * len(request.services))

    if reference is not None:
        for tier in request.tiers:
            try:
                demands = _tier_demands(request, coeffs, tier, reference)
            except UnknownPairError as exc:
                per_tier_errors[tier.name] = TierError(code="unknown_pair", message=str(exc))
                continue

            if demands:
                mean_cpu = sum(d.cpu_pct for _, d in demands) / len(demands)
                curves[tier.name] = curve_from_unit_cpu(
                    tier.name, mean_cpu, request.packer.cpu_cap_pct, max_services)

            if request.architecture == "single":
                outcome = _pack_single(demands, tier, request)
                if isinstance(outcome, TierError):
                    per_tier_errors[tier.name] = outcome
                    continue
                topology, trace = outcome
            else:
                try:
                    topology, trace = pack(demands, tier, request.packer)
                except OversizedServiceError as exc:
                    per_tier_errors[tier.name] = TierError(
                        code="oversized_service", message=str(exc), service_id=exc.service_id)
                    continue
            per_tier[tier.name] = topology
            traces[tier.name] = trace

    recs, warns = recommend(per_tier, per_tier_errors, request,
                            machine_count_threshold=machine_count_threshold)

    return SizingResult(
        run_id=run_id if run_id is not None else _run_id_digest(request, coeffs),
        created_at=created_at,
        request_echo=request,
        per_tier=per_tier,
        per_tier_errors=per_tier_errors,
        curves=curves,
        traces=traces,
        recommendations=tuple(recs),
        warnings=tuple(warns),
    )


def compare_tiers(result: SizingResult) -> list[str]:
    """Rank feasible tiers by total deployed capacity, ascending.

    The deployed capacity of a tier is machines x capacity_units; less
    hardware for the same services ranks higher. Ties prefer fewer
    machines, then the request's tier order.
    """
    request = result.request_echo
    order = {t.name: i for i, t in enumerate(request.tiers)}
    feasible = [name for name in result.per_tier if name in order]
    if not feasible:
        raise NoFeasibleTierError("no tier produced a topology")

    def key(name: str) -> tuple[float, int, int]:
        tier = request.tier_named(name)
        count = len(result.per_tier[name].machines)
        return (count * tier.capacity_units, count, order[name])

    return sorted(feasible, key=key)
