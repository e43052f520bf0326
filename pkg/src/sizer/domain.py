"""Core vocabulary for the sizing engine.

Holds the immutable value types shared by every other module (hardware
tiers, services and their workloads, resource demands, packing output,
requests and results), request validation/normalization, and the
canonical JSON form used for files, HTTP bodies, and golden tests.

Canonical JSON: snake_case field names matching the dataclass fields,
numbers at full precision (shortest round-trip repr), lists in order,
two-space indent, trailing newline. Serializing the same value twice
yields identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, TYPE_CHECKING

if TYPE_CHECKING:
    from .perfmodel import ModelCoefficients


MAX_IDENTIFIER_LEN = 64

ARCHITECTURES = ("single", "distributed")
LEVELS = ("deployment", "runtime")
WORKLOAD_TYPES = ("steady", "burst")

# Implementation/binding identifiers accepted out of the box. The set is
# open: any pair present in the coefficient table in effect is also valid.
DEFAULT_IMPLEMENTATION_TYPES = ("java", "mediation", "webapp")
DEFAULT_BINDING_TYPES = ("soap_http", "jms", "rest")


class SizerError(Exception):
    """Base class for errors raised by this package."""


class RequestValidationError(SizerError):
    """A sizing request failed validation.

    Carries the complete list of violations, each a dict with at least
    ``code``, ``path`` and ``message`` keys.
    """

    def __init__(self, errors: list[dict[str, Any]]):
        self.errors = errors
        super().__init__(f"{len(errors)} validation error(s)")


class ConfigError(SizerError):
    """Invalid server or file configuration (bad tier file, etc.)."""


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HardwareTier:
    """A standard machine class.

    ``cores_per_processor`` counts cores on each socket: the builtin
    performance-lab profile is a 2-socket, 12-cores-per-socket machine,
    i.e. 24 logical cores total.
    """

    name: str
    processors: int
    cores_per_processor: int
    frequency_ghz: float
    ram_gb: float

    @property
    def total_cores(self) -> int:
        return self.processors * self.cores_per_processor

    @property
    def capacity_units(self) -> float:
        """Relative compute capacity: processors x cores x frequency."""
        return self.processors * self.cores_per_processor * self.frequency_ghz

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "processors": self.processors,
            "cores_per_processor": self.cores_per_processor,
            "frequency_ghz": self.frequency_ghz,
            "ram_gb": self.ram_gb,
        }


# The three builtin machine classes. Used whenever a request or server
# configuration does not supply its own tier table.
DEFAULT_TIERS: tuple[HardwareTier, ...] = (
    HardwareTier("medium", 2, 4, 3.07, 32.0),
    HardwareTier("large", 2, 8, 3.07, 64.0),
    HardwareTier("perflab", 2, 12, 3.07, 64.0),
)


@dataclass(frozen=True)
class RuntimeProfile:
    """Workload carried by one service at runtime."""

    workload_type: str = "steady"
    concurrency: int = 0
    throughput: float = 0.0
    payload_request_kb: float = 0.0
    payload_response_kb: float = 0.0

    @property
    def payload_total_kb(self) -> float:
        return self.payload_request_kb + self.payload_response_kb

    def to_dict(self) -> dict[str, Any]:
        return {
            "workload_type": self.workload_type,
            "concurrency": self.concurrency,
            "throughput": self.throughput,
            "payload_request_kb": self.payload_request_kb,
            "payload_response_kb": self.payload_response_kb,
        }


@dataclass(frozen=True)
class ServiceSpec:
    """One deployable service."""

    id: str
    implementation_type: str = "java"
    binding_type: str = "soap_http"
    profile: RuntimeProfile | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "implementation_type": self.implementation_type,
            "binding_type": self.binding_type,
            "profile": self.profile.to_dict() if self.profile else None,
        }


@dataclass(frozen=True)
class ResourceDemand:
    """Resources one service needs, expressed against a specific tier.

    ``cpu_pct`` is percent of one whole machine of that tier; comparing
    demands across tiers requires rescaling (see perfmodel).
    """

    cpu_pct: float
    memory_mb: float
    tier: str

    def to_dict(self) -> dict[str, Any]:
        return {"cpu_pct": self.cpu_pct, "memory_mb": self.memory_mb, "tier": self.tier}


@dataclass(frozen=True)
class PackerConfig:
    """Placement limits for the packer.

    ``cpu_cap_pct`` is the hard per-machine CPU ceiling W: machine totals
    stay strictly below it. ``mem_cap_fraction`` is the usable share of a
    tier's RAM. Range checks ((0, 100] and (0, 1]) apply to incoming
    requests; the packer itself accepts any positive caps so callers can
    work in rescaled units.
    """

    cpu_cap_pct: float = 80.0
    mem_cap_fraction: float = 0.75
    max_nodes_per_host: int = 5
    services_per_node_cap: int = 4
    node_overhead_mb: float = 512.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "cpu_cap_pct": self.cpu_cap_pct,
            "mem_cap_fraction": self.mem_cap_fraction,
            "max_nodes_per_host": self.max_nodes_per_host,
            "services_per_node_cap": self.services_per_node_cap,
            "node_overhead_mb": self.node_overhead_mb,
        }


@dataclass(frozen=True)
class Node:
    id: str
    service_ids: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "service_ids": list(self.service_ids)}


@dataclass(frozen=True)
class Host:
    id: str
    nodes: tuple[Node, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "nodes": [n.to_dict() for n in self.nodes]}


@dataclass(frozen=True)
class MachinePlan:
    """One machine of a tier with its hosts, nodes, and totals."""

    index: int
    tier: str
    hosts: tuple[Host, ...]
    total_cpu_pct: float
    total_memory_mb: float

    def service_ids(self) -> list[str]:
        return [sid for h in self.hosts for n in h.nodes for sid in n.service_ids]

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "tier": self.tier,
            "hosts": [h.to_dict() for h in self.hosts],
            "total_cpu_pct": self.total_cpu_pct,
            "total_memory_mb": self.total_memory_mb,
        }


@dataclass(frozen=True)
class Topology:
    """Packing output for one tier: an ordered list of machine plans."""

    tier: str
    machines: tuple[MachinePlan, ...]

    def service_ids(self) -> list[str]:
        return [sid for m in self.machines for sid in m.service_ids()]

    def to_dict(self) -> dict[str, Any]:
        return {"tier": self.tier, "machines": [m.to_dict() for m in self.machines]}


@dataclass(frozen=True)
class PerformanceCurve:
    """Predicted machine CPU as a function of identical-service count.

    ``degradation_threshold`` is the largest plotted count whose predicted
    total stays under the CPU cap (0 when even one service exceeds it).
    """

    tier: str
    points: tuple[tuple[int, float], ...]
    degradation_threshold: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "tier": self.tier,
            "points": [[n, cpu] for n, cpu in self.points],
            "degradation_threshold": self.degradation_threshold,
        }


@dataclass(frozen=True)
class SizingRequest:
    """A validated, normalized sizing request.

    ``coefficients`` is either None (use the builtin default model), the
    name of a stored calibration profile, or an inline ModelCoefficients.
    """

    services: tuple[ServiceSpec, ...]
    architecture: str
    level: str
    tiers: tuple[HardwareTier, ...]
    packer: PackerConfig
    coefficients: "ModelCoefficients | str | None" = None
    default_profile: RuntimeProfile | None = None

    def tier_named(self, name: str) -> HardwareTier:
        for t in self.tiers:
            if t.name == name:
                return t
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        if self.coefficients is None or isinstance(self.coefficients, str):
            coeffs: Any = self.coefficients
        else:
            coeffs = self.coefficients.to_dict()
        return {
            "services": [s.to_dict() for s in self.services],
            "architecture": self.architecture,
            "level": self.level,
            "tiers": [t.to_dict() for t in self.tiers],
            "packer": self.packer.to_dict(),
            "coefficients": coeffs,
            "default_profile": self.default_profile.to_dict() if self.default_profile else None,
        }


@dataclass(frozen=True)
class TierError:
    """Why a requested tier produced no topology."""

    code: str
    message: str
    service_id: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "service_id": self.service_id}


@dataclass(frozen=True)
class Recommendation:
    """A structured advisory message attached to a sizing result.

    Kinds in use: ``switch_tier``, ``use_distributed``, ``infeasible``
    (recommendations) and ``near_degradation`` (warnings).
    """

    kind: str
    tier: str | None
    message: str
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "tier": self.tier,
            "message": self.message,
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class SizingResult:
    """Everything one sizing run produced.

    ``per_tier`` holds a Topology for every tier that could be sized;
    tiers that could not carry an entry in ``per_tier_errors`` instead,
    so together the two maps cover every requested tier. ``created_at``
    is None for purely deterministic (offline) runs and is stamped by the
    server when a run is persisted.
    """

    run_id: str
    created_at: str | None
    request_echo: SizingRequest
    per_tier: dict[str, Topology]
    per_tier_errors: dict[str, TierError]
    curves: dict[str, PerformanceCurve]
    traces: "dict[str, PackingTrace]"
    recommendations: tuple[Recommendation, ...]
    warnings: tuple[Recommendation, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "run_id": self.run_id,
            "created_at": self.created_at,
            "request_echo": self.request_echo.to_dict(),
            "per_tier": {k: v.to_dict() for k, v in self.per_tier.items()},
            "per_tier_errors": {k: v.to_dict() for k, v in self.per_tier_errors.items()},
            "curves": {k: v.to_dict() for k, v in self.curves.items()},
            "traces": {k: v.to_dict() for k, v in self.traces.items()},
            "recommendations": [r.to_dict() for r in self.recommendations],
            "warnings": [w.to_dict() for w in self.warnings],
        }


if TYPE_CHECKING:
    from .packer import PackingTrace


# ---------------------------------------------------------------------------
# Canonical JSON
# ---------------------------------------------------------------------------

def to_canonical_json(payload: Any) -> str:
    """Serialize to the canonical byte form (stable across runs)."""
    return json.dumps(payload, ensure_ascii=False, allow_nan=False, indent=2) + "\n"


def dump_canonical(obj: Any) -> str:
    """Canonical JSON for any domain value exposing to_dict()."""
    return to_canonical_json(obj.to_dict() if hasattr(obj, "to_dict") else obj)


# ---------------------------------------------------------------------------
# Parsing helpers (shared by validation and file loaders)
# ---------------------------------------------------------------------------

class _Collector:
    """Accumulates validation violations so every problem is reported."""

    def __init__(self) -> None:
        self.errors: list[dict[str, Any]] = []

    def add(self, code: str, path: str, message: str) -> None:
        self.errors.append({"code": code, "path": path, "message": message})

    def raise_if_any(self) -> None:
        if self.errors:
            raise RequestValidationError(self.errors)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _get_number(obj: Mapping[str, Any], key: str, path: str, errs: _Collector,
                default: float | None = None, minimum: float | None = None,
                maximum: float | None = None, strict_min: bool = False) -> float:
    if key not in obj or obj[key] is None:
        if default is None:
            errs.add("missing_field", f"{path}.{key}", f"required field {key!r} is missing")
            return 0.0
        return default
    value = obj[key]
    if not _is_number(value):
        errs.add("invalid_type", f"{path}.{key}", f"{key!r} must be a finite number")
        return 0.0
    value = float(value)
    if minimum is not None and (value <= minimum if strict_min else value < minimum):
        op = ">" if strict_min else ">="
        errs.add("out_of_range", f"{path}.{key}", f"{key!r} must be {op} {minimum}")
    if maximum is not None and value > maximum:
        errs.add("out_of_range", f"{path}.{key}", f"{key!r} must be <= {maximum}")
    return value


def _get_int(obj: Mapping[str, Any], key: str, path: str, errs: _Collector,
             default: int | None = None, minimum: int | None = None) -> int:
    if key not in obj or obj[key] is None:
        if default is None:
            errs.add("missing_field", f"{path}.{key}", f"required field {key!r} is missing")
            return 0
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        errs.add("invalid_type", f"{path}.{key}", f"{key!r} must be an integer")
        return 0
    if minimum is not None and value < minimum:
        errs.add("out_of_range", f"{path}.{key}", f"{key!r} must be >= {minimum}")
    return value


def _check_identifier(value: Any, path: str, errs: _Collector) -> str:
    if not isinstance(value, str) or not value or len(value) > MAX_IDENTIFIER_LEN:
        errs.add("invalid_identifier", path,
                 f"identifier must be a non-empty string of at most {MAX_IDENTIFIER_LEN} characters")
        return ""
    return value


def _check_enum(obj: Mapping[str, Any], key: str, allowed: tuple[str, ...],
                path: str, errs: _Collector, default: str | None = None) -> str:
    if key not in obj or obj[key] is None:
        if default is None:
            errs.add("missing_field", f"{path}.{key}", f"required field {key!r} is missing")
            return allowed[0]
        return default
    value = obj[key]
    if not isinstance(value, str) or value not in allowed:
        errs.add("invalid_value", f"{path}.{key}", f"{key!r} must be one of {list(allowed)}")
        return allowed[0]
    return value


def _reject_unknown_keys(obj: Mapping[str, Any], known: Iterable[str], path: str, errs: _Collector) -> None:
    for key in obj:
        if key not in known:
            errs.add("unknown_field", f"{path}.{key}", f"unknown field {key!r}")


def parse_tier(obj: Any, path: str, errs: _Collector) -> HardwareTier:
    if not isinstance(obj, Mapping):
        errs.add("invalid_type", path, "tier must be an object")
        return HardwareTier("invalid", 1, 1, 1.0, 1.0)
    _reject_unknown_keys(obj, ("name", "processors", "cores_per_processor", "frequency_ghz", "ram_gb"), path, errs)
    name = _check_identifier(obj.get("name"), f"{path}.name", errs)
    processors = _get_int(obj, "processors", path, errs, minimum=1)
    cores = _get_int(obj, "cores_per_processor", path, errs, minimum=1)
    freq = _get_number(obj, "frequency_ghz", path, errs, minimum=0.0, strict_min=True)
    ram = _get_number(obj, "ram_gb", path, errs, minimum=0.0, strict_min=True)
    return HardwareTier(name, processors, cores, freq, ram)


def parse_profile(obj: Any, path: str, errs: _Collector) -> RuntimeProfile:
    if not isinstance(obj, Mapping):
        errs.add("invalid_type", path, "profile must be an object")
        return RuntimeProfile()
    _reject_unknown_keys(obj, ("workload_type", "concurrency", "throughput",
                               "payload_request_kb", "payload_response_kb"), path, errs)
    return RuntimeProfile(
        workload_type=_check_enum(obj, "workload_type", WORKLOAD_TYPES, path, errs, default="steady"),
        concurrency=_get_int(obj, "concurrency", path, errs, default=0, minimum=0),
        throughput=_get_number(obj, "throughput", path, errs, default=0.0, minimum=0.0),
        payload_request_kb=_get_number(obj, "payload_request_kb", path, errs, default=0.0, minimum=0.0),
        payload_response_kb=_get_number(obj, "payload_response_kb", path, errs, default=0.0, minimum=0.0),
    )


def parse_packer_config(obj: Any, path: str, errs: _Collector) -> PackerConfig:
    if not isinstance(obj, Mapping):
        errs.add("invalid_type", path, "packer must be an object")
        return PackerConfig()
    _reject_unknown_keys(obj, ("cpu_cap_pct", "mem_cap_fraction", "max_nodes_per_host",
                               "services_per_node_cap", "node_overhead_mb"), path, errs)
    return PackerConfig(
        cpu_cap_pct=_get_number(obj, "cpu_cap_pct", path, errs, default=80.0,
                                minimum=0.0, maximum=100.0, strict_min=True),
        mem_cap_fraction=_get_number(obj, "mem_cap_fraction", path, errs, default=0.75,
                                     minimum=0.0, maximum=1.0, strict_min=True),
        max_nodes_per_host=_get_int(obj, "max_nodes_per_host", path, errs, default=5, minimum=1),
        services_per_node_cap=_get_int(obj, "services_per_node_cap", path, errs, default=4, minimum=1),
        node_overhead_mb=_get_number(obj, "node_overhead_mb", path, errs, default=512.0, minimum=0.0),
    )


def _parse_service(obj: Any, path: str, errs: _Collector) -> ServiceSpec:
    if not isinstance(obj, Mapping):
        errs.add("invalid_type", path, "service must be an object")
        return ServiceSpec(id="invalid")
    _reject_unknown_keys(obj, ("id", "implementation_type", "binding_type", "profile"), path, errs)
    sid = _check_identifier(obj.get("id"), f"{path}.id", errs)
    impl = obj.get("implementation_type", "java")
    binding = obj.get("binding_type", "soap_http")
    impl = _check_identifier(impl, f"{path}.implementation_type", errs)
    binding = _check_identifier(binding, f"{path}.binding_type", errs)
    profile = None
    if obj.get("profile") is not None:
        profile = parse_profile(obj["profile"], f"{path}.profile", errs)
    return ServiceSpec(id=sid, implementation_type=impl, binding_type=binding, profile=profile)


# ---------------------------------------------------------------------------
# Request validation
# ---------------------------------------------------------------------------

def validate_request(raw: Mapping[str, Any] | SizingRequest,
                     coefficients: "ModelCoefficients | None" = None) -> SizingRequest:
    """Validate and normalize a sizing request.

    Accepts a parsed-JSON mapping or an existing SizingRequest (the
    latter is round-tripped through its dict form, which makes
    validation idempotent). Fills defaults: the builtin tier table when
    ``tiers`` is missing or empty, the default PackerConfig, and the
    declared default profile on services that lack one.

    ``coefficients`` is the coefficient table in effect when the request
    does not carry an inline table; it widens the set of acceptable
    implementation/binding identifiers.

    Raises RequestValidationError with the complete violation list.
    """
    if isinstance(raw, SizingRequest):
        raw = raw.to_dict()
    errs = _Collector()
    if not isinstance(raw, Mapping):
        errs.add("invalid_type", "$", "request body must be a JSON object")
        errs.raise_if_any()

    _reject_unknown_keys(raw, ("services", "architecture", "level", "tiers",
                               "packer", "coefficients", "default_profile"), "$", errs)

    architecture = _check_enum(raw, "architecture", ARCHITECTURES, "$", errs)
    level = _check_enum(raw, "level", LEVELS, "$", errs)

    # Services
    services: list[ServiceSpec] = []
    raw_services = raw.get("services")
    if not isinstance(raw_services, list):
        errs.add("missing_field" if "services" not in raw else "invalid_type",
                 "$.services", "'services' must be a list")
        raw_services = []
    for i, svc in enumerate(raw_services):
        services.append(_parse_service(svc, f"$.services[{i}]", errs))

    seen: dict[str, int] = {}
    for i, svc in enumerate(services):
        if svc.id in seen:
            errs.add("duplicate_id", f"$.services[{i}].id", f"duplicate service id {svc.id!r}")
        else:
            seen[svc.id] = i

    # Tiers (empty or missing list falls back to the builtin three)
    raw_tiers = raw.get("tiers")
    if raw_tiers is None or raw_tiers == []:
        tiers: tuple[HardwareTier, ...] = DEFAULT_TIERS
    elif not isinstance(raw_tiers, list):
        errs.add("invalid_type", "$.tiers", "'tiers' must be a list")
        tiers = DEFAULT_TIERS
    else:
        tiers = tuple(parse_tier(t, f"$.tiers[{i}]", errs) for i, t in enumerate(raw_tiers))
        names = [t.name for t in tiers]
        for i, n in enumerate(names):
            if names.index(n) != i:
                errs.add("duplicate_tier", f"$.tiers[{i}].name", f"duplicate tier name {n!r}")

    packer = parse_packer_config(raw["packer"], "$.packer", errs) if raw.get("packer") is not None else PackerConfig()

    # Coefficients: None, a stored-profile name, or an inline table.
    coeffs_field: Any = raw.get("coefficients")
    inline_coeffs: "ModelCoefficients | None" = None
    if coeffs_field is None or isinstance(coeffs_field, str):
        if isinstance(coeffs_field, str):
            _check_identifier(coeffs_field, "$.coefficients", errs)
    elif isinstance(coeffs_field, Mapping):
        from .perfmodel import parse_coefficients
        try:
            inline_coeffs = parse_coefficients(coeffs_field)
            coeffs_field = inline_coeffs
        except SizerError as exc:
            errs.add("invalid_coefficients", "$.coefficients", str(exc))
            coeffs_field = None
    else:
        errs.add("invalid_type", "$.coefficients",
                 "'coefficients' must be null, a profile name, or an inline table")
        coeffs_field = None

    default_profile = None
    if raw.get("default_profile") is not None:
        default_profile = parse_profile(raw["default_profile"], "$.default_profile", errs)

    # Implementation/binding identifiers must come from the declared set:
    # the builtin defaults plus anything the coefficient table in effect names.
    table = inline_coeffs if inline_coeffs is not None else coefficients
    allowed_impl = set(DEFAULT_IMPLEMENTATION_TYPES)
    allowed_binding = set(DEFAULT_BINDING_TYPES)
    if table is not None:
        for impl, binding in table.pairs:
            allowed_impl.add(impl)
            allowed_binding.add(binding)
    for i, svc in enumerate(services):
        if svc.implementation_type and svc.implementation_type not in allowed_impl:
            errs.add("unknown_type", f"$.services[{i}].implementation_type",
                     f"unknown implementation type {svc.implementation_type!r}")
        if svc.binding_type and svc.binding_type not in allowed_binding:
            errs.add("unknown_type", f"$.services[{i}].binding_type",
                     f"unknown binding type {svc.binding_type!r}")

    # Inline reference tier must name a known tier (request's or builtin).
    if inline_coeffs is not None:
        known = {t.name for t in tiers} | {t.name for t in DEFAULT_TIERS}
        if inline_coeffs.reference_tier not in known:
            errs.add("unknown_reference_tier", "$.coefficients.reference_tier",
                     f"reference tier {inline_coeffs.reference_tier!r} is not a known tier")

    # Fill the declared default profile, then enforce the runtime-level rule.
    if default_profile is not None:
        services = [ServiceSpec(s.id, s.implementation_type, s.binding_type,
                                s.profile if s.profile is not None else default_profile)
                    for s in services]
    if level == "runtime":
        for i, svc in enumerate(services):
            if svc.profile is None:
                errs.add("missing_profile", f"$.services[{i}]",
                         f"service {svc.id!r} has no profile and no default profile is declared")

    errs.raise_if_any()
    return SizingRequest(
        services=tuple(services),
        architecture=architecture,
        level=level,
        tiers=tiers,
        packer=packer,
        coefficients=coeffs_field,
        default_profile=default_profile,
    )


# ---------------------------------------------------------------------------
# Result parsing (inverse of SizingResult.to_dict)
# ---------------------------------------------------------------------------

def _topology_from_dict(obj: Mapping[str, Any]) -> Topology:
    machines = tuple(
        MachinePlan(
            index=m["index"],
            tier=m["tier"],
            hosts=tuple(
                Host(id=h["id"], nodes=tuple(
                    Node(id=n["id"], service_ids=tuple(n["service_ids"])) for n in h["nodes"]))
                for h in m["hosts"]),
            total_cpu_pct=m["total_cpu_pct"],
            total_memory_mb=m["total_memory_mb"],
        )
        for m in obj["machines"]
    )
    return Topology(tier=obj["tier"], machines=machines)


def _curve_from_dict(obj: Mapping[str, Any]) -> PerformanceCurve:
    return PerformanceCurve(
        tier=obj["tier"],
        points=tuple((int(n), float(cpu)) for n, cpu in obj["points"]),
        degradation_threshold=obj["degradation_threshold"],
    )


def parse_tier_table(raw: Any) -> tuple[HardwareTier, ...]:
    """Parse a standalone tier table (a JSON list of tier objects).

    Raises RequestValidationError listing every problem; an empty table
    is rejected.
    """
    errs = _Collector()
    if not isinstance(raw, list) or not raw:
        errs.add("invalid_type", "$", "tier table must be a non-empty JSON list")
        errs.raise_if_any()
    tiers = tuple(parse_tier(t, f"$[{i}]", errs) for i, t in enumerate(raw))
    names = [t.name for t in tiers]
    for i, n in enumerate(names):
        if names.index(n) != i:
            errs.add("duplicate_tier", f"$[{i}].name", f"duplicate tier name {n!r}")
    errs.raise_if_any()
    return tiers


def parse_profile_json(raw: Any) -> RuntimeProfile:
    """Parse a standalone runtime profile object, raising
    RequestValidationError with the full violation list."""
    errs = _Collector()
    profile = parse_profile(raw, "$", errs)
    errs.raise_if_any()
    return profile


def request_from_dict(obj: Mapping[str, Any]) -> SizingRequest:
    """Parse a previously serialized (already validated) request."""
    return validate_request(obj)


def result_from_dict(obj: Mapping[str, Any]) -> SizingResult:
    """Parse a previously serialized SizingResult."""
    from .packer import PackingTrace
    return SizingResult(
        run_id=obj["run_id"],
        created_at=obj["created_at"],
        request_echo=request_from_dict(obj["request_echo"]),
        per_tier={k: _topology_from_dict(v) for k, v in obj["per_tier"].items()},
        per_tier_errors={k: TierError(v["code"], v["message"], v.get("service_id"))
                         for k, v in obj["per_tier_errors"].items()},
        curves={k: _curve_from_dict(v) for k, v in obj["curves"].items()},
        traces={k: PackingTrace(tuple(dict(e) for e in v["events"]))
                for k, v in obj["traces"].items()},
        recommendations=tuple(Recommendation(r["kind"], r["tier"], r["message"], dict(r["details"]))
                              for r in obj["recommendations"]),
        warnings=tuple(Recommendation(w["kind"], w["tier"], w["message"], dict(w["details"]))
                       for w in obj["warnings"]),
    )
