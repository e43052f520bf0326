"""Greedy placement of service demands onto machines of one tier.

The packer keeps one machine open at a time. It repeatedly scans the
unplaced services in input order and places the first one whose CPU
keeps the machine total strictly below the cap W and whose memory
(including any node overhead the new census implies) stays within the
usable RAM. When nothing fits, the machine is closed: its services are
spread round-robin over ceil(count / services_per_node_cap) nodes,
nodes are chunked into hosts of at most max_nodes_per_host, and a fresh
machine opens. Ties are broken by input order only, so the result is
deterministic.

A closed machine is never revisited. The CPU comparison is strict
(a service exactly filling the remaining cap does not fit).

``exact_pack_oracle`` is a test-only exhaustive set-partition search
giving the true minimum machine count for small CPU-only instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

from .domain import (
    HardwareTier,
    Host,
    MachinePlan,
    Node,
    PackerConfig,
    ResourceDemand,
    ServiceSpec,
    SizerError,
    Topology,
)


class OversizedServiceError(SizerError):
    """A single service cannot fit even an empty machine of this tier."""

    def __init__(self, service_id: str, tier: str, reason: str):
        self.service_id = service_id
        self.tier = tier
        self.reason = reason
        super().__init__(f"service {service_id!r} cannot fit an empty {tier} machine ({reason})")


@dataclass(frozen=True)
class PackingTrace:
    """Audit log of packing decisions.

    Events are dicts in order: ``place`` events carry service_id,
    machine_index and the rule that fired (first_fit when the head of
    the unplaced list was taken, lookahead when later services were
    skipped over), ``close`` events carry the machine's final totals.
    """

    events: tuple[dict[str, Any], ...]

    def to_dict(self) -> dict[str, Any]:
        return {"events": [dict(e) for e in self.events]}


def distribute_to_nodes(service_ids: Sequence[str], config: PackerConfig,
                        id_prefix: str = "") -> list[Host]:
    """Spread a machine's services across nodes and group nodes into hosts.

    Node count is ceil(len / services_per_node_cap); service k goes to
    node k mod node_count, so node sizes differ by at most one. Nodes are
    chunked into hosts of at most max_nodes_per_host.
    """
    if not service_ids:
        raise ValueError("distribute_to_nodes needs at least one service")
    node_count = math.ceil(len(service_ids) / config.services_per_node_cap)
    buckets: list[list[str]] = [[] for _ in range(node_count)]
    for k, sid in enumerate(service_ids):
        buckets[k % node_count].append(sid)
    nodes = [Node(id=f"{id_prefix}n{i + 1}", service_ids=tuple(b))
             for i, b in enumerate(buckets)]
    hosts = []
    for j in range(0, node_count, config.max_nodes_per_host):
        chunk = nodes[j:j + config.max_nodes_per_host]
        hosts.append(Host(id=f"{id_prefix}h{j // config.max_nodes_per_host + 1}", nodes=tuple(chunk)))
    return hosts


def _node_overhead(service_count: int, config: PackerConfig) -> float:
    return math.ceil(service_count / config.services_per_node_cap) * config.node_overhead_mb


def pack(demands: Sequence[tuple[ServiceSpec, ResourceDemand]], tier: HardwareTier,
         config: PackerConfig) -> tuple[Topology, PackingTrace]:
    """Pack per-service demands onto machines of ``tier``.

    Every demand must be expressed against ``tier`` and must fit an
    empty machine on its own (OversizedServiceError otherwise).
    """
    cpu_cap = config.cpu_cap_pct
    mem_cap = config.mem_cap_fraction * tier.ram_gb * 1024.0

    for service, demand in demands:
        if demand.tier != tier.name:
            raise ValueError(
                f"demand for {service.id!r} is expressed against tier {demand.tier!r}, not {tier.name!r}")
        if demand.cpu_pct >= cpu_cap:
            raise OversizedServiceError(service.id, tier.name,
                                        f"cpu {demand.cpu_pct} >= cap {cpu_cap}")
        if demand.memory_mb + _node_overhead(1, config) > mem_cap:
            raise OversizedServiceError(service.id, tier.name,
                                        f"memory {demand.memory_mb} MB exceeds usable {mem_cap} MB")

    unplaced = list(demands)
    machines: list[MachinePlan] = []
    events: list[dict[str, Any]] = []

    while unplaced:
        index = len(machines) + 1
        placed: list[tuple[ServiceSpec, ResourceDemand]] = []
        cpu_total = 0.0
        mem_services = 0.0

        while True:
            chosen = None
            for pos, (service, demand) in enumerate(unplaced):
                new_mem = mem_services + demand.memory_mb + _node_overhead(len(placed) + 1, config)
                if cpu_total + demand.cpu_pct < cpu_cap and new_mem <= mem_cap:
                    chosen = pos
                    break
            if chosen is None:
                break
            service, demand = unplaced.pop(chosen)
            events.append({
                "event": "place",
                "service_id": service.id,
                "machine_index": index,
                "reason": "first_fit" if chosen == 0 else "lookahead",
            })
            placed.append((service, demand))
            cpu_total += demand.cpu_pct
            mem_services += demand.memory_mb

        hosts = distribute_to_nodes([s.id for s, _ in placed], config, id_prefix=f"m{index}-")
        mem_total = mem_services + _node_overhead(len(placed), config)
        machines.append(MachinePlan(index=index, tier=tier.name, hosts=tuple(hosts),
                                    total_cpu_pct=cpu_total, total_memory_mb=mem_total))
        events.append({
            "event": "close",
            "machine_index": index,
            "services": len(placed),
            "total_cpu_pct": cpu_total,
            "total_memory_mb": mem_total,
        })

    return Topology(tier=tier.name, machines=tuple(machines)), PackingTrace(tuple(events))


def exact_pack_oracle(demands: Sequence[float], cpu_cap_pct: float) -> int:
    """Exact minimum machine count for CPU-only demands (test oracle).

    Exhaustive set-partition search with memoization: the machine holding
    the lowest-indexed unplaced service is enumerated over all feasible
    subsets (sum strictly below the cap), and the remainder is solved
    recursively. Limited to 14 services.
    """
    n = len(demands)
    if n > 14:
        raise ValueError("oracle instance too large (max 14 services)")
    for d in demands:
        if d >= cpu_cap_pct:
            raise ValueError(f"demand {d} does not fit under cap {cpu_cap_pct}")
    if n == 0:
        return 0

    # subset CPU sums, built incrementally over the lowest set bit
    sums = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        sums[mask] = sums[mask & (mask - 1)] + demands[low]

    full = (1 << n) - 1
    if sums[full] < cpu_cap_pct:
        return 1

    memo: dict[int, int] = {0: 0}

    def best(mask: int) -> int:
        cached = memo.get(mask)
        if cached is not None:
            return cached
        low_bit = mask & -mask
        rest = mask ^ low_bit
        result = n  # worst case: one machine per service
        sub = rest
        while True:
            machine = sub | low_bit
            if sums[machine] < cpu_cap_pct:
                candidate = 1 + best(mask ^ machine)
                if candidate < result:
                    result = candidate
            if sub == 0:
                break
            sub = (sub - 1) & rest
        memo[mask] = result
        return result

    return best(full)
