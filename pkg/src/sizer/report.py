"""Render sizing results into downloadable artifacts.

Three artifact kinds: topology diagrams and infrastructure diagrams as
Graphviz DOT text, performance curves as CSV, and the full summary as
Markdown. All emitters are pure functions of their input and produce
byte-identical output for identical input (golden-file tested), so the
HTTP layer and the CLI can both serve them without divergence.
"""

from __future__ import annotations

import io

from .domain import PerformanceCurve, SizingResult, Topology
from .engine import NoFeasibleTierError, compare_tiers
from .perfmodel import ModelCoefficients


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|")


def _fmt(value: float) -> str:
    """Fixed one-decimal rendering for human-facing totals."""
    return f"{value:.1f}"


def emit_topology_graph(topology: Topology) -> str:
    """Topology as DOT: machine clusters with nested host clusters and
    one vertex per node listing its service ids."""
    out = io.StringIO()
    out.write("digraph topology {\n")
    out.write('  graph [rankdir=TB fontname="Helvetica"];\n')
    out.write('  node [shape=box fontname="Helvetica"];\n')
    for machine in topology.machines:
        m = machine.index
        out.write(f"  subgraph cluster_m{m} {{\n")
        label = (f"{_dot_escape(topology.tier)} machine {m}\\n"
                 f"{_fmt(machine.total_cpu_pct)}% CPU, {_fmt(machine.total_memory_mb)} MB")
        out.write(f'    label="{label}";\n')
        for h, host in enumerate(machine.hosts, start=1):
            out.write(f"    subgraph cluster_m{m}_h{h} {{\n")
            out.write(f'      label="host {_dot_escape(host.id)}";\n')
            for node in host.nodes:
                services = "\\n".join(_dot_escape(sid) for sid in node.service_ids)
                out.write(f'      "{_dot_escape(node.id)}" [label="node {_dot_escape(node.id)}\\n{services}"];\n')
            out.write("    }\n")
        out.write("  }\n")
    out.write("}\n")
    return out.getvalue()


def emit_performance_curve(curve: PerformanceCurve, cpu_cap_pct: float) -> str:
    """Curve as CSV with a safe/degraded region column.

    A point is safe while its predicted total stays strictly below the
    cap. The threshold row (last safe count) is flagged in a fourth
    column so plots can mark the knee.
    """
    if not curve.points:
        raise ValueError("curve has no points")
    out = io.StringIO()
    out.write("service_count,predicted_cpu_pct,region,is_threshold\n")
    for n, cpu in curve.points:
        region = "safe" if cpu < cpu_cap_pct else "degraded"
        flag = "true" if n == curve.degradation_threshold else "false"
        out.write(f"{n},{cpu!r},{region},{flag}\n")
    return out.getvalue()


def emit_infrastructure_diagram(result: SizingResult) -> str:
    """Schematic component graph for the top-ranked tier: a load
    balancer fanning out to machines, hosts and nodes, plus a
    management/monitoring component attached to every machine."""
    ranking = compare_tiers(result)  # raises NoFeasibleTierError when empty
    top = ranking[0]
    topology = result.per_tier[top]
    out = io.StringIO()
    out.write("digraph infrastructure {\n")
    out.write('  graph [rankdir=LR fontname="Helvetica"];\n')
    out.write('  node [shape=box fontname="Helvetica"];\n')
    out.write('  "load_balancer" [label="load balancer" shape=ellipse];\n')
    out.write('  "monitoring" [label="management & monitoring" shape=ellipse];\n')
    for machine in topology.machines:
        mid = f"machine_{machine.index}"
        out.write(f'  "{mid}" [label="{_dot_escape(top)} machine {machine.index}"];\n')
        out.write(f'  "load_balancer" -> "{mid}";\n')
        out.write(f'  "monitoring" -> "{mid}" [style=dashed];\n')
        for host in machine.hosts:
            hid = f"{mid}_{host.id}"
            out.write(f'  "{_dot_escape(hid)}" [label="host {_dot_escape(host.id)}"];\n')
            out.write(f'  "{mid}" -> "{_dot_escape(hid)}";\n')
            for node in host.nodes:
                nid = f"{mid}_{node.id}"
                count = len(node.service_ids)
                plural = "" if count == 1 else "s"
                out.write(f'  "{_dot_escape(nid)}" [label="node {_dot_escape(node.id)} '
                          f'({count} service{plural})"];\n')
                out.write(f'  "{_dot_escape(hid)}" -> "{_dot_escape(nid)}";\n')
    out.write("}\n")
    return out.getvalue()


def _describe_coefficients(coeffs: "ModelCoefficients | str | None") -> str:
    if coeffs is None:
        return "builtin default model"
    if isinstance(coeffs, str):
        return f"stored profile '{coeffs}'"
    pairs = len(coeffs.pairs)
    plural = "" if pairs == 1 else "s"
    return f"inline table ({pairs} pair{plural}, reference '{coeffs.reference_tier}')"


def emit_summary_report(result: SizingResult) -> str:
    """The downloadable report: echoed inputs, per-tier topology tables,
    degradation thresholds, recommendations, and the packing trace."""
    req = result.request_echo
    out = io.StringIO()
    out.write("# Sizing Summary\n\n")

    # 1. Echoed inputs
    out.write("## Inputs\n\n")
    out.write(f"- run id: {result.run_id}\n")
    out.write(f"- created at: {result.created_at if result.created_at else '-'}\n")
    out.write(f"- architecture: {req.architecture}\n")
    out.write(f"- level: {req.level}\n")
    out.write(f"- coefficients: {_describe_coefficients(req.coefficients)}\n")
    out.write(f"- CPU cap per machine: {_fmt(req.packer.cpu_cap_pct)}%\n")
    out.write(f"- usable memory fraction: {req.packer.mem_cap_fraction!r}\n")
    out.write(f"- max nodes per host: {req.packer.max_nodes_per_host}\n")
    out.write(f"- services per node cap: {req.packer.services_per_node_cap}\n")
    out.write(f"- node overhead: {_fmt(req.packer.node_overhead_mb)} MB\n")
    out.write("\n### Tiers\n\n")
    out.write("| tier | processors | cores per processor | frequency (GHz) | RAM (GB) |\n")
    out.write("| --- | --- | --- | --- | --- |\n")
    for t in req.tiers:
        out.write(f"| {_md_cell(t.name)} | {t.processors} | {t.cores_per_processor} "
                  f"| {t.frequency_ghz!r} | {t.ram_gb!r} |\n")
    out.write("\n### Services\n\n")
    if req.services:
        out.write("| id | implementation | binding | workload | concurrency "
                  "| throughput (req/s) | payload (KB) |\n")
        out.write("| --- | --- | --- | --- | --- | --- | --- |\n")
        for s in req.services:
            p = s.profile
            if p is None:
                workload = concurrency = throughput = payload = "-"
            else:
                workload = p.workload_type
                concurrency = str(p.concurrency)
                throughput = repr(p.throughput)
                payload = repr(p.payload_total_kb)
            out.write(f"| {_md_cell(s.id)} | {_md_cell(s.implementation_type)} "
                      f"| {_md_cell(s.binding_type)} | {workload} | {concurrency} "
                      f"| {throughput} | {payload} |\n")
    else:
        out.write("No services requested.\n")

    # 2. Per-tier topology tables
    out.write("\n## Topology\n\n")
    for tier in req.tiers:
        err = result.per_tier_errors.get(tier.name)
        if err is not None:
            out.write(f"### {_md_cell(tier.name)}\n\n")
            out.write(f"Not sized ({err.code}): {err.message}\n\n")
            continue
        topo = result.per_tier.get(tier.name)
        if topo is None:
            continue
        count = len(topo.machines)
        plural = "" if count == 1 else "s"
        out.write(f"### {_md_cell(tier.name)} ({count} machine{plural})\n\n")
        if not topo.machines:
            out.write("No machines needed.\n\n")
            continue
        out.write("| machine | host | node | services | machine CPU % | machine memory (MB) |\n")
        out.write("| --- | --- | --- | --- | --- | --- |\n")
        for m in topo.machines:
            for host in m.hosts:
                for node in host.nodes:
                    services = ", ".join(_md_cell(sid) for sid in node.service_ids)
                    out.write(f"| {m.index} | {_md_cell(host.id)} | {_md_cell(node.id)} "
                              f"| {services} | {_fmt(m.total_cpu_pct)} | {_fmt(m.total_memory_mb)} |\n")
        out.write("\n")

    # 3. Degradation thresholds
    out.write("## Degradation thresholds\n\n")
    if result.curves:
        out.write("| tier | safe service count | CPU cap % |\n")
        out.write("| --- | --- | --- |\n")
        for tier in req.tiers:
            curve = result.curves.get(tier.name)
            if curve is not None:
                out.write(f"| {_md_cell(tier.name)} | {curve.degradation_threshold} "
                          f"| {_fmt(req.packer.cpu_cap_pct)} |\n")
        out.write("\n")
    else:
        out.write("No curves computed.\n\n")

    # 4. Recommendations
    out.write("## Recommendations\n\n")
    if result.recommendations:
        for rec in result.recommendations:
            out.write(f"- {rec.message}\n")
    else:
        out.write("None.\n")
    if result.warnings:
        out.write("\n### Warnings\n\n")
        for w in result.warnings:
            out.write(f"- {w.message}\n")

    # 5. Packing trace appendix
    out.write("\n## Packing trace\n\n")
    if not result.traces:
        out.write("No placements were made.\n")
    for tier in req.tiers:
        trace = result.traces.get(tier.name)
        if trace is None:
            continue
        out.write(f"### {_md_cell(tier.name)}\n\n")
        if not trace.events:
            out.write("No placements were made.\n\n")
            continue
        out.write("| # | event | service | machine | detail |\n")
        out.write("| --- | --- | --- | --- | --- |\n")
        for i, ev in enumerate(trace.events, start=1):
            if ev["event"] == "place":
                detail = ev["reason"]
                service = _md_cell(ev["service_id"])
            else:
                plural = "" if ev["services"] == 1 else "s"
                detail = (f"{ev['services']} service{plural}, "
                          f"{_fmt(ev['total_cpu_pct'])}% CPU, {_fmt(ev['total_memory_mb'])} MB")
                service = "-"
            out.write(f"| {i} | {ev['event']} | {service} | {ev['machine_index']} | {detail} |\n")
        out.write("\n")

    return out.getvalue()
