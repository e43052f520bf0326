"""Report emitters: DOT, CSV, Markdown, and golden-file stability."""

import re

import pytest

from sizer.domain import validate_request
from sizer.engine import NoFeasibleTierError, size
from sizer.report import (
    emit_infrastructure_diagram,
    emit_performance_curve,
    emit_summary_report,
    emit_topology_graph,
)
from sizer.domain import PerformanceCurve, Topology

from conftest import GOLDEN_DIR, make_raw_request


def sized(raw):
    return size(validate_request(raw))


class TestTopologyGraph:
    def test_empty_topology_is_valid_dot(self):
        text = emit_topology_graph(Topology(tier="large", machines=()))
        assert text.startswith("digraph topology {")
        assert text.rstrip().endswith("}")
        assert "cluster" not in text

    def test_ten_service_large_topology(self, ten_service_result):
        text = emit_topology_graph(ten_service_result.per_tier["large"])
        assert text.count("subgraph cluster_m1 ") == 1
        assert text.count("subgraph cluster_m2 ") == 1
        assert text.count("subgraph cluster_m1_h") == 1  # one host on machine 1
        assert text.count('"m1-n') == 2  # two node vertices on machine 1
        assert "78.0% CPU" in text

    def test_twenty_one_services_single_machine_two_hosts(self):
        raw = make_raw_request(count=21, architecture="single",
                               profile={"workload_type": "steady", "concurrency": 0,
                                        "throughput": 0.0, "payload_request_kb": 0.0,
                                        "payload_response_kb": 0.0})
        result = sized(raw)
        text = emit_topology_graph(result.per_tier["perflab"])
        assert text.count("subgraph cluster_m1_h") == 2  # 6 nodes chunk into 5 + 1
        assert text.count('"m1-n') == 6

    def test_every_service_appears_exactly_once(self, ten_service_result):
        text = emit_topology_graph(ten_service_result.per_tier["large"])
        for i in range(1, 11):
            assert text.count(f"svc-{i:02d}") == 1

    def test_byte_stable(self, ten_service_result):
        topo = ten_service_result.per_tier["large"]
        assert emit_topology_graph(topo) == emit_topology_graph(topo)

    def test_golden_topology(self, ten_service_result):
        expected = (GOLDEN_DIR / "topology_large.dot").read_text(encoding="utf-8")
        assert emit_topology_graph(ten_service_result.per_tier["large"]) == expected


class TestPerformanceCurveCsv:
    def test_default_perflab_regions(self, ten_service_result):
        text = emit_performance_curve(ten_service_result.curves["perflab"], 80.0)
        rows = [line.split(",") for line in text.splitlines()[1:]]
        for n, _, region, flag in rows:
            expected = "safe" if int(n) <= 12 else "degraded"
            assert region == expected
            assert flag == ("true" if n == "12" else "false")

    def test_cap_above_curve_all_safe(self):
        curve = PerformanceCurve("t", tuple((n, 6.5 * n) for n in range(1, 21)), 20)
        text = emit_performance_curve(curve, 200.0)
        assert "degraded" not in text
        assert text.count("safe") == 20

    def test_single_point(self):
        curve = PerformanceCurve("t", ((1, 6.5),), 1)
        text = emit_performance_curve(curve, 80.0)
        assert text == ("service_count,predicted_cpu_pct,region,is_threshold\n"
                        "1,6.5,safe,true\n")

    def test_empty_curve_rejected(self):
        with pytest.raises(ValueError):
            emit_performance_curve(PerformanceCurve("t", (), 0), 80.0)

    def test_boundary_agrees_with_threshold(self, ten_service_result):
        for name, curve in ten_service_result.curves.items():
            text = emit_performance_curve(curve, 80.0)
            safe_counts = [int(r.split(",")[0]) for r in text.splitlines()[1:]
                           if r.split(",")[2] == "safe"]
            assert (max(safe_counts) if safe_counts else 0) == curve.degradation_threshold

    def test_golden_curve(self, ten_service_result):
        expected = (GOLDEN_DIR / "curve_perflab.csv").read_text(encoding="utf-8")
        assert emit_performance_curve(ten_service_result.curves["perflab"], 80.0) == expected


class TestInfrastructureDiagram:
    def test_two_machine_plan(self):
        # only the large tier requested: top-ranked is large with 2 machines
        raw = make_raw_request(count=10, tiers=[
            {"name": "large", "processors": 2, "cores_per_processor": 8,
             "frequency_ghz": 3.07, "ram_gb": 64.0}])
        text = emit_infrastructure_diagram(sized(raw))
        assert text.count('"load_balancer" -> ') == 2
        assert text.count('"monitoring" -> ') == 2

    def test_top_ranked_tier_is_used(self, ten_service_result):
        text = emit_infrastructure_diagram(ten_service_result)
        assert "perflab machine 1" in text
        assert text.count('"load_balancer" -> ') == 1

    def test_no_feasible_tier(self):
        result = sized(make_raw_request(count=13, architecture="single"))
        with pytest.raises(NoFeasibleTierError):
            emit_infrastructure_diagram(result)

    def test_golden_infrastructure(self, ten_service_result):
        expected = (GOLDEN_DIR / "infrastructure.dot").read_text(encoding="utf-8")
        assert emit_infrastructure_diagram(ten_service_result) == expected


class TestSummaryReport:
    def test_contains_worked_scenario_row(self, ten_service_result):
        text = emit_summary_report(ten_service_result)
        assert "### large (2 machines)" in text
        assert re.search(r"\| 1 \| m1-h1 \| m1-n1 \| svc-01.*\| 78\.0 \|", text)

    def test_empty_result_report(self):
        text = emit_summary_report(sized(make_raw_request(count=0)))
        assert "# Sizing Summary" in text
        assert "No services requested." in text
        assert "No machines needed." in text
        assert "No curves computed." in text

    def test_recommendations_listed_verbatim(self):
        result = sized(make_raw_request(count=48))
        text = emit_summary_report(result)
        switch = next(r for r in result.recommendations if r.kind == "switch_tier")
        assert f"- {switch.message}\n" in text

    def test_infeasible_tier_section(self):
        result = sized(make_raw_request(count=13, architecture="single"))
        text = emit_summary_report(result)
        assert "Not sized (single_infeasible)" in text

    def test_every_service_listed_once_in_topology_tables(self, ten_service_result):
        text = emit_summary_report(ten_service_result)
        topo_section = text.split("## Topology")[1].split("## Degradation")[0]
        large_part = topo_section.split("### large")[1].split("### perflab")[0]
        for i in range(1, 11):
            assert large_part.count(f"svc-{i:02d}") == 1

    def test_golden_report(self, ten_service_result):
        expected = (GOLDEN_DIR / "report_10_services.md").read_text(encoding="utf-8")
        assert emit_summary_report(ten_service_result) == expected

    def test_byte_stable(self, ten_service_result):
        assert emit_summary_report(ten_service_result) == emit_summary_report(ten_service_result)
