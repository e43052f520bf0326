"""Request validation, normalization, and canonical JSON round trips."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from sizer.domain import (
    DEFAULT_TIERS,
    HardwareTier,
    PackerConfig,
    RequestValidationError,
    RuntimeProfile,
    parse_tier_table,
    to_canonical_json,
    validate_request,
)
from sizer.engine import size

from conftest import make_raw_request


def codes(exc_info):
    return [e["code"] for e in exc_info.value.errors]


class TestValidation:
    def test_duplicate_service_ids(self):
        raw = make_raw_request(count=1)
        raw["services"].append(dict(raw["services"][0]))
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert "duplicate_id" in codes(exc)
        assert any("svc-01" in e["message"] for e in exc.value.errors)

    def test_empty_tier_list_normalizes_to_builtin_three(self):
        req = validate_request(make_raw_request(count=0, tiers=[]))
        assert [t.to_dict() for t in req.tiers] == [
            {"name": "medium", "processors": 2, "cores_per_processor": 4,
             "frequency_ghz": 3.07, "ram_gb": 32.0},
            {"name": "large", "processors": 2, "cores_per_processor": 8,
             "frequency_ghz": 3.07, "ram_gb": 64.0},
            {"name": "perflab", "processors": 2, "cores_per_processor": 12,
             "frequency_ghz": 3.07, "ram_gb": 64.0},
        ]

    def test_runtime_level_requires_profiles(self):
        raw = make_raw_request(count=2, profile=None)
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert codes(exc).count("missing_profile") == 2

    def test_default_profile_fills_missing_profiles(self):
        req = validate_request(make_raw_request(count=2))
        assert all(s.profile is not None for s in req.services)
        assert req.services[0].profile.concurrency == 100
        assert req.services[0].profile.payload_total_kb == 64.0

    def test_explicit_profile_wins_over_default(self):
        raw = make_raw_request(count=2)
        raw["services"][0]["profile"] = {"workload_type": "burst", "concurrency": 7}
        req = validate_request(raw)
        assert req.services[0].profile.concurrency == 7
        assert req.services[0].profile.workload_type == "burst"
        assert req.services[1].profile.concurrency == 100

    def test_deployment_level_allows_missing_profiles(self):
        req = validate_request(make_raw_request(count=2, level="deployment", profile=None))
        assert all(s.profile is None for s in req.services)

    def test_unknown_implementation_and_binding_types(self):
        raw = make_raw_request(count=1)
        raw["services"][0]["implementation_type"] = "go"
        raw["services"][0]["binding_type"] = "grpc"
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert codes(exc).count("unknown_type") == 2

    def test_nonpositive_tier_fields(self):
        raw = make_raw_request(count=0, tiers=[
            {"name": "bad", "processors": 0, "cores_per_processor": 4,
             "frequency_ghz": -1.0, "ram_gb": 32.0}])
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert codes(exc).count("out_of_range") == 2

    def test_duplicate_tier_names(self):
        tier = {"name": "dup", "processors": 1, "cores_per_processor": 1,
                "frequency_ghz": 1.0, "ram_gb": 1.0}
        raw = make_raw_request(count=0, tiers=[tier, dict(tier)])
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert "duplicate_tier" in codes(exc)

    def test_packer_ranges(self):
        raw = make_raw_request(count=0, packer={"cpu_cap_pct": 150.0, "mem_cap_fraction": 0.0})
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert codes(exc).count("out_of_range") == 2

    def test_identifier_rules(self):
        raw = make_raw_request(count=1)
        raw["services"][0]["id"] = "x" * 65
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert "invalid_identifier" in codes(exc)

    def test_ids_are_case_sensitive(self):
        raw = make_raw_request(count=0)
        raw["services"] = [
            {"id": "Svc", "implementation_type": "java", "binding_type": "soap_http"},
            {"id": "svc", "implementation_type": "java", "binding_type": "soap_http"},
        ]
        validate_request(raw)  # no duplicate_id

    def test_unknown_fields_rejected(self):
        raw = make_raw_request(count=0)
        raw["surprise"] = 1
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert "unknown_field" in codes(exc)

    def test_missing_architecture_and_level(self):
        raw = make_raw_request(count=0)
        del raw["architecture"]
        del raw["level"]
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert codes(exc).count("missing_field") == 2

    def test_all_violations_reported_at_once(self):
        raw = make_raw_request(count=1, profile=None)
        raw["services"].append(dict(raw["services"][0]))
        raw["services"][0]["implementation_type"] = "go"
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        got = codes(exc)
        assert "duplicate_id" in got and "unknown_type" in got and "missing_profile" in got

    def test_inline_coefficients_parse_and_extend_declared_types(self):
        raw = make_raw_request(count=1)
        raw["services"][0]["implementation_type"] = "go"
        raw["services"][0]["binding_type"] = "grpc"
        raw["coefficients"] = {
            "reference_tier": "perflab",
            "pairs": [{
                "implementation_type": "go", "binding_type": "grpc",
                "c0_cpu_pct": 1.0, "c1_cpu_per_user": 0.0, "c2_cpu_per_rps": 0.0,
                "c3_cpu_per_rps_kb": 0.0, "m0_mem_mb": 100.0, "m1_mem_per_user_mb": 0.0,
                "m2_mem_per_kb_mb": 0.0, "deploy_mem_mb": 50.0,
            }],
        }
        req = validate_request(raw)
        assert ("go", "grpc") in req.coefficients.pairs

    def test_negative_inline_coefficient_rejected(self):
        raw = make_raw_request(count=0)
        raw["coefficients"] = {
            "reference_tier": "perflab",
            "pairs": [{
                "implementation_type": "java", "binding_type": "soap_http",
                "c0_cpu_pct": -1.0, "c1_cpu_per_user": 0.0, "c2_cpu_per_rps": 0.0,
                "c3_cpu_per_rps_kb": 0.0, "m0_mem_mb": 0.0, "m1_mem_per_user_mb": 0.0,
                "m2_mem_per_kb_mb": 0.0, "deploy_mem_mb": 0.0,
            }],
        }
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert "invalid_coefficients" in codes(exc)

    def test_unknown_inline_reference_tier(self):
        raw = make_raw_request(count=0)
        raw["coefficients"] = {
            "reference_tier": "mystery",
            "pairs": [{
                "implementation_type": "java", "binding_type": "soap_http",
                "c0_cpu_pct": 1.0, "c1_cpu_per_user": 0.0, "c2_cpu_per_rps": 0.0,
                "c3_cpu_per_rps_kb": 0.0, "m0_mem_mb": 0.0, "m1_mem_per_user_mb": 0.0,
                "m2_mem_per_kb_mb": 0.0, "deploy_mem_mb": 0.0,
            }],
        }
        with pytest.raises(RequestValidationError) as exc:
            validate_request(raw)
        assert "unknown_reference_tier" in codes(exc)


class TestNormalizationIdempotence:
    def test_validate_twice_is_identity(self, ten_service_raw):
        once = validate_request(ten_service_raw)
        twice = validate_request(once)
        assert once == twice
        assert to_canonical_json(once.to_dict()) == to_canonical_json(twice.to_dict())

    def test_defaults_are_filled(self):
        req = validate_request(make_raw_request(count=0))
        assert req.packer == PackerConfig()
        assert req.tiers == DEFAULT_TIERS
        assert req.coefficients is None


class TestRoundTrip:
    def test_request_round_trips_bit_identically(self, ten_service_request):
        blob = to_canonical_json(ten_service_request.to_dict())
        reparsed = validate_request(json.loads(blob))
        assert to_canonical_json(reparsed.to_dict()) == blob

    def test_result_round_trips_bit_identically(self, ten_service_result):
        from sizer.domain import result_from_dict
        blob = to_canonical_json(ten_service_result.to_dict())
        reparsed = result_from_dict(json.loads(blob))
        assert to_canonical_json(reparsed.to_dict()) == blob
        assert reparsed == ten_service_result

    profiles = st.fixed_dictionaries({
        "workload_type": st.sampled_from(["steady", "burst"]),
        "concurrency": st.integers(0, 10_000),
        "throughput": st.floats(0, 1e6, allow_nan=False),
        "payload_request_kb": st.floats(0, 1e4, allow_nan=False),
        "payload_response_kb": st.floats(0, 1e4, allow_nan=False),
    })

    @settings(max_examples=50, deadline=None)
    @given(
        n=st.integers(0, 6),
        architecture=st.sampled_from(["single", "distributed"]),
        level=st.sampled_from(["deployment", "runtime"]),
        profile=profiles,
    )
    def test_random_requests_round_trip(self, n, architecture, level, profile):
        raw = make_raw_request(count=n, architecture=architecture, level=level, profile=profile)
        req = validate_request(raw)
        blob = to_canonical_json(req.to_dict())
        assert to_canonical_json(validate_request(json.loads(blob)).to_dict()) == blob

    @settings(max_examples=25, deadline=None)
    @given(
        n=st.integers(0, 5),
        concurrency=st.integers(0, 500),
        throughput=st.floats(0, 500, allow_nan=False),
    )
    def test_random_results_round_trip(self, n, concurrency, throughput):
        from sizer.domain import result_from_dict
        raw = make_raw_request(count=n, profile={
            "workload_type": "steady", "concurrency": concurrency,
            "throughput": throughput, "payload_request_kb": 1.0, "payload_response_kb": 1.0})
        result = size(validate_request(raw))
        blob = to_canonical_json(result.to_dict())
        assert to_canonical_json(result_from_dict(json.loads(blob)).to_dict()) == blob


class TestTierTable:
    def test_capacity_units(self):
        medium, large, perflab = DEFAULT_TIERS
        assert medium.capacity_units == 24.56
        assert large.capacity_units == 49.12
        assert perflab.total_cores == 24

    def test_parse_tier_table_rejects_empty(self):
        with pytest.raises(RequestValidationError):
            parse_tier_table([])

    def test_parse_tier_table(self):
        tiers = parse_tier_table([{"name": "t1", "processors": 1, "cores_per_processor": 2,
                                   "frequency_ghz": 2.0, "ram_gb": 8.0}])
        assert tiers == (HardwareTier("t1", 1, 2, 2.0, 8.0),)


def test_profile_payload_total():
    p = RuntimeProfile(concurrency=1, payload_request_kb=1.5, payload_response_kb=2.5)
    assert p.payload_total_kb == 4.0
