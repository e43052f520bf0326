"""Demand model, tier scaling, curve, and the calibration pipeline."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sizer.domain import DEFAULT_TIERS, HardwareTier, PackerConfig, RuntimeProfile, ServiceSpec
from sizer.perfmodel import (
    CalibrationError,
    CalibrationSample,
    DEFAULT_COEFFICIENTS,
    ModelCoefficients,
    PairCoefficients,
    UnknownPairError,
    curve_from_unit_cpu,
    deployment_demand,
    estimate_demand,
    fit_coefficients,
    parse_samples_csv,
    performance_curve,
    tier_scale_factor,
    validate_extrapolation,
)

MEDIUM, LARGE, PERFLAB = DEFAULT_TIERS
JAVA_SOAP = ServiceSpec(id="s", implementation_type="java", binding_type="soap_http")
REFERENCE_PROFILE = RuntimeProfile(concurrency=100, throughput=100.0,
                                   payload_request_kb=32.0, payload_response_kb=32.0)


def tier_of(name):
    return {t.name: t for t in DEFAULT_TIERS}[name]


def generate_samples(coeffs: ModelCoefficients, pair, grid, tiers, noise=None):
    """Synthetic measurements straight from the model equations.

    This generator is the independent side of the fit/generate round
    trip: it never calls the fitter.
    """
    impl, binding = pair
    p = coeffs.pairs[pair]
    reference = tier_of(coeffs.reference_tier)
    samples = []
    for tier_name, (u, t, payload) in itertools.product(tiers, grid):
        tier = tier_of(tier_name)
        factor = reference.capacity_units / tier.capacity_units
        cpu = (p.c0_cpu_pct + p.c1_cpu_per_user * u + p.c2_cpu_per_rps * t
               + p.c3_cpu_per_rps_kb * t * payload) * factor
        mem = p.m0_mem_mb + p.m1_mem_per_user_mb * u + p.m2_mem_per_kb_mb * payload
        if noise is not None:
            cpu *= 1.0 + noise.uniform(-0.01, 0.01)
            mem *= 1.0 + noise.uniform(-0.01, 0.01)
        samples.append(CalibrationSample(tier_name, impl, binding, u, float(t),
                                         float(payload), cpu, mem))
    return samples


def coefficient_errors(fitted: PairCoefficients, truth: PairCoefficients):
    """Relative errors of the seven regression coefficients."""
    pairs = zip(fitted.cpu_fields() + fitted.mem_fields(),
                truth.cpu_fields() + truth.mem_fields())
    return [abs(f - t) / max(abs(t), 1.0) for f, t in pairs]


class TestTierScaleFactor:
    def test_medium_vs_perflab(self):
        assert tier_scale_factor(MEDIUM, PERFLAB) == 3.0

    def test_large_vs_perflab(self):
        assert tier_scale_factor(LARGE, PERFLAB) == 1.5

    def test_identity(self):
        for t in DEFAULT_TIERS:
            assert tier_scale_factor(t, t) == 1.0


class TestEstimateDemand:
    def test_reference_workload_on_perflab(self):
        d = estimate_demand(JAVA_SOAP, REFERENCE_PROFILE, DEFAULT_COEFFICIENTS, PERFLAB)
        assert d.cpu_pct == 6.5
        assert d.memory_mb == 322.0
        assert d.tier == "perflab"

    def test_zero_load_base_case(self):
        d = estimate_demand(JAVA_SOAP, RuntimeProfile(), DEFAULT_COEFFICIENTS, PERFLAB)
        assert d.cpu_pct == 2.5
        assert d.memory_mb == 256.0

    def test_composition_with_tier_scaling(self):
        d = estimate_demand(JAVA_SOAP, REFERENCE_PROFILE, DEFAULT_COEFFICIENTS, MEDIUM)
        assert d.cpu_pct == 19.5
        assert d.memory_mb == 322.0  # memory does not scale with the tier
        assert d.tier == "medium"

    def test_unknown_pair(self):
        svc = ServiceSpec(id="s", implementation_type="go", binding_type="grpc")
        with pytest.raises(UnknownPairError):
            estimate_demand(svc, RuntimeProfile(), DEFAULT_COEFFICIENTS, PERFLAB)

    @settings(max_examples=100, deadline=None)
    @given(
        c=st.tuples(*[st.floats(0, 100, allow_nan=False) for _ in range(7)]),
        lo=st.tuples(st.integers(0, 1000), st.floats(0, 1000), st.floats(0, 1000)),
        bump=st.tuples(st.integers(0, 1000), st.floats(0, 1000), st.floats(0, 1000)),
    )
    def test_monotone_in_each_load_variable(self, c, lo, bump):
        coeffs = ModelCoefficients("perflab", {("java", "soap_http"): PairCoefficients(
            c[0], c[1], c[2], c[3], c[4], c[5], c[6], 0.0)})
        low = RuntimeProfile(concurrency=lo[0], throughput=lo[1], payload_request_kb=lo[2])
        high = RuntimeProfile(concurrency=lo[0] + bump[0], throughput=lo[1] + bump[1],
                              payload_request_kb=lo[2] + bump[2])
        d_low = estimate_demand(JAVA_SOAP, low, coeffs, PERFLAB)
        d_high = estimate_demand(JAVA_SOAP, high, coeffs, PERFLAB)
        assert d_high.cpu_pct >= d_low.cpu_pct
        assert d_high.memory_mb >= d_low.memory_mb

    def test_tier_work_invariance_builtin_tiers(self):
        ref = estimate_demand(JAVA_SOAP, REFERENCE_PROFILE, DEFAULT_COEFFICIENTS, PERFLAB)
        for tier in DEFAULT_TIERS:
            d = estimate_demand(JAVA_SOAP, REFERENCE_PROFILE, DEFAULT_COEFFICIENTS, tier)
            assert d.cpu_pct * tier.capacity_units == ref.cpu_pct * PERFLAB.capacity_units

    @settings(max_examples=100, deadline=None)
    @given(
        procs=st.integers(1, 8), cores=st.integers(1, 32),
        freq=st.floats(0.5, 6.0, allow_nan=False),
        u=st.integers(0, 1000),
    )
    def test_tier_work_invariance_random_tiers(self, procs, cores, freq, u):
        tier = HardwareTier("x", procs, cores, freq, 64.0)
        profile = RuntimeProfile(concurrency=u, throughput=50.0, payload_request_kb=8.0)
        ref = estimate_demand(JAVA_SOAP, profile, DEFAULT_COEFFICIENTS, PERFLAB)
        d = estimate_demand(JAVA_SOAP, profile, DEFAULT_COEFFICIENTS, tier,
                            reference=PERFLAB)
        assert math.isclose(d.cpu_pct * tier.capacity_units,
                            ref.cpu_pct * PERFLAB.capacity_units, rel_tol=1e-12)


class TestDeploymentDemand:
    def test_default_footprint(self):
        d = deployment_demand(JAVA_SOAP, DEFAULT_COEFFICIENTS)
        assert (d.cpu_pct, d.memory_mb, d.tier) == (0.0, 192.0, "perflab")

    def test_zero_footprint(self):
        coeffs = ModelCoefficients("perflab", {("java", "soap_http"): PairCoefficients(
            0, 0, 0, 0, 0, 0, 0, 0.0)})
        d = deployment_demand(JAVA_SOAP, coeffs)
        assert (d.cpu_pct, d.memory_mb) == (0.0, 0.0)

    def test_unknown_pair(self):
        svc = ServiceSpec(id="s", implementation_type="go", binding_type="grpc")
        with pytest.raises(UnknownPairError):
            deployment_demand(svc, DEFAULT_COEFFICIENTS)


class TestPerformanceCurve:
    def test_perflab_threshold_is_twelve(self):
        curve = performance_curve(REFERENCE_PROFILE, JAVA_SOAP, DEFAULT_COEFFICIENTS,
                                  PERFLAB, PackerConfig(), max_services=20)
        assert curve.degradation_threshold == 12
        assert curve.points[11] == (12, 78.0)
        assert curve.points[12] == (13, 84.5)

    def test_large_threshold_is_eight(self):
        curve = performance_curve(REFERENCE_PROFILE, JAVA_SOAP, DEFAULT_COEFFICIENTS,
                                  LARGE, PackerConfig(), max_services=20)
        assert curve.degradation_threshold == 8

    def test_nothing_fits(self):
        curve = curve_from_unit_cpu("perflab", 6.5, 5.0, 20)
        assert curve.degradation_threshold == 0

    def test_points_are_linear(self):
        curve = curve_from_unit_cpu("t", 2.0, 80.0, 5)
        assert curve.points == ((1, 2.0), (2, 4.0), (3, 6.0), (4, 8.0), (5, 10.0))

    @settings(max_examples=200, deadline=None)
    @given(unit=st.floats(0.01, 50, allow_nan=False), cap=st.floats(1, 100, allow_nan=False))
    def test_threshold_matches_brute_force_scan(self, unit, cap):
        max_services = math.ceil(cap / unit) + 2
        curve = curve_from_unit_cpu("t", unit, cap, max_services)
        brute = 0
        for n in range(1, max_services + 1):
            if n * unit < cap:
                brute = n
        assert curve.degradation_threshold == brute

    def test_threshold_closed_form_when_not_exact_multiple(self):
        # threshold == ceil(cap/unit) - 1 whenever cap is not a multiple of unit
        for unit, cap in [(6.5, 80.0), (9.75, 80.0), (19.5, 80.0), (3.3, 50.0)]:
            if (cap / unit) != int(cap / unit):
                curve = curve_from_unit_cpu("t", unit, cap, 100)
                assert curve.degradation_threshold == math.ceil(cap / unit) - 1


FULL_GRID = [(u, t, p) for u in (0, 50, 100) for t in (0, 50, 100) for p in (0, 50, 100)]
SMALL_GRID = [(u, t, p) for u in (0, 100) for t in (0, 100) for p in (0, 100)]


class TestFitCoefficients:
    def test_noiseless_exact_recovery_single_tier(self):
        truth = DEFAULT_COEFFICIENTS.pairs[("java", "soap_http")]
        samples = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   SMALL_GRID, ["perflab"])
        fitted = fit_coefficients(samples, PERFLAB)
        errors = coefficient_errors(fitted.pairs[("java", "soap_http")], truth)
        assert max(errors) <= 1e-9
        # zero-load samples exist, so the deployment footprint is their mean memory
        assert math.isclose(fitted.pairs[("java", "soap_http")].deploy_mem_mb, 256.0)

    def test_noiseless_recovery_two_tiers_full_grid(self):
        truth = DEFAULT_COEFFICIENTS.pairs[("java", "soap_http")]
        samples = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   FULL_GRID, ["perflab", "medium"])
        fitted = fit_coefficients(samples, PERFLAB)
        assert max(coefficient_errors(fitted.pairs[("java", "soap_http")], truth)) <= 1e-9

    def test_noisy_recovery_within_five_percent(self):
        rng = np.random.default_rng(20260810)
        truth = DEFAULT_COEFFICIENTS.pairs[("java", "soap_http")]
        grid = SMALL_GRID * 4  # 8 points x 4 replicates x 2 tiers = 64 samples
        samples = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   grid, ["perflab", "large"], noise=rng)
        assert len(samples) == 64
        fitted = fit_coefficients(samples, PERFLAB)
        assert max(coefficient_errors(fitted.pairs[("java", "soap_http")], truth)) <= 0.05

    def test_insufficient_samples(self):
        samples = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   [(0, 0, 0), (100, 0, 0), (0, 100, 0)], ["perflab"])
        with pytest.raises(CalibrationError) as exc:
            fit_coefficients(samples, PERFLAB)
        assert exc.value.code == "insufficient_samples"
        assert exc.value.pair == ("java", "soap_http")

    def test_collinear_samples(self):
        # four samples but only U varies: (1, U, T, T*P) is rank 2
        samples = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   [(0, 0, 0), (10, 0, 0), (20, 0, 0), (30, 0, 0)], ["perflab"])
        with pytest.raises(CalibrationError) as exc:
            fit_coefficients(samples, PERFLAB)
        assert exc.value.code == "collinear_samples"

    def test_unknown_tier_in_samples(self):
        s = CalibrationSample("warp9", "java", "soap_http", 0, 0.0, 0.0, 1.0, 1.0)
        with pytest.raises(CalibrationError) as exc:
            fit_coefficients([s] * 4, PERFLAB)
        assert exc.value.code == "unknown_tier"
        assert "warp9" in str(exc.value)

    def test_deploy_mem_retained_from_prior_without_zero_load(self):
        grid = [(u, t, p) for (u, t, p) in SMALL_GRID if (u, t, p) != (0, 0, 0)]
        samples = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   grid, ["perflab"])
        fitted = fit_coefficients(samples, PERFLAB, prior=DEFAULT_COEFFICIENTS)
        assert fitted.pairs[("java", "soap_http")].deploy_mem_mb == 192.0

    def test_negative_coefficients_clamped_to_zero(self):
        # measurements that slope downward in U force c1 < 0 in plain OLS
        samples = [
            CalibrationSample("perflab", "java", "soap_http", u, t, p, cpu, 100.0)
            for (u, t, p, cpu) in [
                (0, 0, 0, 10.0), (100, 0, 0, 5.0), (0, 100, 0, 12.0),
                (100, 100, 64, 8.0), (50, 50, 32, 9.0),
            ]
        ]
        fitted = fit_coefficients(samples, PERFLAB).pairs[("java", "soap_http")]
        assert fitted.c1_cpu_per_user == 0.0
        assert all(v >= 0 for v in fitted.cpu_fields() + fitted.mem_fields())

    @settings(max_examples=30, deadline=None)
    @given(values=st.tuples(*[st.floats(0, 1000, allow_nan=False) for _ in range(7)]))
    def test_fit_generate_round_trip(self, values):
        truth = PairCoefficients(*values, deploy_mem_mb=0.0)
        coeffs = ModelCoefficients("perflab", {("java", "soap_http"): truth})
        samples = generate_samples(coeffs, ("java", "soap_http"), SMALL_GRID, ["perflab"])
        fitted = fit_coefficients(samples, PERFLAB)
        assert max(coefficient_errors(fitted.pairs[("java", "soap_http")], truth)) <= 1e-9


class TestValidateExtrapolation:
    def test_exact_holdout_passes(self):
        holdout = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   SMALL_GRID, ["perflab", "medium"])
        report = validate_extrapolation(DEFAULT_COEFFICIENTS, holdout, tolerance_cpu_pct=1e-6)
        assert report.passed
        assert report.cpu_rmse_pct == pytest.approx(0.0, abs=1e-9)
        assert report.mem_rmse_mb == pytest.approx(0.0, abs=1e-9)
        assert report.holdout_count == len(holdout)

    def test_extrapolation_far_beyond_fit_range_is_exact_for_affine_model(self):
        holdout = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   [(400, 400, 400)], ["perflab"])
        report = validate_extrapolation(DEFAULT_COEFFICIENTS, holdout, tolerance_cpu_pct=1e-6)
        assert report.passed
        assert report.cpu_rmse_pct == pytest.approx(0.0, abs=1e-9)

    def test_off_by_ten_fails_tolerance_five(self):
        exact = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                 [(100, 100, 64)], ["perflab"])[0]
        skewed = CalibrationSample(exact.tier, "java", "soap_http", exact.concurrency,
                                   exact.throughput, exact.payload_total_kb,
                                   exact.measured_cpu_pct - 10.0, exact.measured_mem_mb)
        report = validate_extrapolation(DEFAULT_COEFFICIENTS, [skewed], tolerance_cpu_pct=5.0)
        assert not report.passed
        assert report.max_abs_cpu_err_pct == pytest.approx(10.0)

    def test_empty_holdout(self):
        with pytest.raises(CalibrationError) as exc:
            validate_extrapolation(DEFAULT_COEFFICIENTS, [], tolerance_cpu_pct=1.0)
        assert exc.value.code == "empty_holdout"

    def test_report_serializes_pass_key(self):
        holdout = generate_samples(DEFAULT_COEFFICIENTS, ("java", "soap_http"),
                                   [(0, 0, 0)], ["perflab"])
        report = validate_extrapolation(DEFAULT_COEFFICIENTS, holdout, tolerance_cpu_pct=1.0)
        assert report.to_dict()["pass"] is True


class TestSamplesCsv:
    HEADER = "tier,impl,binding,concurrency,throughput,payload_kb,cpu_pct,mem_mb\n"

    def test_round_trip(self):
        text = self.HEADER + "perflab,java,soap_http,100,100.0,64.0,6.5,322.0\n"
        samples = parse_samples_csv(text)
        assert samples == [CalibrationSample("perflab", "java", "soap_http",
                                             100, 100.0, 64.0, 6.5, 322.0)]

    def test_wrong_header(self):
        with pytest.raises(CalibrationError):
            parse_samples_csv("a,b,c\n1,2,3\n")

    def test_bad_row_named(self):
        text = self.HEADER + "perflab,java,soap_http,100,oops,64.0,6.5,322.0\n"
        with pytest.raises(CalibrationError) as exc:
            parse_samples_csv(text)
        assert "row 2" in str(exc.value)

    def test_negative_value_rejected(self):
        text = self.HEADER + "perflab,java,soap_http,100,100.0,64.0,-6.5,322.0\n"
        with pytest.raises(CalibrationError) as exc:
            parse_samples_csv(text)
        assert exc.value.code == "bad_row"
