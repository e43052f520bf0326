"""Batch command line interface.

The full pipeline without the HTTP service: size a request file into a
directory of artifacts, fit coefficients from a measurement CSV, or emit
a performance curve. Structured inputs are always files so the canonical
JSON schema stays the single source of truth; ``--out -`` sends a single
document to stdout. Nothing else is printed on success.

Exit codes: 0 success, 2 validation or input error, 3 when every
requested tier is infeasible.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Any

from . import report as report_mod
from . import server as server_mod
from .domain import (
    DEFAULT_TIERS,
    PackerConfig,
    RequestValidationError,
    ServiceSpec,
    SizerError,
    parse_profile_json,
    parse_tier_table,
    to_canonical_json,
    validate_request,
)
from .engine import NoFeasibleTierError, compare_tiers, size
from .perfmodel import (
    CalibrationError,
    DEFAULT_COEFFICIENTS,
    UnknownPairError,
    fit_coefficients,
    load_coefficients,
    parse_samples_csv,
    performance_curve,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


def _fail(errors: list[dict[str, Any]]) -> int:
    sys.stderr.write(to_canonical_json({"errors": errors}))
    return EXIT_INVALID


def _fail_one(code: str, message: str) -> int:
    return _fail([{"code": code, "message": message}])


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SizerError(f"cannot read JSON file {path}: {exc}") from exc


def _write_out(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _safe_filename(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", name)


def _load_tier_file(path: str):
    return parse_tier_table(_read_json(path))


# ---------------------------------------------------------------------------
# sizer size
# ---------------------------------------------------------------------------

def cmd_size(args: argparse.Namespace) -> int:
    try:
        raw = _read_json(args.request)
    except SizerError as exc:
        return _fail_one("bad_request_file", str(exc))
    if not isinstance(raw, dict):
        return _fail_one("invalid_type", "request file must contain a JSON object")

    coeffs = None
    if args.coeffs:
        try:
            coeffs = load_coefficients(Path(args.coeffs).read_text(encoding="utf-8"))
        except (OSError, SizerError, json.JSONDecodeError) as exc:
            return _fail_one("bad_coefficients_file", str(exc))
        # the flag wins over whatever the request carried; echo the table used
        raw = dict(raw)
        raw["coefficients"] = coeffs.to_dict()
    elif isinstance(raw.get("coefficients"), str):
        return _fail_one("unresolved_coefficients",
                         f"request references stored profile {raw['coefficients']!r}; pass --coeffs")

    if args.tiers:
        try:
            tiers = _load_tier_file(args.tiers)
        except (SizerError, RequestValidationError) as exc:
            return _fail_one("bad_tiers_file", str(exc))
        raw = dict(raw)
        raw["tiers"] = [t.to_dict() for t in tiers]

    try:
        request = validate_request(raw, coefficients=coeffs)
    except RequestValidationError as exc:
        return _fail(exc.errors)

    result = size(request, coeffs)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "result.json").write_text(to_canonical_json(result.to_dict()), encoding="utf-8")
    for tier_name, topology in result.per_tier.items():
        (out_dir / f"topology_{_safe_filename(tier_name)}.dot").write_text(
            report_mod.emit_topology_graph(topology), encoding="utf-8")
    for tier_name, curve in result.curves.items():
        (out_dir / f"curve_{_safe_filename(tier_name)}.csv").write_text(
            report_mod.emit_performance_curve(curve, request.packer.cpu_cap_pct), encoding="utf-8")
    try:
        (out_dir / "infrastructure.dot").write_text(
            report_mod.emit_infrastructure_diagram(result), encoding="utf-8")
    except NoFeasibleTierError:
        pass
    (out_dir / "report.md").write_text(report_mod.emit_summary_report(result), encoding="utf-8")

    if request.tiers and not result.per_tier:
        return EXIT_INFEASIBLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# sizer calibrate
# ---------------------------------------------------------------------------

def cmd_calibrate(args: argparse.Namespace) -> int:
    tiers = DEFAULT_TIERS
    if args.tiers:
        try:
            tiers = _load_tier_file(args.tiers)
        except (SizerError, RequestValidationError) as exc:
            return _fail_one("bad_tiers_file", str(exc))

    names = [t.name for t in tiers]
    ref_name = args.reference or ("perflab" if "perflab" in names else names[0])
    if ref_name not in names:
        return _fail_one("unknown_reference", f"reference tier {ref_name!r} is not in the tier table")
    reference = next(t for t in tiers if t.name == ref_name)

    try:
        text = Path(args.samples).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail_one("bad_samples_file", str(exc))
    try:
        samples = parse_samples_csv(text)
        coeffs = fit_coefficients(samples, reference, tiers, prior=DEFAULT_COEFFICIENTS)
    except CalibrationError as exc:
        return _fail_one(exc.code, str(exc))

    _write_out(to_canonical_json(coeffs.to_dict()), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sizer curve
# ---------------------------------------------------------------------------

def cmd_curve(args: argparse.Namespace) -> int:
    tiers = DEFAULT_TIERS
    if args.tiers:
        try:
            tiers = _load_tier_file(args.tiers)
        except (SizerError, RequestValidationError) as exc:
            return _fail_one("bad_tiers_file", str(exc))
    tier = next((t for t in tiers if t.name == args.tier), None)
    if tier is None:
        return _fail_one("unknown_tier", f"tier {args.tier!r} is not in the tier table")

    coeffs = DEFAULT_COEFFICIENTS
    if args.coeffs:
        try:
            coeffs = load_coefficients(Path(args.coeffs).read_text(encoding="utf-8"))
        except (OSError, SizerError, json.JSONDecodeError) as exc:
            return _fail_one("bad_coefficients_file", str(exc))

    try:
        raw_profile = _read_json(args.profile)
    except SizerError as exc:
        return _fail_one("bad_profile_file", str(exc))
    try:
        profile = parse_profile_json(raw_profile)
    except RequestValidationError as exc:
        return _fail(exc.errors)

    if args.max < 1:
        return _fail_one("invalid_value", "--max must be at least 1")
    template = ServiceSpec(id="template", implementation_type=args.impl, binding_type=args.binding)
    packer = PackerConfig(cpu_cap_pct=args.cap)
    try:
        curve = performance_curve(profile, template, coeffs, tier, packer, args.max)
    except (UnknownPairError, SizerError) as exc:
        return _fail_one("estimation_error", str(exc))

    _write_out(report_mod.emit_performance_curve(curve, packer.cpu_cap_pct), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sizer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_size = sub.add_parser("size", help="size a request file into a directory of artifacts")
    p_size.add_argument("--request", required=True, help="sizing request JSON file")
    p_size.add_argument("--out", required=True, help="output directory")
    p_size.add_argument("--coeffs", help="coefficient table JSON file (overrides the request)")
    p_size.add_argument("--tiers", help="tier table JSON file (overrides the request)")
    p_size.set_defaults(func=cmd_size)

    p_cal = sub.add_parser("calibrate", help="fit model coefficients from a measurement CSV")
    p_cal.add_argument("--samples", required=True, help="calibration CSV file")
    p_cal.add_argument("--out", required=True, help="output coefficients JSON file, or - for stdout")
    p_cal.add_argument("--reference", help="reference tier name (default: perflab if present)")
    p_cal.add_argument("--tiers", help="tier table JSON file")
    p_cal.set_defaults(func=cmd_calibrate)

    p_curve = sub.add_parser("curve", help="emit a performance curve CSV")
    p_curve.add_argument("--profile", required=True, help="runtime profile JSON file")
    p_curve.add_argument("--tier", required=True, help="tier name")
    p_curve.add_argument("--max", required=True, type=int, help="maximum service count to plot")
    p_curve.add_argument("--out", required=True, help="output CSV file, or - for stdout")
    p_curve.add_argument("--coeffs", help="coefficient table JSON file")
    p_curve.add_argument("--tiers", help="tier table JSON file")
    p_curve.add_argument("--impl", default="java", help="implementation type of the template service")
    p_curve.add_argument("--binding", default="soap_http", help="binding type of the template service")
    p_curve.add_argument("--cap", type=float, default=PackerConfig().cpu_cap_pct,
                         help="CPU cap percent for the safe/degraded boundary")
    p_curve.set_defaults(func=cmd_curve)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    server_mod.add_server_args(p_serve)
    p_serve.set_defaults(func=server_mod.serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
