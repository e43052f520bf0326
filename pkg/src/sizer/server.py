"""HTTP service exposing sizing, calibration, and report retrieval.

Runs are persisted through the file-backed RunStore so results and
reports can be fetched again by id, byte-identical. The canonical JSON
produced by the domain module is the wire schema; no separate DTO layer
exists. Optionally serves a built web UI from a static directory so one
process hosts both UI and API.

Configuration comes from flags or environment variables:
``--listen`` (SIZER_LISTEN), ``--data-dir`` (SIZER_DATA), ``--tiers-file``
(SIZER_TIERS), ``--coeffs-file`` (SIZER_COEFFS), ``--ui-dir`` (SIZER_UI).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles

from . import report as report_mod
from .domain import (
    ConfigError,
    DEFAULT_TIERS,
    HardwareTier,
    RequestValidationError,
    SizerError,
    parse_tier_table,
    result_from_dict,
    to_canonical_json,
    validate_request,
)
from .engine import NoFeasibleTierError, compare_tiers, size
from .perfmodel import (
    CalibrationError,
    DEFAULT_COEFFICIENTS,
    ModelCoefficients,
    fit_coefficients,
    load_coefficients,
    parse_samples_csv,
)
from .store import DuplicateProfileError, ProfileRegistry, RunRecord, RunStore, new_run_id, utc_now_iso

DEFAULT_LISTEN = "127.0.0.1:8080"


@dataclass(frozen=True)
class ServerSettings:
    data_dir: Path
    tiers: tuple[HardwareTier, ...] = DEFAULT_TIERS
    coefficients: ModelCoefficients = DEFAULT_COEFFICIENTS
    ui_dir: Path | None = None


def load_tiers_file(path: str | Path) -> tuple[HardwareTier, ...]:
    """Load a custom tier table (JSON list of tier objects).

    An empty or invalid table is a startup configuration error; the
    server never serves an empty tier list.
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config_error: cannot read tier file {path}: {exc}") from exc
    try:
        return parse_tier_table(raw)
    except RequestValidationError as exc:
        raise ConfigError(f"config_error: invalid tier file {path}: {exc.errors}") from exc


def load_coefficients_file(path: str | Path) -> ModelCoefficients:
    try:
        return load_coefficients(Path(path).read_text(encoding="utf-8"))
    except (OSError, SizerError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config_error: cannot load coefficients from {path}: {exc}") from exc


def _json_response(payload: Any, status_code: int = 200) -> Response:
    return Response(content=to_canonical_json(payload),
                    status_code=status_code, media_type="application/json")


def _error_response(status_code: int, errors: list[dict[str, Any]]) -> Response:
    return _json_response({"errors": errors}, status_code)


def _one_error(status_code: int, code: str, message: str) -> Response:
    return _error_response(status_code, [{"code": code, "message": message}])


def create_app(settings: ServerSettings) -> FastAPI:
    store = RunStore(settings.data_dir)
    registry = ProfileRegistry(settings.data_dir)
    app = FastAPI(title="soa-sizer", docs_url=None, redoc_url=None)

    @app.get("/api/v1/tiers")
    async def get_tiers() -> Response:
        return _json_response([t.to_dict() for t in settings.tiers])

    @app.post("/api/v1/size")
    async def post_size(request: Request) -> Response:
        try:
            raw = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _one_error(400, "malformed_json", str(exc))
        if not isinstance(raw, dict):
            return _one_error(400, "invalid_type", "request body must be a JSON object")

        # Stored-profile references resolve against the registry before
        # validation so the profile's pairs count as declared types.
        coeffs = settings.coefficients
        ref = raw.get("coefficients")
        if isinstance(ref, str):
            loaded = registry.load(ref)
            if loaded is None:
                return _one_error(400, "unknown_profile", f"no stored coefficient profile {ref!r}")
            coeffs = loaded

        if not raw.get("tiers"):
            raw = dict(raw)
            raw["tiers"] = [t.to_dict() for t in settings.tiers]
        try:
            validated = validate_request(raw, coefficients=coeffs)
        except RequestValidationError as exc:
            return _error_response(400, exc.errors)

        # an inline table in the request wins over the server's base table
        if isinstance(validated.coefficients, ModelCoefficients):
            coeffs = validated.coefficients
        result = size(validated, coeffs, run_id=new_run_id(), created_at=utc_now_iso())
        record = RunRecord(run_id=result.run_id, created_at=result.created_at,
                           request=validated, result=result)
        try:
            store.commit(record)
        except (SizerError, OSError) as exc:
            return _one_error(500, "store_error", str(exc))
        status = 422 if (validated.tiers and not result.per_tier) else 200
        return _json_response(result.to_dict(), status)

    @app.post("/api/v1/calibrate")
    async def post_calibrate(request: Request, name: str | None = None,
                             reference: str | None = None) -> Response:
        body = (await request.body()).decode("utf-8", errors="replace")
        tier_names = {t.name for t in settings.tiers}
        if reference is None:
            reference = "perflab" if "perflab" in tier_names else settings.tiers[0].name
        if reference not in tier_names:
            return _one_error(400, "unknown_reference", f"reference tier {reference!r} is not configured")
        reference_tier = next(t for t in settings.tiers if t.name == reference)
        try:
            samples = parse_samples_csv(body)
            coeffs = fit_coefficients(samples, reference_tier, settings.tiers,
                                      prior=settings.coefficients)
        except CalibrationError as exc:
            return _one_error(400, exc.code, str(exc))
        if name is not None:
            try:
                registry.save(name, coeffs)
            except DuplicateProfileError as exc:
                return _one_error(409, "duplicate_profile", str(exc))
            except SizerError as exc:
                return _one_error(400, "invalid_profile_name", str(exc))
        return _json_response(coeffs.to_dict())

    @app.get("/api/v1/runs/{run_id}")
    async def get_run(run_id: str) -> Response:
        payload = store.read_bytes(run_id)
        if payload is None:
            return _one_error(404, "not_found", f"no run {run_id!r}")
        return Response(content=payload, media_type="application/json")

    @app.get("/api/v1/runs/{run_id}/report")
    async def get_report(run_id: str, format: str = "markdown",
                         tier: str | None = None) -> Response:
        payload = store.read_bytes(run_id)
        if payload is None:
            return _one_error(404, "not_found", f"no run {run_id!r}")
        record = json.loads(payload)
        result = result_from_dict(record["result"])

        if format == "markdown":
            body, filename, media = report_mod.emit_summary_report(result), "report.md", "text/markdown"
        elif format == "dot":
            if tier is not None:
                topo = result.per_tier.get(tier)
                if topo is None:
                    return _one_error(400, "unknown_tier", f"run has no topology for tier {tier!r}")
                body, filename = report_mod.emit_topology_graph(topo), f"topology_{tier}.dot"
            else:
                try:
                    body = report_mod.emit_infrastructure_diagram(result)
                except NoFeasibleTierError as exc:
                    return _one_error(400, "no_feasible_tier", str(exc))
                filename = "infrastructure.dot"
            media = "text/vnd.graphviz"
        elif format == "csv":
            if tier is None:
                try:
                    tier = compare_tiers(result)[0]
                except NoFeasibleTierError as exc:
                    return _one_error(400, "no_feasible_tier", str(exc))
            curve = result.curves.get(tier)
            if curve is None:
                return _one_error(400, "no_curve", f"run has no curve for tier {tier!r}")
            body, filename, media = (report_mod.emit_performance_curve(
                curve, result.request_echo.packer.cpu_cap_pct), f"curve_{tier}.csv", "text/csv")
        else:
            return _one_error(400, "unknown_format", f"format must be markdown, dot or csv, not {format!r}")

        return Response(content=body, media_type=media,
                        headers={"Content-Disposition": f'attachment; filename="{filename}"'})

    if settings.ui_dir is not None:
        app.mount("/", StaticFiles(directory=settings.ui_dir, html=True), name="ui")

    return app


def parse_listen(listen: str) -> tuple[str, int]:
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ConfigError(f"config_error: --listen must be host:port, got {listen!r}")
    return host, int(port)


def build_settings(args: argparse.Namespace) -> ServerSettings:
    tiers = load_tiers_file(args.tiers_file) if args.tiers_file else DEFAULT_TIERS
    coeffs = load_coefficients_file(args.coeffs_file) if args.coeffs_file else DEFAULT_COEFFICIENTS
    ui_dir = Path(args.ui_dir) if args.ui_dir else None
    if ui_dir is not None and not ui_dir.is_dir():
        raise ConfigError(f"config_error: UI directory {ui_dir} does not exist")
    return ServerSettings(data_dir=Path(args.data_dir), tiers=tiers,
                          coefficients=coeffs, ui_dir=ui_dir)


def add_server_args(parser: argparse.ArgumentParser) -> None:
    env = os.environ.get
    parser.add_argument("--listen", default=env("SIZER_LISTEN", DEFAULT_LISTEN),
                        help="host:port to bind (env SIZER_LISTEN)")
    parser.add_argument("--data-dir", default=env("SIZER_DATA", "./sizer-data"),
                        help="directory for persisted runs and profiles (env SIZER_DATA)")
    parser.add_argument("--tiers-file", default=env("SIZER_TIERS"),
                        help="JSON file with a custom tier table (env SIZER_TIERS)")
    parser.add_argument("--coeffs-file", default=env("SIZER_COEFFS"),
                        help="JSON file with the base coefficient table (env SIZER_COEFFS)")
    parser.add_argument("--ui-dir", default=env("SIZER_UI"),
                        help="directory with the built web UI to serve statically (env SIZER_UI)")


def serve(args: argparse.Namespace) -> int:
    import uvicorn

    try:
        settings = build_settings(args)
        host, port = parse_listen(args.listen)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    app = create_app(settings)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sizer-server", description=__doc__)
    add_server_args(parser)
    return serve(parser.parse_args(argv))


if __name__ == "__main__":
    raise SystemExit(main())
