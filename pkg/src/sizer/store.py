"""File-backed persistence for runs and calibration profiles.

One JSON document per run under ``<data_dir>/runs`` and one per stored
coefficient profile under ``<data_dir>/profiles``. Commits are atomic
(write to a temp file, then rename) and serialized by a lock, and
records are immutable once written: reads return the stored bytes
unchanged, which keeps repeated fetches byte-identical.
"""

from __future__ import annotations

import os
import re
import secrets
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from .domain import SizerError, SizingRequest, SizingResult, to_canonical_json
from .perfmodel import ModelCoefficients, load_coefficients

_SAFE_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]{0,63}$")


class DuplicateProfileError(SizerError):
    """A coefficient profile with this name already exists."""


@dataclass(frozen=True)
class RunRecord:
    run_id: str
    created_at: str
    request: SizingRequest
    result: SizingResult

    def to_dict(self) -> dict[str, Any]:
        return {
            "run_id": self.run_id,
            "created_at": self.created_at,
            "request": self.request.to_dict(),
            "result": self.result.to_dict(),
        }


def new_run_id(now: datetime | None = None) -> str:
    """Time-ordered unique id: UTC timestamp plus a random suffix."""
    now = now or datetime.now(timezone.utc)
    return f"{now:%Y%m%dT%H%M%S%f}Z-{secrets.token_hex(4)}"


def utc_now_iso(now: datetime | None = None) -> str:
    now = now or datetime.now(timezone.utc)
    return now.isoformat(timespec="microseconds")


class RunStore:
    """Append-only store of sizing runs."""

    def __init__(self, data_dir: str | Path):
        self.runs_dir = Path(data_dir) / "runs"
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, run_id: str) -> Path | None:
        if not _SAFE_ID.match(run_id):
            return None
        return self.runs_dir / f"{run_id}.json"

    def commit(self, record: RunRecord) -> None:
        """Write a record atomically; refuses to overwrite an existing id."""
        path = self._path(record.run_id)
        if path is None:
            raise SizerError(f"run id {record.run_id!r} is not storable")
        payload = to_canonical_json(record.to_dict()).encode("utf-8")
        with self._lock:
            if path.exists():
                raise SizerError(f"run id {record.run_id!r} already exists")
            fd, tmp = tempfile.mkstemp(dir=self.runs_dir, suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(payload)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def read_bytes(self, run_id: str) -> bytes | None:
        """The stored record exactly as written, or None if unknown."""
        path = self._path(run_id)
        if path is None or not path.exists():
            return None
        return path.read_bytes()


class ProfileRegistry:
    """Named calibration profiles (coefficient tables)."""

    def __init__(self, data_dir: str | Path):
        self.profiles_dir = Path(data_dir) / "profiles"
        self.profiles_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, name: str) -> Path:
        if not _SAFE_ID.match(name):
            raise SizerError(
                f"profile name {name!r} must match [A-Za-z0-9][A-Za-z0-9._-]* (max 64 chars)")
        return self.profiles_dir / f"{name}.json"

    def save(self, name: str, coeffs: ModelCoefficients) -> None:
        path = self._path(name)
        payload = to_canonical_json(coeffs.to_dict()).encode("utf-8")
        with self._lock:
            if path.exists():
                raise DuplicateProfileError(f"profile {name!r} already exists")
            fd, tmp = tempfile.mkstemp(dir=self.profiles_dir, suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(payload)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def load(self, name: str) -> ModelCoefficients | None:
        try:
            path = self._path(name)
        except SizerError:
            return None
        if not path.exists():
            return None
        return load_coefficients(path.read_text(encoding="utf-8"))
