import json
from pathlib import Path

import pytest

from sizer.domain import validate_request
from sizer.engine import size

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"

# Reference workload: U=100 users, T=100 req/s, P=64 KB total payload.
# One default service then costs 6.5 CPU% on the perflab tier.
REFERENCE_PROFILE = {
    "workload_type": "steady",
    "concurrency": 100,
    "throughput": 100.0,
    "payload_request_kb": 32.0,
    "payload_response_kb": 32.0,
}


def make_raw_request(count=10, architecture="distributed", level="runtime",
                     profile=REFERENCE_PROFILE, **overrides):
    raw = {
        "services": [
            {"id": f"svc-{i:02d}", "implementation_type": "java", "binding_type": "soap_http"}
            for i in range(1, count + 1)
        ],
        "architecture": architecture,
        "level": level,
        "default_profile": dict(profile) if profile else None,
    }
    raw.update(overrides)
    return raw


@pytest.fixture(scope="session")
def ten_service_raw():
    return json.loads((DATA_DIR / "request_10_services.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def ten_service_request(ten_service_raw):
    return validate_request(ten_service_raw)


@pytest.fixture(scope="session")
def ten_service_result(ten_service_request):
    return size(ten_service_request)
