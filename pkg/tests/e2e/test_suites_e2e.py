import os

import pytest

from sumprod import storage, suites
from sumprod.config import SumprodConfig, load_env

pytestmark = pytest.mark.e2e


def _require_e2e_enabled():
    if os.getenv("RUN_E2E") != "1":
        pytest.skip("RUN_E2E is not set to 1")

    load_env()
    try:
        SumprodConfig.validate_required(["SUMPROD_E2E_SEED"])
    except ValueError as exc:
        pytest.skip(str(exc))


@pytest.mark.parametrize("name", [name for name in suites.suite_names() if name != "all"])
def test_full_suite_e2e(name, tmp_path):
    _require_e2e_enabled()

    report = suites.run_suite(name, seed=int(os.environ["SUMPROD_E2E_SEED"]))

    path = storage.write_report(report, tmp_path / f"{name}.csv")
    failed = [f"{row.claim_ref} ({row.note})" for row in report.failed]
    assert failed == [], f"see {path}"
    assert storage.read_report(path)["rows"]
