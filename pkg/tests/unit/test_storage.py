import json
from fractions import Fraction
from pathlib import Path

import pytest

from sumprod import storage
from sumprod.errors import DomainError
from sumprod.reports import Report, assert_le, ratio_row


def _report() -> Report:
    report = Report(metadata={"command": "energy", "params": {"p": 5}})
    report.add(assert_le("energy", "E+ <= |A|^3", 19, 27))
    report.add(ratio_row("energy", "f:E_CS", Fraction(7, 2), 2, note="measured"))
    return report


def test_read_report_raises_when_missing(tmp_path: Path):
    with pytest.raises(DomainError):
        storage.read_report(tmp_path / "missing.csv")


def test_write_and_read_csv(tmp_path: Path):
    path = storage.write_report(_report(), tmp_path / "out" / "energy.csv")
    data = storage.read_report(path)
    assert data["metadata"]["command"] == "energy"
    assert json.loads(data["metadata"]["params"]) == {"p": 5}
    assert [row["claim_ref"] for row in data["rows"]] == ["E+ <= |A|^3", "f:E_CS"]
    assert data["rows"][0]["verdict"] == "true"
    assert data["rows"][1]["lhs"] == "7/2"


def test_write_and_read_json_keeps_notes(tmp_path: Path):
    path = storage.write_report(_report(), tmp_path / "energy.json", fmt="json")
    data = storage.read_report(path)
    assert data["rows"][1]["note"] == "measured"
    assert data["rows"][1]["ratio"] == "1.75"


def test_atomic_write_has_no_tmp_leftover(tmp_path: Path):
    storage.write_report(_report(), tmp_path / "energy.csv")
    assert list(tmp_path.glob("*.tmp-*")) == []


def test_unknown_format_is_rejected(tmp_path: Path):
    with pytest.raises(DomainError):
        storage.write_report(_report(), tmp_path / "energy.xml", fmt="xml")


def test_read_report_rejects_foreign_json(tmp_path: Path):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"items": []}), encoding="utf-8")
    with pytest.raises(DomainError):
        storage.read_report(path)
