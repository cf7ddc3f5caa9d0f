"""Uniform result rows for theorem checks.

ASSERT rows carry exact or constant-free claims and decide the exit status.
RATIO rows carry claims with unspecified constants and are only measured.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, List, Union

Number = Union[int, Fraction, float]

ASSERT = "ASSERT"
RATIO = "RATIO"
COLUMNS = ("suite", "claim_ref", "kind", "lhs", "main_term", "error", "rhs", "ratio", "verdict")


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _ratio(num: Number | None, den: Number | None) -> float | None:
    if num is None or den is None:
        return None
    if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
        return float(Fraction(num) / den) if den else None
    den_f = float(den)
    if den_f == 0:
        return None
    return float(num) / den_f


@dataclass
class BoundReport:
    suite: str
    claim_ref: str
    kind: str
    lhs: Any
    rhs: Any = None
    main_term: Any = None
    error: Any = None
    ratio: float | None = None
    verdict: bool | None = None
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.kind == ASSERT and self.verdict is False

    def as_row(self) -> dict:
        return {name: format_value(getattr(self, name)) for name in COLUMNS}

    def as_dict(self) -> dict:
        row = self.as_row()
        if self.note:
            row["note"] = self.note
        return row


def assert_le(
    suite: str,
    claim_ref: str,
    lhs: Number,
    rhs: Number,
    *,
    main_term: Number | None = None,
    rel_tol: float = 0.0,
    note: str = "",
) -> BoundReport:
    """ASSERT lhs <= rhs, exactly for rationals, with ``rel_tol`` slack for floats."""
    if isinstance(lhs, float) or isinstance(rhs, float):
        holds = float(lhs) <= float(rhs) + rel_tol * max(abs(float(rhs)), abs(float(lhs)), 1.0)
    else:
        holds = lhs <= rhs
    error = None if main_term is None else lhs - main_term
    return BoundReport(
        suite=suite,
        claim_ref=claim_ref,
        kind=ASSERT,
        lhs=lhs,
        rhs=rhs,
        main_term=main_term,
        error=error,
        ratio=_ratio(lhs, rhs),
        verdict=bool(holds),
        note=note,
    )


def assert_eq(suite: str, claim_ref: str, lhs: Any, rhs: Any, *, note: str = "") -> BoundReport:
    return BoundReport(
        suite=suite,
        claim_ref=claim_ref,
        kind=ASSERT,
        lhs=lhs,
        rhs=rhs,
        verdict=bool(lhs == rhs),
        note=note,
    )


def assert_close(
    suite: str,
    claim_ref: str,
    lhs: Any,
    rhs: Any,
    *,
    rel_tol: float = 1e-6,
    scale: float | None = None,
    note: str = "",
) -> BoundReport:
    """ASSERT |lhs - rhs| <= rel_tol * scale; ``error`` holds the relative residual."""
    diff = abs(complex(lhs) - complex(rhs))
    if scale is None:
        scale = max(abs(complex(lhs)), abs(complex(rhs)), 1.0)
    residual = diff / scale if scale else diff
    return BoundReport(
        suite=suite,
        claim_ref=claim_ref,
        kind=ASSERT,
        lhs=lhs,
        rhs=rhs,
        error=residual,
        verdict=residual <= rel_tol,
        note=note,
    )


def assert_true(suite: str, claim_ref: str, holds: bool, *, lhs: Any = None, rhs: Any = None, note: str = "") -> BoundReport:
    return BoundReport(suite=suite, claim_ref=claim_ref, kind=ASSERT, lhs=lhs, rhs=rhs, verdict=bool(holds), note=note)


def ratio_row(
    suite: str,
    claim_ref: str,
    lhs: Number,
    rhs: Number | None,
    *,
    main_term: Number | None = None,
    error: Number | None = None,
    note: str = "",
) -> BoundReport:
    """RATIO row: ``ratio`` is |error| / rhs when an error is given, lhs / rhs otherwise."""
    if error is None and main_term is not None:
        error = lhs - main_term
    measured = abs(error) if error is not None else lhs
    return BoundReport(
        suite=suite,
        claim_ref=claim_ref,
        kind=RATIO,
        lhs=lhs,
        rhs=rhs,
        main_term=main_term,
        error=error,
        ratio=_ratio(measured, rhs),
        note=note,
    )


@dataclass
class Report:
    metadata: dict = field(default_factory=dict)
    rows: List[BoundReport] = field(default_factory=list)

    def extend(self, rows: Iterable[BoundReport]) -> "Report":
        self.rows.extend(rows)
        return self

    def add(self, row: BoundReport) -> BoundReport:
        self.rows.append(row)
        return row

    @property
    def failed(self) -> List[BoundReport]:
        return [row for row in self.rows if row.failed]

    @property
    def ok(self) -> bool:
        return not self.failed

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def as_dict(self) -> dict:
        return {"metadata": self.metadata, "rows": [row.as_dict() for row in self.rows]}
