"""Check records and reports: exact values only, deterministic order."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

PASS, FAIL, ERRATUM, INFO = "pass", "fail", "erratum", "info"


def fmt_rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_value(v):
    """Exact vectors and scalars as strings of "p/q"; nested tuples kept as lists."""
    if v is None:
        return None
    if isinstance(v, (str, bool)):
        return v
    if isinstance(v, (int, Fraction)):
        return fmt_rat(v)
    return [fmt_value(x) for x in v]


@dataclass(frozen=True)
class Record:
    check: str
    status: str
    witness: tuple | None = None
    expected: object = None
    actual: object = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "witness": list(self.witness) if self.witness is not None else None,
            "expected": fmt_value(self.expected),
            "actual": fmt_value(self.actual),
            "detail": self.detail,
        }

    def human(self) -> str:
        parts = [f"[{self.status.upper():7}] {self.check}"]
        if self.witness is not None:
            parts.append("at (" + ",".join(str(w) for w in self.witness) + ")")
        if self.expected is not None or self.actual is not None:
            parts.append(f"expected {_show(self.expected)} actual {_show(self.actual)}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


def _show(v) -> str:
    f = fmt_value(v)
    if isinstance(f, list):
        return "(" + ", ".join(_show_inner(x) for x in f) + ")"
    return str(f)


def _show_inner(x) -> str:
    return _show(x) if isinstance(x, list) else str(x)


@dataclass
class Report:
    records: list[Record] = field(default_factory=list)

    def add(self, record: Record) -> Record:
        self.records.append(record)
        return record

    def extend(self, records) -> None:
        self.records.extend(records)

    def failures(self, strict: bool = False) -> list[Record]:
        bad = {FAIL, ERRATUM} if strict else {FAIL}
        return [r for r in self.records if r.status in bad]

    def ok(self, strict: bool = False) -> bool:
        return not self.failures(strict)

    def errata(self) -> list[Record]:
        return [r for r in self.records if r.status == ERRATUM]

    def __getitem__(self, check: str) -> Record:
        for r in self.records:
            if r.check == check:
                return r
        raise KeyError(check)

    def render(self, fmt: str = "human") -> str:
        if fmt == "records":
            return "".join(json.dumps(r.as_dict(), sort_keys=True) + "\n" for r in self.records)
        return "".join(r.human() + "\n" for r in self.records)


def vector_or_none(v):
    return None if v is None else tuple(np.asarray(v, dtype=object).tolist())
