"""Structured pass/fail records shared by every verification suite."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"
REFUSED = "REFUSED"
STATUSES = (PASS, FAIL, SKIPPED, REFUSED)

EXACT_ZERO = "exact-zero"


def timed(fn: Callable, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


@dataclass
class Case:
    spec: str
    check: str
    status: str
    residual: float | str | None = None
    tolerance: float | str | None = None
    wall_time: float | None = None
    detail: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @classmethod
    def exact(cls, spec: str, check: str, residual, wall_time: float | None = None) -> "Case":
        """Case for an exact identity; ``residual`` is a polynomial that must vanish."""
        if residual.is_zero():
            return cls(spec, check, PASS, EXACT_ZERO, "exact", wall_time)
        mag = max(abs(complex(c)) for c in residual.coeffs)
        return cls(spec, check, FAIL, mag, "exact", wall_time, detail=f"residual = {residual}")

    @classmethod
    def numeric(
        cls, spec: str, check: str, residual: float, tolerance: float,
        wall_time: float | None = None, detail: str = "",
    ) -> "Case":
        status = PASS if residual <= tolerance else FAIL
        return cls(spec, check, status, float(residual), tolerance, wall_time, detail)

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        d = {
            "spec": self.spec,
            "check": self.check,
            "status": self.status,
            "residual": self.residual,
            "tolerance": self.tolerance,
        }
        if self.detail:
            d["detail"] = self.detail
        if timings:
            d["wall_time"] = self.wall_time
        return d


@dataclass
class VerificationReport:
    suite: str
    cases: list[Case] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)
    notes: dict[str, Any] = field(default_factory=dict)

    def add(self, case: Case) -> Case:
        self.cases.append(case)
        return case

    def extend(self, other: "VerificationReport", prefix: str | None = None) -> None:
        for c in other.cases:
            if prefix:
                c = Case(c.spec, f"{prefix}/{c.check}", c.status, c.residual,
                         c.tolerance, c.wall_time, c.detail)
            self.cases.append(c)
        self.notes.update(other.notes)

    @property
    def totals(self) -> dict[str, int]:
        t = {s: 0 for s in STATUSES}
        for c in self.cases:
            t[c.status] += 1
        t["total"] = len(self.cases)
        return t

    @property
    def ok(self) -> bool:
        return not any(c.status == FAIL for c in self.cases)

    def failures(self) -> list[Case]:
        return [c for c in self.cases if c.status == FAIL]

    def first_failure(self) -> Case | None:
        return next(iter(self.failures()), None)

    def by_status(self, status: str) -> list[Case]:
        return [c for c in self.cases if c.status == status]

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "config": self.config,
            "cases": [c.to_dict(timings) for c in self.cases],
            "totals": self.totals,
            "notes": self.notes,
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=False)

    def to_csv(self, timings: bool = False) -> str:
        buf = io.StringIO()
        cols = ["spec", "check", "status", "residual", "tolerance", "detail"]
        if timings:
            cols.append("wall_time")
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for c in self.cases:
            row = c.to_dict(timings)
            row.setdefault("detail", "")
            w.writerow(row)
        return buf.getvalue()

    def to_text(self, timings: bool = False) -> str:
        lines = [f"suite: {self.suite}"]
        for c in self.cases:
            res = c.residual if isinstance(c.residual, str) or c.residual is None else f"{c.residual:.3e}"
            line = f"  {c.status:<8} {c.check:<40} {c.spec}  residual={res}"
            if timings and c.wall_time is not None:
                line += f"  t={c.wall_time:.4f}s"
            if c.status == FAIL and c.detail:
                line += f"  [{c.detail}]"
            lines.append(line)
        for k, v in self.notes.items():
            lines.append(f"note {k}: {v}")
        t = self.totals
        lines.append(
            f"totals: {t['total']} cases, {t[PASS]} pass, {t[FAIL]} fail, "
            f"{t[SKIPPED]} skipped, {t[REFUSED]} refused"
        )
        return "\n".join(lines)

    def render(self, fmt: str, timings: bool = False) -> str:
        if fmt == "json":
            return self.to_json(timings)
        if fmt == "csv":
            return self.to_csv(timings)
        if fmt == "text":
            return self.to_text(timings)
        raise ValueError(f"unknown format {fmt!r}")
