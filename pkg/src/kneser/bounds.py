"""Closed-form chromatic lower bounds for KG^r(n, k, s) and their comparison.

Three bounds are evaluated:

* ``theorem1``: ceil((n - r(k-s-1)) / (r-1)), valid for n >= r(k-1)+1.
* ``afl_eq1``: the classical s = 0 bound ceil((n - r(k-1)) / (r-1)).
* ``hom_eq3``: the s = 0 bound of KG^r(n-s, k-s, 0), which maps into
  KG^r(n, k, s) by padding every set with {n-s+1, ..., n}.

All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .core import KneserParams
from .errors import ParameterError

REPORT_COLUMNS = (
    "n", "k", "r", "s", "theorem1", "afl_eq1", "hom_eq3", "exact_chi", "tight", "solver_status",
)


def ceil_div(a: int, b: int) -> int:
    if b <= 0:
        raise ValueError(f"ceil_div needs a positive denominator, got {b}")
    return -(-a // b)


def theorem1_lower_bound(params: KneserParams) -> int:
    n, k, r, s = params.n, params.k, params.r, params.s
    if not params.bound_applicable:
        raise ParameterError(f"{params.label()}: bound needs n >= r(k-1)+1 = {r * (k - 1) + 1}")
    return ceil_div(n - r * (k - s - 1), r - 1)


def afl_lower_bound(params: KneserParams) -> int:
    n, k, r, s = params.n, params.k, params.r, params.s
    if s != 0:
        raise ParameterError(f"{params.label()}: the s = 0 bound needs s = 0")
    if n < r * k:
        raise ParameterError(f"{params.label()}: the s = 0 bound needs n >= rk = {r * k}")
    return ceil_div(n - r * (k - 1), r - 1)


def homomorphism_lower_bound(params: KneserParams) -> int:
    """Bound transported along KG^r(n-s, k-s, 0) -> KG^r(n, k, s)."""
    n, k, r, s = params.n, params.k, params.r, params.s
    if n - s < r * (k - s):
        raise ParameterError(
            f"{params.label()}: padded source KG^{r}({n - s},{k - s},0) needs n-s >= r(k-s)"
        )
    return ceil_div((n - s) - r * (k - s - 1), r - 1)


@dataclass(frozen=True)
class BoundReport:
    params: KneserParams
    theorem1: int
    afl_eq1: int | None
    homomorphism_eq3: int | None
    exact_chi: int | None = None
    tight: bool | None = None
    solver_status: str = "not_run"

    @property
    def regime(self) -> str:
        """``"rN,N"`` when (n, k) = (rN, N), where the comparison is the one displayed
        for KG^r(rN, N, s); otherwise ``"general"``."""
        p = self.params
        return "rN,N" if p.n == p.r * p.k else "general"

    @property
    def advantage(self) -> int | None:
        if self.homomorphism_eq3 is None:
            return None
        return self.theorem1 - self.homomorphism_eq3

    def to_dict(self) -> dict:
        p = self.params
        return {
            "n": p.n, "k": p.k, "r": p.r, "s": p.s,
            "theorem1": self.theorem1,
            "afl_eq1": self.afl_eq1,
            "hom_eq3": self.homomorphism_eq3,
            "exact_chi": self.exact_chi,
            "tight": self.tight,
            "solver_status": self.solver_status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    def csv_row(self) -> list[str]:
        out = []
        for key, value in self.to_dict().items():
            if value is None:
                out.append("")
            elif isinstance(value, bool):
                out.append("true" if value else "false")
            else:
                out.append(str(value))
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        return cls(
            KneserParams(d["n"], d["k"], d["r"], d["s"]),
            d["theorem1"], d["afl_eq1"], d["hom_eq3"],
            d.get("exact_chi"), d.get("tight"), d.get("solver_status", "not_run"),
        )


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for rep in reports:
        writer.writerow(rep.csv_row())
    return buf.getvalue()


def formula_report(params: KneserParams) -> BoundReport:
    """All closed-form fields; no solving."""
    theorem1 = theorem1_lower_bound(params)
    try:
        afl = afl_lower_bound(params)
    except ParameterError:
        afl = None
    try:
        hom = homomorphism_lower_bound(params)
    except ParameterError:
        hom = None
    return BoundReport(params, theorem1, afl, hom)


def compare_bounds(params: KneserParams, budget=None) -> BoundReport:
    """Closed-form bounds plus, if ``budget`` is given, the exact chromatic number.

    A solver that runs out of budget leaves ``exact_chi`` empty; it never raises.
    """
    from .solver import exact_chromatic

    report = formula_report(params)
    if budget is None:
        return report
    result = exact_chromatic(params, budget)
    if result.chi is None:
        return _replace(report, solver_status=result.status)
    return _replace(
        report, exact_chi=result.chi, tight=result.chi == report.theorem1,
        solver_status=result.status,
    )


def _replace(report: BoundReport, **changes) -> BoundReport:
    from dataclasses import replace

    return replace(report, **changes)
