"""``kneser`` command line: bounds, exact solving, verifiers, sweeps and a result cache.

Exit codes: 0 success, 1 property violation found, 2 budget exceeded,
3 invalid parameters.  Data goes to stdout, logs to stderr.
"""

from __future__ import annotations

import argparse
import csv
import fcntl
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import REPORT_COLUMNS, BoundReport, formula_report, reports_to_csv, theorem1_lower_bound
from .core import (
    DEFAULT_MAX_VERTICES,
    Coloring,
    KneserParams,
    export_text,
    vertex_masks,
    mask_elements,
    verify_homomorphism,
)
from .errors import BudgetExceeded, ParameterError, StructuralError
from .reduction import extract_witness, smallest_prime_factor
from .solver import (
    BUDGET_EXCEEDED,
    CHI_FOUND,
    SolveBudget,
    coloring_from_json,
    coloring_text,
    coloring_to_json,
    exact_chromatic,
    find_monochromatic_edge,
    windowed_coloring_s0,
)
from .tucker import TuckerInstance, verify_tucker

EXIT_OK, EXIT_VIOLATION, EXIT_BUDGET, EXIT_PARAMS = 0, 1, 2, 3
DEFAULT_CACHE = "kneser-cache.jsonl"

log = logging.getLogger("kneser")


@dataclass(frozen=True)
class CacheRecord:
    n: int
    k: int
    r: int
    s: int
    chi: int | None
    solver_status: str
    nodes: int
    tool_version: str
    timestamp: str

    def __post_init__(self):
        if self.solver_status not in (CHI_FOUND, BUDGET_EXCEEDED):
            raise ValueError(f"unknown solver status {self.solver_status!r}")
        if (self.chi is not None) != (self.solver_status == CHI_FOUND):
            raise ValueError("chi must be present exactly when status is chi_found")

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.n, self.k, self.r, self.s)

    @classmethod
    def from_dict(cls, d: dict) -> "CacheRecord":
        fields = ("n", "k", "r", "s", "chi", "solver_status", "nodes", "tool_version", "timestamp")
        return cls(**{f: d[f] for f in fields})


class ResultCache:
    """JSON-lines store of solver outcomes keyed by (n, k, r, s)."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.records: dict[tuple, CacheRecord] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        rec = CacheRecord.from_dict(json.loads(line))
                    except (ValueError, KeyError, TypeError) as exc:
                        log.warning("cache %s line %d skipped: %s", self.path, lineno, exc)
                        continue
                    self.records[rec.key] = rec

    def lookup(self, params: KneserParams, max_nodes: int) -> CacheRecord | None:
        rec = self.records.get((params.n, params.k, params.r, params.s))
        if rec is None:
            return None
        if rec.solver_status == CHI_FOUND or rec.nodes > max_nodes:
            return rec
        return None  # an earlier, smaller budget ran out; retry with this one

    def store(self, rec: CacheRecord):
        replacing = rec.key in self.records
        self.records[rec.key] = rec
        if replacing:
            self._rewrite()
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(json.dumps(asdict(rec)) + "\n")
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def _rewrite(self):
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            for rec in self.records.values():
                fh.write(json.dumps(asdict(rec)) + "\n")
        os.replace(tmp, self.path)


def solve_cached(params: KneserParams, budget: SolveBudget,
                 cache: ResultCache | None) -> tuple[CacheRecord, int]:
    """Cached or freshly solved record, and the solver nodes spent on this call."""
    if cache is not None:
        hit = cache.lookup(params, budget.max_nodes)
        if hit is not None:
            return hit, 0
    result = exact_chromatic(params, budget)
    rec = CacheRecord(
        params.n, params.k, params.r, params.s, result.chi, result.status,
        result.nodes_explored, __version__,
        datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    if cache is not None:
        cache.store(rec)
    return rec, result.nodes_explored


def parse_range(text: str) -> list[int]:
    """``"5"``, ``"5..8"`` (inclusive) or ``"2,3,7"``; ranges may be mixed with commas."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(part))
        except ValueError:
            raise ParameterError(f"bad range {text!r}") from None
    return sorted(set(values))


def _table(columns, rows) -> str:
    cells = [[str(c) for c in columns]] + [["" if v is None else str(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(fmt: str, payload: dict, table_text: str | None = None):
    if fmt == "json":
        sys.stdout.write(json.dumps(payload) + "\n")
    elif fmt == "csv":
        flat = {k: (json.dumps(v) if isinstance(v, (dict, list)) else _fmt(v)) for k, v in payload.items()}
        sys.stdout.write(_csv(list(flat), [list(flat.values())]))
    else:
        sys.stdout.write(table_text if table_text is not None
                         else _table(["field", "value"], [[k, json.dumps(v) if isinstance(v, (dict, list)) else v]
                                                          for k, v in payload.items()]))


def _params(args, r=None) -> KneserParams:
    return KneserParams(args.n, args.k, args.r if r is None else r, args.s)


def _budget(args) -> SolveBudget:
    return SolveBudget(max_nodes=args.max_nodes, max_vertices=args.max_vertices)


def _cache(args) -> ResultCache | None:
    if args.no_cache:
        return None
    return ResultCache(args.cache or os.environ.get("KNESER_CACHE") or DEFAULT_CACHE)


def _read_coloring(path: str, params: KneserParams) -> Coloring:
    coloring = coloring_from_json(Path(path).read_text())
    if len(coloring) != params.num_vertices:
        raise ParameterError(
            f"{path}: {len(coloring)} colors for {params.num_vertices} vertices of {params.label()}"
        )
    return coloring


def cmd_bound(args) -> int:
    rep = formula_report(_params(args))
    if args.exact:
        rec, nodes = solve_cached(rep.params, _budget(args), _cache(args))
        log.info("solver nodes: %d", nodes)
        rep = _with_record(rep, rec)
    d = rep.to_dict()
    if args.format == "json":
        sys.stdout.write(rep.to_json() + "\n")
    elif args.format == "csv":
        sys.stdout.write(reports_to_csv([rep]))
    else:
        sys.stdout.write(_table(REPORT_COLUMNS, [[_fmt(d[c]) for c in REPORT_COLUMNS]]))
    return EXIT_BUDGET if rep.solver_status == BUDGET_EXCEEDED else EXIT_OK


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _with_record(rep: BoundReport, rec: CacheRecord) -> BoundReport:
    from dataclasses import replace

    if rec.chi is None:
        return replace(rep, solver_status=rec.solver_status)
    return replace(rep, exact_chi=rec.chi, tight=rec.chi == rep.theorem1,
                   solver_status=rec.solver_status)


def cmd_chi(args) -> int:
    params = _params(args)
    rec, nodes = solve_cached(params, _budget(args), _cache(args))
    log.info("solver nodes: %d", nodes)
    payload = asdict(rec)
    _emit(args.format, payload, f"{rec.chi}\n" if rec.chi is not None else "budget_exceeded\n")
    return EXIT_OK if rec.solver_status == CHI_FOUND else EXIT_BUDGET


def cmd_color(args) -> int:
    params = _params(args)
    method = args.method
    if method == "auto":
        method = "windowed" if params.s == 0 and params.n >= params.r * params.k else "solver"
    if method == "windowed":
        coloring = windowed_coloring_s0(params)
    else:
        result = exact_chromatic(params, _budget(args))
        log.info("solver nodes: %d", result.nodes_explored)
        if result.witness is None:
            log.error("%s: solver budget exhausted", params.label())
            return EXIT_BUDGET
        coloring = result.witness
    if args.output:
        Path(args.output).write_text(coloring_to_json(coloring) + "\n")
    if args.format == "json":
        sys.stdout.write(coloring_to_json(coloring) + "\n")
    elif args.format == "csv":
        rows = [[" ".join(map(str, mask_elements(mask))), c]
                for mask, c in zip(vertex_masks(params.n, params.k), coloring.colors)]
        sys.stdout.write(_csv(["vertex", "color"], rows))
    else:
        sys.stdout.write(coloring_text(params, coloring))
    return EXIT_OK


def cmd_verify(args) -> int:
    params = _params(args)
    coloring = _read_coloring(args.coloring, params)
    edge = find_monochromatic_edge(params, coloring, _budget(args))
    payload = {"proper": edge is None, "colors": coloring.num_used,
               "edge": edge.as_lists() if edge is not None else None}
    text = "proper\n" if edge is None else f"improper: monochromatic edge {edge}\n"
    _emit(args.format, payload, text)
    return EXIT_OK if edge is None else EXIT_VIOLATION


def cmd_tucker(args) -> int:
    params = KneserParams(args.n, args.k, args.p, args.s)
    if args.coloring == "auto":
        result = exact_chromatic(params, _budget(args))
        if result.witness is None:
            log.error("%s: solver budget exhausted", params.label())
            return EXIT_BUDGET
        coloring = result.witness
    else:
        coloring = _read_coloring(args.coloring, params)
    if not args.diagnostic:
        edge = find_monochromatic_edge(params, coloring, _budget(args))
        if edge is not None:
            log.error("coloring is not proper: monochromatic edge %s", edge)
            return EXIT_VIOLATION
    instance = TuckerInstance(args.p, params, coloring, diagnostic=args.diagnostic)
    report = verify_tucker(instance, max_enumeration=args.max_enumeration)
    d = report.to_dict()
    c = d["conclusion"]
    alpha, colors, p = d["alpha"], d["C"], d["p"]
    rel = ">=" if c["holds"] else "<"
    text = (
        f"instance     p={p} n={d['n']} k={d['k']} s={d['s']} C={colors} alpha={alpha} m={d['m']}\n"
        f"equivariance {d['equivariance']} ({d['vectors_enumerated']} vectors)\n"
        f"condition 2  {d['cond2']} ({d['pairs_enumerated']} pairs)\n"
        f"condition 3  {d['cond3']} ({d['chains_enumerated']} chains)\n"
        f"conclusion   {alpha}+{colors}*{p - 1} = {c['lhs']} {rel} {c['rhs']}\n"
    )
    if d["witness"] is not None:
        text += f"witness      {json.dumps(d['witness'])}\n"
    _emit(args.format, d, text)
    return EXIT_OK if report.all_pass else EXIT_VIOLATION


def cmd_hom(args) -> int:
    source = KneserParams(args.n, args.k, args.r, 0)
    target = KneserParams(args.n + args.target_s, args.k + args.target_s, args.r, args.target_s)
    check = verify_homomorphism(source, target, args.max_vertices)
    payload = {"source": source.label(), "target": target.label(), "passed": check.passed,
               "edges_checked": check.edges_checked,
               "counterexample": check.counterexample.as_lists() if check.counterexample else None}
    text = (f"{source.label()} -> {target.label()}: "
            f"{'pass' if check.passed else 'FAIL'} ({check.edges_checked} edges checked)\n")
    _emit(args.format, payload, text)
    return EXIT_OK if check.passed else EXIT_VIOLATION


def cmd_reduce(args) -> int:
    params = _params(args)
    r1 = args.r1 or smallest_prime_factor(params.r)
    if params.r % r1:
        raise ParameterError(f"r1={r1} does not divide r={params.r}")
    r2 = params.r // r1
    t = args.t if args.t is not None else theorem1_lower_bound(params) - 1
    if t < 1:
        raise ParameterError(f"t={t}: the bound leaves no room below it")
    if args.coloring == "random":
        rng = np.random.default_rng(args.seed)
        coloring = Coloring.from_list(rng.integers(1, t + 1, params.num_vertices).tolist(), t)
    elif args.coloring == "mod":
        coloring = Coloring.from_list(
            [min(mask_elements(m)) % t + 1 for m in vertex_masks(params.n, params.k)], t)
    else:
        coloring = _read_coloring(args.coloring, params)
    try:
        report = extract_witness(params, r1, r2, coloring, t, method=args.method,
                                 max_subsets=args.max_nodes)
    except StructuralError as exc:
        log.error("structural error: %s", exc)
        return EXIT_VIOLATION
    d = report.to_dict()
    text = (f"{params.label()} r1={r1} r2={r2} t={t} m={d['m']}\n"
            f"edge   {' '.join('{' + ','.join(map(str, e)) + '}' for e in d['edge'])}\n"
            f"color  {d['color']}\n"
            f"checks {' '.join(f'{k}={v}' for k, v in d['checks'].items())}\n")
    _emit(args.format, d, text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    budget, cache = _budget(args), _cache(args)
    reports, exceeded, total_nodes = [], False, 0
    for r in parse_range(args.r):
        for k in parse_range(args.k):
            for s in parse_range(args.s):
                for n in parse_range(args.n):
                    try:
                        params = KneserParams(n, k, r, s)
                    except ParameterError as exc:
                        log.info("skip n=%d k=%d r=%d s=%d: %s", n, k, r, s, exc)
                        continue
                    if not params.bound_applicable:
                        log.info("skip %s: n < r(k-1)+1", params.label())
                        continue
                    if params.num_vertices > budget.max_vertices:
                        log.info("skip %s: %d vertices over the cap %d", params.label(),
                                 params.num_vertices, budget.max_vertices)
                        continue
                    rep = formula_report(params)
                    if not args.formulas_only:
                        rec, nodes = solve_cached(params, budget, cache)
                        total_nodes += nodes
                        exceeded |= rec.solver_status == BUDGET_EXCEEDED
                        rep = _with_record(rep, rec)
                    reports.append(rep)
    log.info("solver nodes: %d", total_nodes)
    if args.format == "json":
        sys.stdout.write(json.dumps([rep.to_dict() for rep in reports]) + "\n")
    elif args.format == "table":
        sys.stdout.write(_table(REPORT_COLUMNS, [[_fmt(v) for v in rep.to_dict().values()]
                                                 for rep in reports]))
    else:
        sys.stdout.write(reports_to_csv(reports))
    return EXIT_BUDGET if exceeded and args.strict else EXIT_OK


def cmd_export(args) -> int:
    sys.stdout.write(export_text(_params(args), with_graph=args.graph,
                                 max_vertices=args.max_vertices))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMS, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"),
                        help="default: csv for sweep, table otherwise")
    common.add_argument("--max-nodes", type=int, default=10**7, help="search node cap")
    common.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
    common.add_argument("--cache", help="JSON-lines result cache (default $KNESER_CACHE or "
                        f"./{DEFAULT_CACHE})")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    def nkrs(p, r=True, s=True):
        p.add_argument("-n", type=int, required=True)
        p.add_argument("-k", type=int, required=True)
        if r:
            p.add_argument("-r", type=int, required=True)
        if s:
            p.add_argument("-s", type=int, default=0)

    parser = _Parser(prog="kneser", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", parents=[common], help="closed-form lower bounds")
    nkrs(p)
    p.add_argument("--exact", action="store_true", help="also solve for the chromatic number")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("chi", parents=[common], help="exact chromatic number (cached)")
    nkrs(p)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("color", parents=[common], help="print a proper coloring")
    nkrs(p)
    p.add_argument("--method", choices=("auto", "windowed", "solver"), default="auto")
    p.add_argument("--output", help="also write the coloring as a JSON array")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", parents=[common], help="check a coloring file for properness")
    nkrs(p)
    p.add_argument("--coloring", required=True, help="JSON array in vertex order")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tucker", parents=[common], help="exhaustive Z_p-Tucker check")
    p.add_argument("-p", type=int, required=True)
    nkrs(p, r=False)
    p.add_argument("--coloring", default="auto", help="'auto' (solver optimum) or a JSON file")
    p.add_argument("--diagnostic", action="store_true", help="allow improper colorings")
    p.add_argument("--max-enumeration", type=int, default=10**7)
    p.set_defaults(func=cmd_tucker)

    p = sub.add_parser("hom", parents=[common], help="check the padding homomorphism")
    nkrs(p, s=False)
    p.add_argument("--target-s", type=int, required=True)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("reduce", parents=[common], help="extract a monochromatic edge")
    nkrs(p)
    p.add_argument("--r1", type=int, help="first factor (default: smallest prime factor)")
    p.add_argument("-t", type=int, help="color count (default: bound - 1)")
    p.add_argument("--coloring", default="random", help="'random', 'mod', or a JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("auto", "reduction"), default="auto")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sweep", parents=[common], help="grid of bound reports as CSV")
    for name in ("n", "k", "r", "s"):
        p.add_argument(f"--{name}", required=True, help="e.g. 5..8 or 2,3")
    p.add_argument("--strict", action="store_true", help="exit 2 if any cell runs out of budget")
    p.add_argument("--formulas-only", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", parents=[common], help="dump vertices in canonical order")
    nkrs(p)
    p.add_argument("--graph", action="store_true", help="include compatibility-graph edges")
    p.set_defaults(func=cmd_export)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARAMS
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "table"
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr, force=True)
    try:
        return args.func(args)
    except ParameterError as exc:
        log.error("invalid parameters: %s", exc)
        return EXIT_PARAMS
    except BudgetExceeded as exc:
        log.error("budget exceeded: %s", exc)
        return EXIT_BUDGET


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
