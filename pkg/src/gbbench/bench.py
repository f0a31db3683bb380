"""Benchmark driver: timed Groebner runs across order strategies, reports,
and a comparator microbenchmark.

The timing protocol per cell: build the engine polynomials under the order
(weight-vector initialization included) and run Buchberger with a hard time
limit; repeat until the cumulative time exceeds min_measure_seconds and
report total/m, so sub-resolution runs are still measured meaningfully. A
cell that hits the limit is ABORTED and excluded from ratio statistics.
"""

from __future__ import annotations

import csv
import io
import json
import random
import statistics
from dataclasses import dataclass, field
from importlib import resources
from time import perf_counter

from .corpus import SystemSpec, permute_variables, realize
from .groebner import (
    EngineStats,
    INDUCED_ORDER,
    WEIGHT_VECTOR,
    MatrixCachedOrder,
    SelectionStrategy,
    audit_cached_weights,
    buchberger,
    reduce_basis,
    reorder_variables,
    verify_groebner,
)
from .modfield import PrimeField
from .ordering import (
    DegRevLexOrder,
    MatrixDirectOrder,
    SubtotalOrder,
    cmp_degrevlex,
    cmp_subtotal,
    degrevlex_weight_matrix,
    subtotal_weight_matrix,
)

ORDER_LABELS = (
    "degrevlex",
    "subtotal",
    "grevlex-matrix",
    "subtotal-matrix",
    "grevlex-matrix-direct",
    "subtotal-matrix-direct",
)

DEFAULT_ORDERS = ("degrevlex", "grevlex-matrix", "subtotal-matrix", "subtotal")
DEFAULT_REFERENCE = "grevlex-matrix"

_FAMILY_MATRIX = {
    "degrevlex": degrevlex_weight_matrix,
    "grevlex-matrix": degrevlex_weight_matrix,
    "grevlex-matrix-direct": degrevlex_weight_matrix,
    "subtotal": subtotal_weight_matrix,
    "subtotal-matrix": subtotal_weight_matrix,
    "subtotal-matrix-direct": subtotal_weight_matrix,
}


def order_factory(label: str):
    """Factory n -> MonomialOrder for a roster label."""
    if label == "degrevlex":
        return lambda n: DegRevLexOrder(n, label=label)
    if label == "subtotal":
        return lambda n: SubtotalOrder(n, label=label)
    if label == "grevlex-matrix":
        return lambda n: MatrixCachedOrder(degrevlex_weight_matrix(n), label=label)
    if label == "subtotal-matrix":
        return lambda n: MatrixCachedOrder(subtotal_weight_matrix(n), label=label)
    if label == "grevlex-matrix-direct":
        return lambda n: MatrixDirectOrder(degrevlex_weight_matrix(n), label=label)
    if label == "subtotal-matrix-direct":
        return lambda n: MatrixDirectOrder(subtotal_weight_matrix(n), label=label)
    raise ValueError(f"unknown order label {label!r}; known: {', '.join(ORDER_LABELS)}")


def strategy_for(label: str, n: int, kind: str) -> SelectionStrategy:
    """Selection strategy for a run; weight-vector uses the order's family matrix."""
    if kind == INDUCED_ORDER:
        return SelectionStrategy.induced_order()
    if kind == WEIGHT_VECTOR:
        return SelectionStrategy.weight_vector(_FAMILY_MATRIX[label](n))
    raise ValueError(f"unknown strategy kind {kind!r}")


@dataclass(frozen=True)
class BenchmarkConfig:
    orders: tuple = DEFAULT_ORDERS
    reference: str = DEFAULT_REFERENCE
    strategy: str = INDUCED_ORDER
    modulus: int = 32003
    max_seconds: float = 120.0
    min_measure_seconds: float = 1.0
    seed: int = 0
    reorder: bool = False

    def __post_init__(self):
        if not self.orders:
            raise ValueError("no orders selected")
        for label in self.orders:
            if label not in ORDER_LABELS:
                raise ValueError(f"unknown order label {label!r}")
        if len(set(self.orders)) != len(self.orders):
            raise ValueError("duplicate order labels")
        if self.reference not in self.orders:
            raise ValueError(f"reference {self.reference!r} not among the selected orders")
        if self.strategy not in (INDUCED_ORDER, WEIGHT_VECTOR):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.max_seconds <= 0 or self.min_measure_seconds <= 0:
            raise ValueError("time limits must be positive")

    def ratio_labels(self) -> tuple:
        return tuple(f"{lab}/{self.reference}" for lab in self.orders if lab != self.reference)

    def as_dict(self) -> dict:
        return {
            "orders": list(self.orders),
            "reference": self.reference,
            "strategy": self.strategy,
            "modulus": self.modulus,
            "max_seconds": self.max_seconds,
            "min_measure_seconds": self.min_measure_seconds,
            "seed": self.seed,
            "reorder": self.reorder,
        }


@dataclass
class RunCell:
    seconds: float | None
    m: int
    aborted: bool
    stats: EngineStats


@dataclass
class BenchmarkRow:
    name: str
    n_vars: int
    degrees: str
    cells: dict
    ratios: dict


@dataclass(frozen=True)
class RatioSummary:
    n: int
    median: float
    mean: float
    stddev: float
    count_below_one: int
    count_above_one: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "median": self.median,
            "mean": self.mean,
            "stddev": self.stddev,
            "count_below_one": self.count_below_one,
            "count_above_one": self.count_above_one,
        }


@dataclass
class BenchmarkReport:
    config: BenchmarkConfig
    rows: list
    summaries: dict = field(default_factory=dict)


def summarize_ratios(values) -> RatioSummary:
    """Median, mean, sample standard deviation, and counts strictly below and
    above 1 for a nonempty list of ratios."""
    values = [float(v) for v in values]
    if not values:
        raise ValueError("no ratios to summarize")
    return RatioSummary(
        n=len(values),
        median=statistics.median(values),
        mean=statistics.fmean(values),
        stddev=statistics.stdev(values) if len(values) > 1 else 0.0,
        count_below_one=sum(1 for v in values if v < 1.0),
        count_above_one=sum(1 for v in values if v > 1.0),
    )


def format_degree_multiset(degs) -> str:
    """Compress a descending degree multiset: (5,5,5,2,2,2) -> '5^3*2^3'."""
    degs = sorted(degs, reverse=True)
    parts = []
    i = 0
    while i < len(degs):
        j = i
        while j < len(degs) and degs[j] == degs[i]:
            j += 1
        k = j - i
        parts.append(f"{degs[i]}^{k}" if k > 1 else f"{degs[i]}")
        i = j
    return "*".join(parts)


def timed_run(spec: SystemSpec, order_label: str, config: BenchmarkConfig,
              strategy_kind: str | None = None) -> RunCell:
    """One benchmark cell: repeat realize+buchberger until the cumulative
    wall time exceeds min_measure_seconds, then average."""
    field_ = PrimeField(config.modulus)
    factory = order_factory(order_label)
    kind = strategy_kind or config.strategy
    total = 0.0
    m = 0
    stats = None
    while True:
        order = factory(spec.nvars)
        strategy = strategy_for(order_label, spec.nvars, kind)
        t0 = perf_counter()
        polys = realize(spec, order, field_)
        res = buchberger(polys, strategy=strategy, max_seconds=config.max_seconds)
        elapsed = perf_counter() - t0
        m += 1
        if res.aborted:
            return RunCell(seconds=None, m=m, aborted=True, stats=res.stats)
        total += elapsed
        stats = res.stats
        if total >= config.min_measure_seconds:
            return RunCell(seconds=total / m, m=m, aborted=False, stats=stats)


def _reordered(spec: SystemSpec, config: BenchmarkConfig) -> SystemSpec:
    if not config.reorder:
        return spec
    order = DegRevLexOrder(spec.nvars)
    polys = realize(spec, order, PrimeField(config.modulus))
    return permute_variables(spec, reorder_variables(polys))


def run_benchmark(specs, config: BenchmarkConfig | None = None) -> BenchmarkReport:
    """Benchmark each system across the configured orders.

    Rows are sorted ascending by the last ratio column (aborted rows at the
    end), and each ratio column gets summary statistics over its non-aborted
    values.
    """
    config = config or BenchmarkConfig()
    rows = []
    for spec in specs:
        spec = _reordered(spec, config)
        cells = {}
        for label in config.orders:
            cells[label] = timed_run(spec, label, config)
        ratios = {}
        ref = cells[config.reference]
        for label in config.orders:
            if label == config.reference:
                continue
            cell = cells[label]
            key = f"{label}/{config.reference}"
            if cell.seconds is not None and ref.seconds is not None:
                ratios[key] = cell.seconds / ref.seconds
            else:
                ratios[key] = None
        rows.append(BenchmarkRow(
            name=spec.name,
            n_vars=spec.nvars,
            degrees=format_degree_multiset(spec.degree_multiset()),
            cells=cells,
            ratios=ratios,
        ))
    ratio_labels = config.ratio_labels()
    if ratio_labels:
        last = ratio_labels[-1]
        rows.sort(key=lambda r: (1, 0.0, r.name) if r.ratios.get(last) is None
                  else (0, r.ratios[last], r.name))
    summaries = {}
    for key in ratio_labels:
        vals = [r.ratios[key] for r in rows if r.ratios.get(key) is not None]
        if vals:
            summaries[key] = summarize_ratios(vals)
    return BenchmarkReport(config=config, rows=rows, summaries=summaries)


_STAT_FIELDS = ("comparisons", "pairs_processed", "pairs_skipped_by_criteria",
                "reduction_steps", "matvec_products", "wall_time")


def _render_text(report: BenchmarkReport) -> str:
    cfg = report.config
    head = (f"gbbench  modulus={cfg.modulus}  strategy={cfg.strategy}  "
            f"limit={cfg.max_seconds:g}s  min-measure={cfg.min_measure_seconds:g}s  "
            f"reference={cfg.reference}")
    cols = ["system", "vars", "degrees"]
    cols += [f"{lab} [s]" for lab in cfg.orders]
    ratio_labels = cfg.ratio_labels()
    cols += list(ratio_labels)
    table = [cols]
    for r in report.rows:
        line = [r.name, str(r.n_vars), r.degrees]
        for lab in cfg.orders:
            cell = r.cells[lab]
            line.append("ABORTED" if cell.aborted else f"{cell.seconds:.4g}")
        for key in ratio_labels:
            v = r.ratios.get(key)
            line.append("-" if v is None else f"{v:.2f}")
        table.append(line)
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    lines = [head, ""]
    for idx, row in enumerate(table):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    if ratio_labels:
        lines.append("")
        lines.append("statistics (completed rows)")
        for key in ratio_labels:
            s = report.summaries.get(key)
            if s is None:
                lines.append(f"  {key}: no completed rows")
                continue
            lines.append(
                f"  {key}: n={s.n} median={s.median:.2f} mean={s.mean:.2f} "
                f"stddev={s.stddev:.2f} below-1={s.count_below_one} above-1={s.count_above_one}")
    return "\n".join(lines) + "\n"


def _csv_columns(config: BenchmarkConfig) -> list:
    cols = ["name", "n_vars", "degrees"]
    for lab in config.orders:
        cols.append(f"{lab} seconds")
        cols.append(f"{lab} m")
        cols.append(f"{lab} aborted")
        for f_ in _STAT_FIELDS:
            cols.append(f"{lab} {f_}")
    cols += [f"ratio {key}" for key in config.ratio_labels()]
    return cols


def _render_csv(report: BenchmarkReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = _csv_columns(report.config)
    w.writerow(cols)
    for r in report.rows:
        line = [r.name, r.n_vars, r.degrees]
        for lab in report.config.orders:
            cell = r.cells[lab]
            line.append("" if cell.seconds is None else repr(cell.seconds))
            line.append(cell.m)
            line.append(int(cell.aborted))
            d = cell.stats.as_dict()
            for f_ in _STAT_FIELDS:
                v = d[f_]
                line.append(repr(v) if isinstance(v, float) else v)
        for key in report.config.ratio_labels():
            v = r.ratios.get(key)
            line.append("" if v is None else repr(v))
        w.writerow(line)
    return buf.getvalue()


def parse_report_csv(text: str) -> list:
    """Parse a CSV report back into row dicts with typed values; the inverse
    of the CSV renderer over its tabular fields."""
    rdr = csv.DictReader(io.StringIO(text))
    out = []
    for rec in rdr:
        row: dict = {}
        for key, val in rec.items():
            if key in ("name", "degrees"):
                row[key] = val
            elif key == "n_vars":
                row[key] = int(val)
            elif key.endswith(" aborted"):
                row[key] = bool(int(val))
            elif key.endswith((" m", " comparisons", " pairs_processed",
                               " pairs_skipped_by_criteria", " reduction_steps",
                               " matvec_products")):
                row[key] = int(val)
            else:
                row[key] = None if val == "" else float(val)
        out.append(row)
    return out


def _render_jsonl(report: BenchmarkReport) -> str:
    lines = [json.dumps({"type": "config", **report.config.as_dict()}, sort_keys=True)]
    for r in report.rows:
        cells = {}
        for lab, cell in r.cells.items():
            cells[lab] = {
                "seconds": cell.seconds,
                "m": cell.m,
                "aborted": cell.aborted,
                "stats": cell.stats.as_dict(),
            }
        lines.append(json.dumps({
            "type": "row",
            "name": r.name,
            "n_vars": r.n_vars,
            "degrees": r.degrees,
            "cells": cells,
            "ratios": r.ratios,
        }, sort_keys=True))
    lines.append(json.dumps({
        "type": "summary",
        "ratios": {k: s.as_dict() for k, s in report.summaries.items()},
    }, sort_keys=True))
    return "\n".join(lines) + "\n"


def render_report(report: BenchmarkReport, fmt: str = "text") -> str:
    if fmt == "text":
        return _render_text(report)
    if fmt == "csv":
        return _render_csv(report)
    if fmt == "jsonl":
        return _render_jsonl(report)
    raise ValueError(f"unknown report format {fmt!r}")


def comparator_microbench(n: int, samples: int = 1_000_000, seed: int = 0,
                          max_exponent: int = 30, chunk: int = 100_000) -> dict:
    """Time cmp_subtotal against cmp_degrevlex on identical random pairs.

    Pairs are generated outside the timed regions in chunks (memory stays
    bounded); both comparators see exactly the same data, so the ratio
    isolates the comparator bodies plus identical loop overhead.
    """
    if n < 1 or samples < 1:
        raise ValueError("need n >= 1 and samples >= 1")
    rng = random.Random(seed)
    t_deg = 0.0
    t_sub = 0.0
    remaining = samples
    while remaining > 0:
        k = min(chunk, remaining)
        remaining -= k
        pairs = [
            (tuple(rng.randint(0, max_exponent) for _ in range(n)),
             tuple(rng.randint(0, max_exponent) for _ in range(n)))
            for _ in range(k)
        ]
        t0 = perf_counter()
        for a, b in pairs:
            cmp_degrevlex(a, b)
        t_deg += perf_counter() - t0
        t0 = perf_counter()
        for a, b in pairs:
            cmp_subtotal(a, b)
        t_sub += perf_counter() - t0
    return {
        "n": n,
        "samples": samples,
        "seed": seed,
        "max_exponent": max_exponent,
        "degrevlex_seconds": t_deg,
        "subtotal_seconds": t_sub,
        "ratio_subtotal_over_degrevlex": t_sub / t_deg,
    }


@dataclass(frozen=True)
class ReferenceRow:
    name: str
    n_vars: int
    degrees: str
    grevlex_builtin_seconds: float
    grevlex_over_matrix: float
    subtotal_over_matrix: float


def published_reference_ratios() -> list:
    """The bundled reference measurement table (documentation data)."""
    text = resources.files("gbbench").joinpath("data", "reference_ratios.csv").read_text()
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    out = []
    for rec in csv.DictReader(io.StringIO(body)):
        out.append(ReferenceRow(
            name=rec["name"],
            n_vars=int(rec["n_vars"]),
            degrees=rec["degrees"],
            grevlex_builtin_seconds=float(rec["grevlex_builtin_seconds"]),
            grevlex_over_matrix=float(rec["grevlex_over_matrix"]),
            subtotal_over_matrix=float(rec["subtotal_over_matrix"]),
        ))
    return out


@dataclass
class RobustnessResult:
    system: str
    completed: list
    aborted: list
    bases_match: bool | None
    verified: bool | None
    audits_clean: bool | None
    basis_size: int | None

    @property
    def ok(self) -> bool:
        return (not self.aborted and self.bases_match is not False
                and self.verified is not False and self.audits_clean is not False)


def verify_order_robustness(spec: SystemSpec, *, modulus: int = 32003,
                            max_seconds: float = 120.0,
                            strategies=(INDUCED_ORDER, WEIGHT_VECTOR),
                            orders=ORDER_LABELS,
                            stop_on_abort: bool = True,
                            verify: bool = True) -> RobustnessResult:
    """Run every (order, strategy) configuration and cross-check the results.

    Checks that all completed runs yield the identical reduced basis (term for
    term, as exponent/coefficient tuples), that cached weight vectors audit
    clean, and optionally that the basis passes the criterion-free
    verify_groebner against the inputs.
    """
    field_ = PrimeField(modulus)
    completed = []
    aborted = []
    reference = None
    bases_match: bool | None = None
    audits_clean: bool | None = None
    verified: bool | None = None
    basis_size = None
    saved = None
    for label in orders:
        for kind in strategies:
            order = order_factory(label)(spec.nvars)
            strategy = strategy_for(label, spec.nvars, kind)
            polys = realize(spec, order, field_)
            res = buchberger(polys, strategy=strategy, max_seconds=max_seconds)
            if res.aborted:
                aborted.append((label, kind))
                if stop_on_abort:
                    return RobustnessResult(spec.name, completed, aborted, bases_match,
                                            verified, audits_clean, basis_size)
                continue
            completed.append((label, kind))
            red = reduce_basis(res.basis)
            tuples = [g.as_tuples() for g in red]
            if isinstance(order, MatrixCachedOrder):
                clean = not audit_cached_weights(res.basis) and not audit_cached_weights(red)
                audits_clean = clean if audits_clean is None else (audits_clean and clean)
            if reference is None:
                reference = tuples
                basis_size = len(tuples)
                bases_match = True
                saved = (polys, red)
            elif tuples != reference:
                bases_match = False
    if verify and saved is not None:
        polys, red = saved
        verified = verify_groebner(red, polys)
    return RobustnessResult(spec.name, completed, aborted, bases_match, verified,
                            audits_clean, basis_size)
