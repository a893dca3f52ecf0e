"""Assemble the full analysis of a dataset and render it as text, TSV and SVG."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from html import escape
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .exceptions import ScriptometricsError
from .fitting import (
    CalibrationRecord,
    ExpectedConvention,
    FitResult,
    calibrate_convention,
    fit_hyper_poisson,
    fit_poisson,
)
from .frequency import FrequencyTable, RunTestResult, histogram, run_test
from .model import (
    DEFAULT_WEIGHTS,
    ConsistencyReport,
    WeightScheme,
    complexity,
    component_count,
    connection_count,
    get_weight_scheme,
)
from .notation import Context, Dataset, dataset_consistency_report, format_expression

__all__ = [
    "fmt",
    "complexity_values",
    "ReportBundle",
    "build_report",
    "render_runtest",
    "render_fit",
    "render_calibration",
    "render_discrepancies",
    "histogram_tsv",
    "read_histogram_tsv",
    "svg_bar_chart",
    "write_report",
]

DEFAULT_PRECISION = 2


def fmt(x: float, precision: int = DEFAULT_PRECISION) -> str:
    """Round half-to-even on the shortest decimal representation of ``x``."""
    if x != x or x in (float("inf"), float("-inf")):
        return str(x)
    q = Decimal(1).scaleb(-precision) if precision > 0 else Decimal(1)
    return str(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_EVEN))


def complexity_values(dataset: Dataset, column: str = "stated", weights=DEFAULT_WEIGHTS) -> List[int]:
    """Complexity per glyph from the stated column or recomputed from counts."""
    if column == "stated":
        missing = [r.id for r in dataset if r.stated_complexity is None]
        if missing:
            raise ScriptometricsError(f"no stated complexity for rows {missing[:10]}")
        return [r.stated_complexity for r in dataset]
    if column == "computed":
        w = get_weight_scheme(weights)
        return [complexity(r, w) for r in dataset]
    raise ValueError(f"column must be 'stated' or 'computed', got {column!r}")


@dataclass
class ReportBundle:
    dataset: Dataset
    column: str
    weights: WeightScheme
    discrepancies: Optional[List[ConsistencyReport]]
    complexity_hist: FrequencyTable
    components_hist: FrequencyTable
    connections_hist: FrequencyTable
    runtest: Optional[RunTestResult] = None
    calibration: Optional[CalibrationRecord] = None
    fits: Dict[str, FitResult] = field(default_factory=dict)
    skipped: Dict[str, str] = field(default_factory=dict)


def build_report(
    dataset: Dataset,
    column: str = "stated",
    weights=DEFAULT_WEIGHTS,
    tie_policy: str = "error",
    convention="auto",
) -> ReportBundle:
    """Run every analysis; a section that cannot run is recorded in ``skipped``."""
    w = get_weight_scheme(weights)
    skipped: Dict[str, str] = {}
    if all(r.stated_complexity is not None for r in dataset):
        discrepancies = dataset_consistency_report(dataset, w)
    else:
        discrepancies = None
        skipped["consistency"] = "dataset has rows without a stated complexity"
    if column == "stated" and discrepancies is None:
        column = "computed"
    bundle = ReportBundle(
        dataset=dataset,
        column=column,
        weights=w,
        discrepancies=discrepancies,
        complexity_hist=histogram(complexity_values(dataset, column, w)),
        components_hist=histogram(component_count(r) for r in dataset),
        connections_hist=histogram(connection_count(r) for r in dataset),
        skipped=skipped,
    )
    try:
        bundle.runtest = run_test(bundle.complexity_hist, tie_policy=tie_policy)
    except ScriptometricsError as exc:
        skipped["runtest"] = str(exc)

    if convention == "auto":
        bundle.calibration = calibrate_convention(bundle.components_hist, bundle.connections_hist)
        conv = bundle.calibration.selected
    else:
        conv = ExpectedConvention(convention)
        skipped["calibration"] = f"convention fixed to {conv.value}"
    for key, fitter, table in (
        ("poisson/components", fit_poisson, bundle.components_hist),
        ("hyper-poisson/connections", fit_hyper_poisson, bundle.connections_hist),
    ):
        try:
            bundle.fits[key] = fitter(table, convention=conv)
        except ScriptometricsError as exc:
            skipped[key] = str(exc)
    return bundle


def render_runtest(r: RunTestResult, precision: int = DEFAULT_PRECISION) -> str:
    e = r.expected
    lines = [
        f"I = {r.inventory}",
        f"R = {r.range}",
        f"E = {e.numerator}/{e.denominator} ≈ {fmt(float(e), precision)}",
        f"n = {r.n}",
        f"n1 = {r.n1}",
        f"n2 = {r.n2}",
        f"r = {r.runs}",
        f"E(r) = {fmt(r.expected_runs, precision)}",
        f"sigma_r = {fmt(r.sigma_r, precision)}",
    ]
    if r.excluded:
        lines.append("excluded (tied) = " + ",".join(map(str, r.excluded)))
    lines.append(f"z = {fmt(r.z, precision)} {r.decision}")
    return "\n".join(lines) + "\n"


def _param_lines(fit: FitResult, precision: int) -> List[str]:
    p = fit.params
    if fit.model == "poisson":
        return [f"lambda = {fmt(p.lam, precision)}", f"shift = {p.shift}"]
    return [f"a = {fmt(p.a, precision)}", f"b = {fmt(p.b, precision)}"]


def render_fit(fit: FitResult, precision: int = DEFAULT_PRECISION) -> str:
    lines = [f"model: {fit.model}", f"convention: {fit.convention.value}"]
    lines += _param_lines(fit, precision)
    lines.append("x\tobserved\texpected")
    for (x, f), e in zip(fit.observed.items(), fit.expected):
        lines.append(f"{x}\t{f}\t{fmt(e, precision)}")
    lines += [
        f"chi2 = {fmt(fit.chi2, precision)}",
        f"DF = {fit.df}",
        f"P = {fmt(fit.p_value, precision)}",
    ]
    lines += [f"note: {n}" for n in fit.notes]
    return "\n".join(lines) + "\n"


def render_calibration(cal: CalibrationRecord, precision: int = DEFAULT_PRECISION) -> str:
    t_comp, t_conn = cal.targets
    lines = [f"calibration targets: chi2 = {fmt(t_comp, precision)} (components), {fmt(t_conn, precision)} (connections)"]
    lines.append("convention\tcomponents_chi2\tconnections_chi2\tdeviation")
    for conv, (c1, c2) in cal.chi2.items():
        lines.append(f"{conv.value}\t{fmt(c1, precision)}\t{fmt(c2, precision)}\t{fmt(cal.deviation[conv], precision)}")
    lines.append(f"selected: {cal.selected.value}")
    if cal.tied:
        lines.append("tied: " + ",".join(c.value for c in cal.tied))
    lines.append(f"calibration: {'pass' if cal.passed else 'fail'} (tolerance {cal.tolerance})")
    return "\n".join(lines) + "\n"


def render_discrepancies(reports: Sequence[ConsistencyReport]) -> str:
    lines = ["id\ttranslit\tstated\tcomputed"]
    lines += [f"{r.id}\t{r.transliteration}\t{r.stated}\t{r.computed}" for r in reports]
    return "\n".join(lines) + "\n"


def histogram_tsv(t: FrequencyTable, value_label: str = "value", count_label: str = "frequency") -> str:
    lines = [f"{value_label}\t{count_label}"]
    lines += [f"{x}\t{f}" for x, f in t.items()]
    return "\n".join(lines) + "\n"


def read_histogram_tsv(source) -> FrequencyTable:
    text = source.read() if hasattr(source, "read") else Path(source).read_text(encoding="utf-8")
    rows = [ln.split("\t") for ln in text.splitlines() if ln.strip()]
    values = [int(x) for x, _ in rows[1:]]
    counts = [int(f) for _, f in rows[1:]]
    if values != list(range(values[0], values[0] + len(values))):
        raise ValueError("histogram rows must cover a contiguous support")
    return FrequencyTable(values[0], counts)


def svg_bar_chart(
    t: FrequencyTable,
    title: str = "",
    x_label: str = "",
    y_label: str = "frequency",
    bar_width: int = 14,
    gap: int = 2,
    plot_height: int = 240,
) -> str:
    """Vertical bar chart, one bar per support value, linear height scale."""
    left, right, top, bottom = 48, 16, 36, 44
    n = len(t)
    plot_width = n * (bar_width + gap) - gap
    width = left + plot_width + right
    height = top + plot_height + bottom
    peak = max(t.counts)
    scale = plot_height / peak
    base = top + plot_height

    out = io.StringIO()
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">\n'
    )
    out.write(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>\n')
    if title:
        out.write(f'<text x="{width / 2:g}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>\n')
    step = max(1, round(peak / 5))
    for tick in range(0, peak + 1, step):
        y = base - tick * scale
        out.write(f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left + plot_width}" y2="{y:.2f}" stroke="#dddddd"/>\n')
        out.write(f'<text x="{left - 6}" y="{y + 3:.2f}" text-anchor="end">{tick}</text>\n')
    for i, (x, f) in enumerate(t.items()):
        bx = left + i * (bar_width + gap)
        h = f * scale
        out.write(
            f'<rect class="bar" data-value="{x}" data-count="{f}" x="{bx}" y="{base - h:.2f}" '
            f'width="{bar_width}" height="{h:.2f}" fill="#4a6fa5"/>\n'
        )
        if (x - t.support_min) % 5 == 0 or i == n - 1:
            out.write(f'<text x="{bx + bar_width / 2:g}" y="{base + 14}" text-anchor="middle">{x}</text>\n')
    out.write(f'<line x1="{left}" y1="{base}" x2="{left + plot_width}" y2="{base}" stroke="#000000"/>\n')
    if x_label:
        out.write(f'<text x="{left + plot_width / 2:g}" y="{height - 8}" text-anchor="middle">{escape(x_label)}</text>\n')
    if y_label:
        out.write(
            f'<text x="12" y="{top + plot_height / 2:g}" text-anchor="middle" '
            f'transform="rotate(-90 12 {top + plot_height / 2:g})">{escape(y_label)}</text>\n'
        )
    out.write("</svg>\n")
    return out.getvalue()


def _table1_tsv(bundle: ReportBundle) -> str:
    lines = ["id\ttranslit\tcomponents\tconnections\tstated\tcomputed"]
    for r in bundle.dataset:
        stated = "" if r.stated_complexity is None else str(r.stated_complexity)
        lines.append(
            "\t".join(
                [
                    str(r.id),
                    r.transliteration,
                    format_expression(r.components, Context.COMPONENTS),
                    format_expression(r.connections, Context.CONNECTIONS),
                    stated,
                    str(complexity(r, bundle.weights)),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _runtest_tsv(r: RunTestResult) -> str:
    rows = [
        ("I", r.inventory),
        ("R", r.range),
        ("E", f"{r.expected.numerator}/{r.expected.denominator}"),
        ("n", r.n),
        ("n1", r.n1),
        ("n2", r.n2),
        ("r", r.runs),
        ("E_r", repr(r.expected_runs)),
        ("sigma_r", repr(r.sigma_r)),
        ("z", repr(r.z)),
        ("decision", r.decision),
    ]
    return "key\tvalue\n" + "".join(f"{k}\t{v}\n" for k, v in rows)


def _fits_tsv(fits: Dict[str, FitResult]) -> str:
    lines = ["fit\tconvention\tparams\tchi2\tdf\tp_value"]
    for key, fit in fits.items():
        p = fit.params
        params = f"lambda={p.lam!r};shift={p.shift}" if fit.model == "poisson" else f"a={p.a!r};b={p.b!r}"
        lines.append(f"{key}\t{fit.convention.value}\t{params}\t{fit.chi2!r}\t{fit.df}\t{fit.p_value!r}")
    return "\n".join(lines) + "\n"


def _calibration_tsv(cal: CalibrationRecord) -> str:
    lines = ["convention\tcomponents_chi2\tconnections_chi2\tdeviation\tselected"]
    for conv, (c1, c2) in cal.chi2.items():
        lines.append(f"{conv.value}\t{c1!r}\t{c2!r}\t{cal.deviation[conv]!r}\t{int(conv is cal.selected)}")
    return "\n".join(lines) + "\n"


def render_text(bundle: ReportBundle, precision: int = DEFAULT_PRECISION) -> str:
    d = bundle.dataset
    parts = [f"dataset: {d.name} ({len(d)} glyphs)", f"complexity column: {bundle.column}",
             f"weights: {bundle.weights.name}", ""]
    if bundle.discrepancies is not None:
        parts.append(f"consistency: {len(d) - len(bundle.discrepancies)}/{len(d)} rows consistent")
        parts.append(render_discrepancies(bundle.discrepancies))
    parts.append("complexity histogram")
    parts.append(histogram_tsv(bundle.complexity_hist, "C", "f_c"))
    parts.append("runs test")
    parts.append(render_runtest(bundle.runtest, precision) if bundle.runtest else "skipped\n")
    parts.append("component counts")
    parts.append(histogram_tsv(bundle.components_hist, "x", "f"))
    parts.append("connection counts")
    parts.append(histogram_tsv(bundle.connections_hist, "x", "f"))
    if bundle.calibration is not None:
        parts.append(render_calibration(bundle.calibration, precision))
    for key, fit in bundle.fits.items():
        parts.append(f"fit {key}")
        parts.append(render_fit(fit, precision))
    for key, reason in bundle.skipped.items():
        parts.append(f"skipped {key}: {reason}")
    return "\n".join(parts).rstrip("\n") + "\n"


def write_report(bundle: ReportBundle, out_dir, formats: Sequence[str] = ("text", "tsv", "svg"),
                 precision: int = DEFAULT_PRECISION) -> List[Path]:
    """Write the requested renditions into ``out_dir``; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: List[Tuple[str, str]] = []
    if "text" in formats:
        files.append(("report.txt", render_text(bundle, precision)))
    if "tsv" in formats:
        files.append(("table1.tsv", _table1_tsv(bundle)))
        if bundle.discrepancies is not None:
            files.append(("discrepancies.tsv", render_discrepancies(bundle.discrepancies)))
        files.append(("complexity_hist.tsv", histogram_tsv(bundle.complexity_hist, "C", "f_c")))
        files.append(("components_hist.tsv", histogram_tsv(bundle.components_hist, "x", "f")))
        files.append(("connections_hist.tsv", histogram_tsv(bundle.connections_hist, "x", "f")))
        if bundle.runtest is not None:
            files.append(("runtest.tsv", _runtest_tsv(bundle.runtest)))
        files.append(("fits.tsv", _fits_tsv(bundle.fits)))
        if bundle.calibration is not None:
            files.append(("calibration.tsv", _calibration_tsv(bundle.calibration)))
    if "svg" in formats:
        chart = svg_bar_chart(
            bundle.complexity_hist,
            title=f"Distribution of complexities ({bundle.dataset.name})",
            x_label="complexity",
        )
        files.append(("complexity_hist.svg", chart))
    paths = []
    for name, content in files:
        path = out / name
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        paths.append(path)
    return paths
