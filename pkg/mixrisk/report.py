"""Human-readable tables and deterministic CSV for solved scenarios."""

import csv
import io
import logging
import os
import tempfile
from typing import Iterable, List, Optional, Sequence, Tuple

from rich import box
from rich.console import Console
from rich.table import Table

from mixrisk.errors import MixRiskError
from mixrisk.indicators import IndicatorKind, Sign, Situation
from mixrisk.scenario_file import ReportKind, ScenarioFile
from mixrisk.solver import (
    ModelComparison,
    PrecautionaryReport,
    compare_with_probabilistic,
    precautionary_report,
)
from mixrisk.verification import ScalingStudy, ThresholdReport, threshold_parameters

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "model",
    "situation",
    "s_opt",
    "indicator_kind",
    "indicator_value",
    "predicate_value",
    "taylor_gap",
    "agreement",
)
SITUATION_ORDER = tuple(Situation)
INDICATOR_ORDER = tuple(IndicatorKind)
TABLE_WIDTH = 120

_PREDICATE_LABELS = {Sign.POSITIVE: "PASS", Sign.NEGATIVE: "FAIL", Sign.ZERO: "ZERO"}


def _number(value: float) -> str:
    return f"{value:.11e}"


def _flag(value: Optional[bool]) -> str:
    if value is None:
        return "n/a"
    return "true" if value else "false"


def _cell(value: float, sign: Sign) -> str:
    if sign is Sign.ZERO:
        return "0 (tol)"
    return f"{value:+.6e}"


def _render(*tables: Table) -> str:
    buffer = io.StringIO()
    console = Console(
        file=buffer, width=TABLE_WIDTH, color_system=None, force_terminal=False, no_color=True
    )
    for table in tables:
        console.print(table)
    return buffer.getvalue()


def _table(title: str) -> Table:
    return Table(title=title, box=box.ASCII, show_header=True, padding=(0, 1), expand=False)


def render_table(report: PrecautionaryReport, threshold: bool = False) -> str:
    """
    Render the solved situations and the indicators as aligned text tables.

    Args:
        report: Output of :func:`precautionary_report`
        threshold: Annotate the two_source predicate as the c + d threshold test

    Returns:
        Plain text, no colour codes
    """
    situations = _table(f"{report.model.value}: optimal saving")
    situations.add_column("situation", width=16)
    situations.add_column("s_opt", justify="right")
    situations.add_column("V''(s_opt)", justify="right")
    situations.add_column("|V'(s_opt)|", justify="right")
    situations.add_column("iterations", justify="right")
    for solution in sorted(report.solutions, key=lambda s: SITUATION_ORDER.index(s.situation)):
        situations.add_row(
            solution.situation.value,
            f"{solution.s_opt:.12g}",
            f"{solution.second_derivative:.6e}",
            f"{abs(solution.foc_residual):.3e}",
            str(solution.iterations),
        )

    indicators = _table(
        f"indicators at y={report.evaluation_point[0]:.6g}, x={report.evaluation_point[1]:.6g}"
    )
    indicators.add_column("indicator", width=16)
    indicators.add_column("value", justify="right")
    indicators.add_column("predicate", justify="right")
    indicators.add_column("sign test")
    indicators.add_column("taylor gap", justify="right")
    indicators.add_column("agreement")
    for item in report.indicators:
        label = _PREDICATE_LABELS[item.predicate_sign]
        if threshold and item.kind is IndicatorKind.TWO_SOURCE:
            label += " (c+d threshold)"
        indicators.add_row(
            item.kind.value,
            _cell(item.value, item.sign),
            f"{item.predicate:+.6e}",
            label,
            f"{item.taylor_gap:+.6e}",
            _flag(item.agreement),
        )
    return _render(situations, indicators)


def render_comparison(comparison: ModelComparison) -> str:
    """Mixed versus probabilistic indicators and the ratio of their Taylor gaps."""
    table = _table(f"{comparison.mixed.model.value} versus probabilistic")
    table.add_column("indicator", width=16)
    table.add_column("mixed", justify="right")
    table.add_column("probabilistic", justify="right")
    table.add_column("mixed gap", justify="right")
    table.add_column("probabilistic gap", justify="right")
    table.add_column("gap ratio", justify="right")
    for item in comparison.probabilistic.indicators:
        mixed = comparison.mixed.indicator(item.kind)
        ratio = comparison.gap_ratio(item.kind)
        table.add_row(
            item.kind.value,
            _cell(mixed.value, mixed.sign),
            _cell(item.value, item.sign),
            f"{mixed.taylor_gap:+.6e}",
            f"{item.taylor_gap:+.6e}",
            "n/a" if ratio is None else f"{ratio:.6g}",
        )
    return _render(table)


def render_scaling_study(study: ScalingStudy) -> str:
    table = _table(f"{study.model.value}: Taylor error against risk scale")
    table.add_column("indicator", width=16)
    table.add_column("epsilon", justify="right")
    table.add_column("s*", justify="right")
    table.add_column("exact", justify="right")
    table.add_column("predicted", justify="right")
    table.add_column("error", justify="right")
    table.add_column("order", justify="right")
    for kind in study.kinds():
        rows = [row for row in study.rows if row.kind is kind]
        if not rows:
            continue
        orders: List[Optional[float]] = [None, *study.orders(kind)]
        for row, order in zip(rows, orders):
            table.add_row(
                kind.value,
                f"{row.epsilon:g}",
                f"{row.s_star:.10g}",
                f"{row.exact:+.6e}",
                f"{row.approximation:+.6e}",
                f"{row.absolute_error:.3e}",
                "-" if order is None else f"{order:.3f}",
            )
    return _render(table)


def render_threshold(threshold: ThresholdReport) -> str:
    table = _table(
        f"CARA-CRRA threshold: alpha={threshold.alpha:g}, gamma={threshold.gamma:g}, "
        f"[c, d]=[{threshold.c:g}, {threshold.d:g}]"
    )
    table.add_column("quantity", width=28)
    table.add_column("value", justify="right")
    table.add_row("Var(f, A)", f"{threshold.var_fuzzy:.6e}")
    table.add_row("Var(X)", f"{threshold.var_random:.6e}")
    table.add_row("alpha^2 / (gamma (1-gamma))", f"{threshold.lhs:.10g}")
    table.add_row("4 / (3 (c+d)^2)", f"{threshold.rhs:.10g}")
    table.add_row("1 / (3 xbar^2)", f"{threshold.midpoint_rhs:.10g}")
    table.add_row("threshold on c + d", f"{threshold.threshold_sum:.10g}")
    table.add_row("two_source predicate", f"{threshold.combination:+.6e}")
    table.add_row("predicate sign", _PREDICATE_LABELS[threshold.predicate_sign])
    solved = threshold.solved_two_source
    table.add_row("solved two_source", "n/a" if solved is None else f"{solved:+.6e}")
    table.add_row("agreement", _flag(threshold.agreement))
    return _render(table)


def csv_rows(report: PrecautionaryReport) -> List[Tuple[str, ...]]:
    """One row per (solved situation, reported indicator) in canonical order."""
    solutions = sorted(report.solutions, key=lambda s: SITUATION_ORDER.index(s.situation))
    indicators = sorted(report.indicators, key=lambda i: INDICATOR_ORDER.index(i.kind))
    return [
        (
            report.model.value,
            solution.situation.value,
            _number(solution.s_opt),
            item.kind.value,
            _number(item.value),
            _number(item.predicate),
            _number(item.taylor_gap),
            _flag(item.agreement),
        )
        for solution in solutions
        for item in indicators
    ]


def format_csv(reports: Iterable[PrecautionaryReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for report in reports:
        writer.writerows(csv_rows(report))
    return buffer.getvalue()


def emit_csv(report: PrecautionaryReport, path: str) -> None:
    """
    Write the report as UTF-8 CSV with LF line endings.

    The file is written to a temporary sibling and renamed into place, so
    readers never observe a partial file.

    Raises:
        OSError: If the directory is not writable
    """
    write_atomic(path, format_csv([report]))


def _current_umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary file in the same directory, with the mode open() would give."""
    directory = os.path.dirname(os.path.abspath(path))
    handle, temporary = tempfile.mkstemp(prefix=".mixrisk-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
            stream.write(text)
        os.chmod(temporary, 0o666 & ~_current_umask())
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise
    logger.debug("wrote %s", path)


def run_report(
    scenario_file: ScenarioFile,
    reports: Optional[Sequence[ReportKind]] = None,
    csv_path: Optional[str] = None,
) -> Tuple[str, int]:
    """
    Solve a parsed scenario and render the requested outputs.

    Args:
        scenario_file: Parsed scenario document
        reports: Report kinds (default: the document's ``outputs.reports``)
        csv_path: CSV destination (default: ``outputs.csv_path``); without one the
            CSV is appended to the returned text

    Returns:
        (rendered text, exit code); a failure yields its error's exit code and a
        message naming the failing stage
    """
    reports = tuple(reports or scenario_file.outputs.reports)
    csv_path = csv_path or scenario_file.outputs.csv_path
    scenario = scenario_file.scenario
    parts: List[str] = []
    stage = "solve"
    try:
        report = precautionary_report(scenario)
        if ReportKind.TABLE in reports:
            parts.append(render_table(report, threshold=threshold_parameters(scenario) is not None))
        if ReportKind.CSV in reports:
            stage = "csv"
            if csv_path:
                emit_csv(report, csv_path)
            else:
                parts.append(format_csv([report]))
        if ReportKind.COMPARISON in reports:
            stage = "comparison"
            parts.append(render_comparison(compare_with_probabilistic(scenario)))
    except MixRiskError as exc:
        logger.debug("stage %s failed", stage, exc_info=True)
        return f"error [{exc.category}] {stage}: {exc}\n", exc.exit_code
    except OSError as exc:
        return f"error [io] {stage}: {exc}\n", 1
    return "".join(parts), 0
