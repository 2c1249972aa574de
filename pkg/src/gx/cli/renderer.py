"""Rich-based rendering of command reports.

Reports are rendered into a recording console so the same text can be returned by ``run`` and
printed by ``main``; output is plain (no color, no markup) and fixed-width for reproducibility.
"""

from __future__ import annotations

import io
from collections.abc import Callable, Sequence

from rich import box
from rich.console import Console
from rich.table import Table

from ..models import (
    AppendixReport,
    ArfReport,
    BuiltinReport,
    CohomologyReport,
    EvaluationReport,
    GroupPresentation,
    LawsReport,
    OpResult,
    StructureReportModel,
    SubdivisionReport,
    TripleModel,
)

WIDTH = 100

error_console = Console(stderr=True, highlight=False, markup=False)


def make_console() -> Console:
    return Console(
        file=io.StringIO(), width=WIDTH, highlight=False, markup=False, color_system=None, soft_wrap=True
    )


def capture(render: Callable[[Console], None]) -> str:
    console = make_console()
    render(console)
    file = console.file
    assert isinstance(file, io.StringIO)
    return file.getvalue()


def render_error(message: str) -> None:
    error_console.print(f"error: {message}")


def _table(title: str, *columns: str) -> Table:
    table = Table(title=title, box=box.SIMPLE, show_header=True, title_justify="left")
    for column in columns:
        table.add_column(column)
    return table


def format_presentation(group: GroupPresentation) -> str:
    if group.circle_rank:
        return f"{group.text}  (rational model of (R/Z)^{group.circle_rank})"
    return group.text


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------


def render_cohomology(console: Console, reports: Sequence[CohomologyReport]) -> None:
    for report in reports:
        heading = f"H^{report.degree}({report.complex}; {report.coefficients})"
        console.print(f"{heading} = {format_presentation(report.group)}")
        for i, representative in enumerate(report.representatives):
            support = ", ".join(f"{k}={v}" for k, v in representative.items()) or "0"
            console.print(f"  generator {i}: {support}")


def render_structure(console: Console, report: StructureReportModel) -> None:
    console.print(f"G({report.complex})")
    console.print(f"  H^1(Z/2): dimension {report.h1}")
    console.print(f"  SH^2:     dimension {report.sh2}")
    console.print(f"  H^3(Q/Z): {format_presentation(report.h3)}")
    if report.alpha and any(report.alpha):
        console.print("  alpha: " + "; ".join(" ".join(str(x) for x in row) for row in report.alpha))
    if report.z_table:
        table = _table("extension classes z(a_i, a_j)", "i", "j", "level", "coordinates")
        for i, row in enumerate(report.z_table):
            for j, entry in enumerate(row):
                table.add_row(str(i), str(j), entry.level, " ".join(entry.coordinates))
        console.print(table)
    order = "infinite" if report.group_order is None else str(report.group_order)
    console.print(f"  |G| = {order}")


# ---------------------------------------------------------------------------
# Triples and operations
# ---------------------------------------------------------------------------


def render_triple(console: Console, triple: TripleModel) -> None:
    for key in ("w", "p", "a"):
        values: dict[str, str] = getattr(triple, key)
        support = ", ".join(f"<{k}>={v}" for k, v in values.items()) or "0"
        console.print(f"  {key}: {support}")


def render_op(console: Console, result: OpResult) -> None:
    if result.verdict is not None:
        console.print(f"{result.operation}: {'true' if result.verdict else 'false'}")
    if result.value is not None:
        console.print(f"{result.operation} = {result.value}")
    if result.filtration is not None:
        console.print(f"level {result.filtration.level}: {' '.join(result.filtration.coordinates) or '-'}")
    if result.triple is not None:
        console.print(f"{result.operation} on {result.triple.complex}:")
        render_triple(console, result.triple)
    if result.cochain is not None:
        console.print(", ".join(f"<{k}>={v}" for k, v in result.cochain.items()) or "0")


def render_evaluation(console: Console, report: EvaluationReport) -> None:
    console.print(f"spin term = {report.spin_term}")
    if report.arf_term is not None:
        console.print(f"arf term = {report.arf_term}")
    console.print(f"value = {report.value}")


def render_arf(console: Console, report: ArfReport) -> None:
    console.print(f"form {report.name}: dimension {report.dimension}, radical {report.radical_dimension}")
    c0, c1, c2, c3 = report.gauss_sum
    console.print(f"Gauss sum = {c0} + {c1} z + {c2} z^2 + {c3} z^3  (z = exp(2 pi i / 8))")
    if report.degenerate:
        console.print("arf = degenerate")
    else:
        console.print(f"arf = {report.k} (mod 8) = {report.value}")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def render_appendix(console: Console, report: AppendixReport) -> None:
    table = _table("tss2 cochain identities", "step", "result", "detail")
    for step in report.steps:
        detail = step.detail
        if step.counterexamples:
            detail = f"{detail} at {', '.join(step.counterexamples)}".strip()
        table.add_row(step.name, "ok" if step.passed else "FAILED", detail)
    console.print(table)
    console.print(f"evaluation = {report.evaluation}")


def render_laws(console: Console, report: LawsReport) -> None:
    title = f"laws: seed {report.seed}, {report.complexes} complexes x {report.trials} trials"
    table = _table(title, "law", "trials", "failures", "first counterexample")
    for law in report.laws:
        table.add_row(law.name, str(law.trials), str(law.failures), law.counterexample or "")
    console.print(table)
    console.print("all laws hold" if report.passed else "some laws FAILED")


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------


def _f_vector(values: Sequence[int]) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def render_subdivision(console: Console, report: SubdivisionReport) -> None:
    before, after = _f_vector(report.f_vector_before), _f_vector(report.f_vector_after)
    console.print(f"{report.source}: f-vector {before} -> {after}")
    for path in report.emitted:
        console.print(f"wrote {path}")


def render_builtin(console: Console, report: BuiltinReport) -> None:
    orientation = "orientable" if report.orientable else "no fundamental cycle"
    console.print(f"{report.name}: {report.description}")
    console.print(f"  f-vector {_f_vector(report.f_vector)}, {orientation}")
    if report.cochains:
        console.print(f"  named cochains: {', '.join(report.cochains)}")
    for path in report.emitted:
        console.print(f"wrote {path}")


def render_builtin_list(console: Console, reports: Sequence[BuiltinReport]) -> None:
    table = _table("built-in complexes", "name", "description", "f-vector")
    for report in reports:
        table.add_row(report.name, report.description, _f_vector(report.f_vector))
    console.print(table)
