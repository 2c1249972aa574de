"""CLI entry point for gx."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel
from rich.console import Console
from rich.logging import RichHandler

from . import __version__
from .arf import arf, gauss_sum
from .builtin_complexes import BUILTINS, NamedExample, builtin, verify_appendix
from .cochains import Cochain, Ring
from .cli import renderer
from .complexes import OrderedComplex, barycentric_subdivision, fundamental_cycle
from .config import GxConfig, load_config
from .formats import (
    dump_cochain,
    dump_complex,
    dump_triple,
    parse_cochain,
    parse_form,
    parse_triple,
    read_complex,
    write_text,
)
from .ggroup import (
    FiltrationClass,
    Triple,
    chi,
    commutator,
    evaluate_g1,
    extension_cocycle,
    filtration_class,
    g_equal,
    inverse,
    is_identity,
    kapustin_form,
    kapustin_relation,
    lifts_to_order2,
    lifts_to_order4,
    order,
    power,
    product,
    structure_report,
)
from .laws import run_laws
from .linalg import AbelianGroupPresentation, cohomology
from .models import (
    ArfReport,
    BuiltinReport,
    CohomologyReport,
    EvaluationReport,
    FiltrationEntry,
    GroupPresentation,
    OpResult,
    StructureReportModel,
    SubdivisionReport,
    TripleModel,
)

logger = logging.getLogger(__name__)

OPERATIONS = (
    "product",
    "inverse",
    "power",
    "is-identity",
    "equal",
    "order",
    "commutator",
    "chi",
    "kapustin",
    "extension-cocycle",
    "filtration",
    "lifts-to-order2",
    "lifts-to-order4",
)
# number of input files per operation
_ARITY = {
    "product": 2,
    "inverse": 1,
    "power": 1,
    "is-identity": 1,
    "equal": 2,
    "order": 1,
    "commutator": 2,
    "chi": 2,
    "kapustin": 1,
    "extension-cocycle": 2,
    "filtration": 1,
    "lifts-to-order2": 1,
    "lifts-to-order4": 1,
}


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    text: str = ""
    error: str | None = None


# ---------------------------------------------------------------------------
# Conversions to report models
# ---------------------------------------------------------------------------


def _support(c: Cochain) -> dict[str, str]:
    return {",".join(c.complex.vertices[i] for i in s): c.ring.format(c.values[s]) for s in c.support()}


def _presentation(group: AbelianGroupPresentation) -> GroupPresentation:
    return GroupPresentation(
        text=group.format(), free_rank=group.free_rank, circle_rank=group.circle_rank, torsion=list(group.torsion)
    )


def _triple_model(g: Triple) -> TripleModel:
    return TripleModel(complex=g.complex.name, w=_support(g.w), p=_support(g.p), a=_support(g.a))


def _filtration_entry(entry: FiltrationClass) -> FiltrationEntry:
    return FiltrationEntry(level=entry.level.value, coordinates=[str(c) for c in entry.coordinates])


# ---------------------------------------------------------------------------
# Input resolution
# ---------------------------------------------------------------------------


def _load_complex(spec: str) -> OrderedComplex:
    """A built-in name or an .osc path."""
    if spec in BUILTINS and not Path(spec).exists():
        return builtin(spec).complex
    return read_complex(Path(spec))


def _triple_complex(args: argparse.Namespace, first: Path) -> OrderedComplex:
    if args.complex:
        return _load_complex(args.complex)
    # g.triple -> g.osc, then tss2.c.coc -> tss2.osc
    candidates = [first.with_suffix(".osc"), first.with_name(first.name.split(".", 1)[0] + ".osc")]
    for sibling in candidates:
        if sibling.exists():
            return read_complex(sibling)
    raise ValueError(f"no --complex given and {candidates[0]} does not exist")


def _read_triple(path: Path, complex_: OrderedComplex) -> Triple:
    return parse_triple(path.read_text(encoding="utf-8"), complex_)[1]


def _read_cochain(path: Path, complex_: OrderedComplex) -> Cochain:
    return parse_cochain(path.read_text(encoding="utf-8"), complex_)[1]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _run_cohom(args: argparse.Namespace, config: GxConfig) -> tuple[BaseModel | list[CohomologyReport], str]:
    complex_ = _load_complex(args.file)
    ring = Ring.parse(args.coeff)
    degrees = [args.deg] if args.deg is not None else list(range(complex_.top_dim + 1))
    reports = []
    for k in degrees:
        group = cohomology(complex_, ring, k)
        representatives = [_support(c) for c in group.basis_cocycles] if args.representatives else []
        reports.append(
            CohomologyReport(
                complex=complex_.name,
                coefficients=ring.value,
                degree=k,
                group=_presentation(group),
                representatives=representatives,
            )
        )
    return reports, renderer.capture(lambda c: renderer.render_cohomology(c, reports))


def _run_gstruct(args: argparse.Namespace, config: GxConfig) -> tuple[BaseModel, str]:
    complex_ = _load_complex(args.file)
    report = structure_report(complex_)
    model = StructureReportModel(
        complex=report.complex_name,
        h1=report.h1,
        sh2=report.sh2,
        h3=_presentation(report.h3),
        alpha=[list(row) for row in report.alpha],
        z_table=[[_filtration_entry(e) for e in row] for row in report.z_table],
        group_order=report.group_order,
    )
    return model, renderer.capture(lambda c: renderer.render_structure(c, model))


def _run_op(args: argparse.Namespace, config: GxConfig) -> tuple[BaseModel, str]:
    operation = args.operation
    paths = [Path(p) for p in args.inputs]
    if len(paths) != _ARITY[operation]:
        raise ValueError(f"{operation} takes {_ARITY[operation]} input file(s), got {len(paths)}")
    complex_ = _triple_complex(args, paths[0])
    result = OpResult(operation=operation)
    triple: Triple | None = None

    if operation == "extension-cocycle":
        a, b = (_read_cochain(p, complex_) for p in paths)
        triple = extension_cocycle(a, b)
    elif operation == "lifts-to-order2":
        result.verdict = lifts_to_order2(_read_cochain(paths[0], complex_))
    elif operation == "lifts-to-order4":
        result.verdict = lifts_to_order4(_read_cochain(paths[0], complex_), config.max_sh2_dim)
    elif operation == "chi":
        g = _read_triple(paths[0], complex_)
        triple = chi(_read_cochain(paths[1], complex_), g)
    else:
        triples = [_read_triple(p, complex_) for p in paths]
        g = triples[0]
        if operation == "product":
            triple = product(g, triples[1])
        elif operation == "inverse":
            triple = inverse(g)
        elif operation == "power":
            triple = power(g, args.exponent)
        elif operation == "commutator":
            triple = commutator(g, triples[1])
        elif operation == "kapustin":
            triple = kapustin_form(g)
            result.verdict = kapustin_relation(triple).is_zero()
        elif operation == "is-identity":
            result.verdict = is_identity(g)
        elif operation == "equal":
            result.verdict = g_equal(g, triples[1])
        elif operation == "order":
            bound = args.bound or config.order_bound
            found = order(g, bound)
            result.value = str(found) if found is not None else f"none within {bound}"
        elif operation == "filtration":
            result.filtration = _filtration_entry(filtration_class(g))

    if triple is not None:
        result.triple = _triple_model(triple)
        if args.emit:
            path = write_text(Path(args.emit) / f"{operation}.triple", dump_triple(triple, operation))
            logger.info("Result written to %s", path)
    return result, renderer.capture(lambda c: renderer.render_op(c, result))


def _run_eval(args: argparse.Namespace, config: GxConfig) -> tuple[BaseModel, str]:
    path = Path(args.triple)
    complex_ = _triple_complex(args, path)
    g = _read_triple(path, complex_)
    cycle = fundamental_cycle(complex_)
    t = _read_cochain(Path(args.t), complex_) if args.t else Cochain.zero(complex_, 1, Ring.Z2)
    spin = Fraction(args.spin)
    arf_term = Fraction(args.arf) if args.arf is not None else None
    value = evaluate_g1(g, cycle, t, spin, arf_term)
    report = EvaluationReport(
        complex=complex_.name,
        value=Ring.QZ.format(value),
        spin_term=Ring.QZ.format(spin),
        arf_term=Ring.QZ.format(arf_term) if arf_term is not None else None,
    )
    return report, renderer.capture(lambda c: renderer.render_evaluation(c, report))


def _run_arf(args: argparse.Namespace, config: GxConfig) -> tuple[BaseModel, str]:
    form = parse_form(Path(args.file).read_text(encoding="utf-8"))
    result = arf(form, config.max_arf_dim)
    report = ArfReport(
        name=form.name,
        dimension=form.n,
        radical_dimension=result.radical_dimension,
        gauss_sum=list(gauss_sum(form, config.max_arf_dim).coefficients),
        degenerate=result.degenerate,
        k=result.k,
        value=Ring.QZ.format(result.value) if result.value is not None else None,
    )
    return report, renderer.capture(lambda c: renderer.render_arf(c, report))


def _run_verify(args: argparse.Namespace, config: GxConfig) -> tuple[BaseModel, str, bool]:
    if args.target == "appendix":
        appendix = verify_appendix()
        return appendix, renderer.capture(lambda c: renderer.render_appendix(c, appendix)), appendix.passed
    laws = config.laws
    report = run_laws(
        seed=args.seed if args.seed is not None else laws.seed,
        complexes=args.complexes or laws.complexes,
        trials=args.trials or laws.trials,
        workers=args.workers or laws.workers,
        only=tuple(args.law) if args.law else None,
    )
    return report, renderer.capture(lambda c: renderer.render_laws(c, report)), report.passed


def _run_subdivide(args: argparse.Namespace, config: GxConfig) -> tuple[BaseModel, str]:
    complex_ = _load_complex(args.file)
    subdivided, _ = barycentric_subdivision(complex_)
    emitted = []
    if args.emit:
        stem = Path(args.file).stem
        emitted.append(str(write_text(Path(args.emit) / f"sd_{stem}.osc", dump_complex(subdivided))))
    report = SubdivisionReport(
        source=complex_.name,
        f_vector_before=list(complex_.f_vector),
        f_vector_after=list(subdivided.f_vector),
        emitted=emitted,
    )
    return report, renderer.capture(lambda c: renderer.render_subdivision(c, report))


def _builtin_report(name: str, example: NamedExample, emitted: list[str] | None = None) -> BuiltinReport:
    return BuiltinReport(
        name=name,
        description=example.description,
        f_vector=list(example.complex.f_vector),
        orientable=example.fundamental is not None,
        cochains=sorted(example.named_cochains),
        emitted=emitted or [],
    )


def _run_builtin(args: argparse.Namespace, config: GxConfig) -> tuple[BaseModel | list[BuiltinReport], str]:
    if args.name == "list":
        reports = [_builtin_report(name, builtin(name)) for name in BUILTINS]
        return reports, renderer.capture(lambda c: renderer.render_builtin_list(c, reports))
    example = builtin(args.name)
    emitted = []
    if args.emit:
        directory = Path(args.emit)
        emitted.append(str(write_text(directory / f"{args.name}.osc", dump_complex(example.complex))))
        for key, cochain in sorted(example.named_cochains.items()):
            emitted.append(str(write_text(directory / f"{args.name}.{key}.coc", dump_cochain(cochain, key))))
    report = _builtin_report(args.name, example, emitted)
    return report, renderer.capture(lambda c: renderer.render_builtin(c, report))


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gx", description="gx - exact cochain models of the dual of Spin bordism")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="Path to a YAML config file")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Log progress (-vv for debug)")
    parser.add_argument("--json", action="store_true", help="Print the report as JSON")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # `gx cohom`
    cohom = subparsers.add_parser("cohom", help="Cohomology groups of a complex")
    cohom.add_argument("file", help="An .osc file or a built-in name")
    cohom.add_argument("--coeff", choices=[r.value for r in Ring], default="z", help="Coefficients")
    cohom.add_argument("--deg", type=int, default=None, help="Degree (default: all)")
    cohom.add_argument("--representatives", action="store_true", help="Print generating cocycles")

    # `gx gstruct`
    gstruct = subparsers.add_parser("gstruct", help="Filtration structure of G(X)")
    gstruct.add_argument("file", help="An .osc file or a built-in name")

    # `gx op`
    op = subparsers.add_parser("op", help="Group operations on triples")
    op.add_argument("operation", choices=OPERATIONS)
    op.add_argument("inputs", nargs="+", help="Triple files, or cochain files where the operation takes cochains")
    op.add_argument("--complex", default=None, help="Complex (.osc or built-in); default: <first input>.osc")
    op.add_argument("--exponent", type=int, default=2, help="Exponent for power")
    op.add_argument("--bound", type=int, default=None, help="Search bound for order")
    op.add_argument("--emit", default=None, help="Directory to write the resulting triple")

    # `gx eval`
    evaluate = subparsers.add_parser("eval", help="Evaluate a G^1 element on the fundamental cycle")
    evaluate.add_argument("triple", help="Triple file")
    evaluate.add_argument("--complex", default=None, help="Complex (.osc or built-in); default: <triple>.osc")
    evaluate.add_argument("--t", default=None, help="Cochain file for t (default 0)")
    evaluate.add_argument("--spin", choices=["0", "1/2"], default="0", help="Spin term")
    evaluate.add_argument("--arf", default=None, help="Arf term p/q, required when a != 0")

    # `gx arf`
    arf_parser = subparsers.add_parser("arf", help="Arf invariant of a quadratic form file")
    arf_parser.add_argument("file", help="Form file")

    # `gx verify`
    verify = subparsers.add_parser("verify", help="Run the tss2 check or the randomized law suites")
    verify.add_argument("target", choices=["appendix", "laws"])
    verify.add_argument("--seed", type=int, default=None, help="Base seed for laws")
    verify.add_argument("--complexes", type=int, default=None, help="Number of random complexes")
    verify.add_argument("--trials", type=int, default=None, help="Trials per law per complex")
    verify.add_argument("--workers", type=int, default=None, help="Worker processes")
    verify.add_argument("--law", action="append", default=None, help="Run only this law (repeatable)")

    # `gx subdivide`
    subdivide = subparsers.add_parser("subdivide", help="Barycentric subdivision")
    subdivide.add_argument("file", help="An .osc file or a built-in name")
    subdivide.add_argument("--emit", default=None, help="Directory to write sd_<name>.osc")

    # `gx builtin`
    builtin_parser = subparsers.add_parser("builtin", help="Built-in complexes")
    builtin_parser.add_argument("name", choices=["list", *BUILTINS])
    builtin_parser.add_argument("--emit", default=None, help="Directory to write .osc and .coc files")
    return parser


def _configure_logging(verbose: int, config: GxConfig) -> None:
    level = logging.DEBUG if verbose >= 2 else logging.INFO if verbose == 1 else config.logging_level
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


_COMMANDS = {
    "cohom": _run_cohom,
    "gstruct": _run_gstruct,
    "op": _run_op,
    "eval": _run_eval,
    "arf": _run_arf,
    "subdivide": _run_subdivide,
    "builtin": _run_builtin,
}


def _dump(report: BaseModel | list) -> str:
    if isinstance(report, list):
        return "[\n" + ",\n".join(item.model_dump_json(indent=2) for item in report) + "\n]\n"
    return report.model_dump_json(indent=2) + "\n"


def run(argv: Sequence[str] | None = None) -> CommandOutcome:
    """Parse and execute one command; never raises for input errors."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return CommandOutcome(int(e.code or 0))

    try:
        config = load_config(Path(args.config) if args.config else None)
        _configure_logging(args.verbose, config)
        passed = True
        if args.command == "verify":
            report, text, passed = _run_verify(args, config)
        else:
            report, text = _COMMANDS[args.command](args, config)
    except (ValueError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        return CommandOutcome(2, error=str(e))

    if args.json:
        text = _dump(report)
    return CommandOutcome(0 if passed else 1, text)


def main() -> None:
    outcome = run(sys.argv[1:])
    if outcome.text:
        sys.stdout.write(outcome.text)
    if outcome.error:
        renderer.render_error(outcome.error)
    sys.exit(outcome.exit_code)


if __name__ == "__main__":
    main()
