"""Line-based text formats: .osc complexes, .coc cochains, .triple files and quadratic form files.

All formats are UTF-8, one record per line, with ``#`` starting a comment. Simplices are written as
comma-separated vertex ids, optionally wrapped in ``<>`` or ``()``.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .arf import QuadraticForm
from .cochains import Cochain, Ring, Value
from .complexes import ComplexError, OrderedComplex, SignedChain, Simplex
from .ggroup import Triple

logger = logging.getLogger(__name__)

_CYCLE_TERM = re.compile(r"^([+\-−])[<(]?([^<>()]+)[>)]?$")
TRIPLE_SECTIONS = {"w": (3, Ring.QZ), "p": (2, Ring.Z2), "a": (1, Ring.Z2)}


class FormatError(ValueError):
    """A malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ComplexFormatError(FormatError):
    pass


def _records(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _split_ids(token: str) -> list[str]:
    inner = token.strip().strip("<>()")
    ids = [part.strip() for part in inner.split(",")]
    if not inner or any(not part for part in ids):
        raise ValueError(f"malformed simplex {token!r}")
    return ids


def _format_simplex(complex_: OrderedComplex, simplex: Simplex) -> str:
    return ",".join(complex_.vertices[i] for i in simplex)


# -- complexes --------------------------------------------------------------------------------------


def parse_complex(text: str, name: str = "complex") -> OrderedComplex:
    """Parse .osc text: ``complex``, ``vertex``, ``simplex`` and ``cycle`` records.

    Vertex order is listing order; faces of listed simplices are added.
    """
    vertices: list[str] = []
    position: dict[str, int] = {}
    simplices: list[Simplex] = []
    cycle_terms: list[tuple[int, list[str], int]] = []

    for number, line in _records(text):
        keyword, _, rest = line.partition(" ")
        args = rest.split()
        if keyword == "complex":
            if len(args) != 1:
                raise ComplexFormatError("expected 'complex <name>'", number)
            name = args[0]
        elif keyword == "vertex":
            if len(args) != 1 or "," in args[0]:
                raise ComplexFormatError("expected 'vertex <id>'", number)
            if args[0] in position:
                raise ComplexFormatError(f"duplicate vertex {args[0]!r}", number)
            position[args[0]] = len(vertices)
            vertices.append(args[0])
        elif keyword == "simplex":
            if not args:
                raise ComplexFormatError("simplex needs at least one vertex", number)
            simplices.append(_indices(args, position, number))
        elif keyword == "cycle":
            for token in args:
                match = _CYCLE_TERM.match(token)
                if match is None:
                    raise ComplexFormatError(f"malformed cycle term {token!r}", number)
                sign = 1 if match.group(1) == "+" else -1
                try:
                    ids = _split_ids(match.group(2))
                except ValueError as e:
                    raise ComplexFormatError(str(e), number) from None
                cycle_terms.append((number, ids, sign))
        else:
            raise ComplexFormatError(f"unknown record {keyword!r}", number)

    try:
        complex_ = OrderedComplex.from_simplices(name, vertices, simplices)
    except ComplexError as e:
        raise ComplexFormatError(str(e)) from None
    if cycle_terms:
        complex_ = complex_.with_cycle(_cycle(complex_, position, cycle_terms))
    logger.debug("Parsed complex %s with f-vector %s", name, complex_.f_vector)
    return complex_


def _indices(ids: list[str], position: dict[str, int], number: int) -> Simplex:
    try:
        simplex = tuple(position[v] for v in ids)
    except KeyError as e:
        raise ComplexFormatError(f"simplex references unknown vertex {e.args[0]!r}", number) from None
    if any(b <= a for a, b in zip(simplex, simplex[1:])):
        raise ComplexFormatError(f"non-increasing tuple ({' '.join(ids)})", number)
    return simplex


def _cycle(
    complex_: OrderedComplex, position: dict[str, int], terms: list[tuple[int, list[str], int]]
) -> SignedChain:
    coefficients: dict[Simplex, int] = {}
    degree = len(terms[0][1]) - 1
    for number, ids, sign in terms:
        simplex = _indices(ids, position, number)
        if len(simplex) - 1 != degree:
            raise ComplexFormatError(f"cycle term has degree {len(simplex) - 1}, expected {degree}", number)
        if not complex_.contains(simplex):
            raise ComplexFormatError(f"cycle term ({','.join(ids)}) is not a simplex", number)
        coefficients[simplex] = coefficients.get(simplex, 0) + sign
    return SignedChain.from_mapping(degree, coefficients)


def _maximal_simplices(complex_: OrderedComplex) -> list[Simplex]:
    top = complex_.top_dim
    out = list(complex_.simplices_of(top))
    for k in range(top):
        out += [s for i, s in enumerate(complex_.simplices[k]) if not complex_.cofaces[k][i]]
    return sorted(out)


def dump_complex(complex_: OrderedComplex) -> str:
    """.osc text listing the maximal simplices; parse_complex of the output gives back the complex."""
    lines = [f"complex {complex_.name}"]
    lines += [f"vertex {v}" for v in complex_.vertices]
    lines += ["simplex " + " ".join(complex_.vertices[i] for i in s) for s in _maximal_simplices(complex_)]
    if complex_.cycle is not None:
        terms = []
        for simplex, coefficient in complex_.cycle.terms:
            if abs(coefficient) != 1:
                raise FormatError(f"cycle coefficient {coefficient} cannot be written; only +-1 are supported")
            sign = "+" if coefficient > 0 else "-"
            terms.append(f"{sign}({_format_simplex(complex_, simplex)})")
        lines.append("cycle " + " ".join(terms))
    return "\n".join(lines) + "\n"


# -- cochains ---------------------------------------------------------------------------------------


@dataclass
class _Section:
    name: str
    degree: int
    ring: Ring
    line: int
    body: list[tuple[int, str]] = field(default_factory=list)


def _cochain_header(args: list[str], number: int) -> _Section:
    # cochain <name> deg <k> coeff <ring>
    if len(args) != 5 or args[1] != "deg" or args[3] != "coeff":
        raise FormatError("expected 'cochain <name> deg <k> coeff <z|z2|z4|qz>'", number)
    try:
        degree = int(args[2])
        ring = Ring.parse(args[4])
    except ValueError as e:
        raise FormatError(str(e), number) from None
    return _Section(args[0], degree, ring, number)


def _parse_value(ring: Ring, token: str) -> Value:
    if ring is Ring.QZ:
        return Fraction(token)
    return int(token)


def _build_cochain(complex_: OrderedComplex, section: _Section) -> Cochain:
    values: dict[Simplex, Value] = {}
    for number, line in section.body:
        key, sep, raw = line.partition("=")
        if not sep:
            raise FormatError("expected '<v,v,...> = <value>'", number)
        try:
            simplex = complex_.simplex_from_labels(_split_ids(key))
            value = _parse_value(section.ring, raw.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(str(e), number) from None
        if len(simplex) != section.degree + 1:
            raise FormatError(f"{complex_.label(simplex)} does not have degree {section.degree}", number)
        if simplex in values:
            raise FormatError(f"duplicate value for {complex_.label(simplex)}", number)
        values[simplex] = value
    return Cochain.from_values(complex_, section.degree, section.ring, values)


def _sections(text: str) -> tuple[tuple[int, list[str]] | None, list[_Section]]:
    """Split text into an optional leading non-cochain header and cochain sections."""
    header: tuple[int, list[str]] | None = None
    sections: list[_Section] = []
    for number, line in _records(text):
        keyword, _, rest = line.partition(" ")
        if keyword == "cochain":
            sections.append(_cochain_header(rest.split(), number))
        elif not sections and header is None and "=" not in line:
            header = (number, line.split())
        elif not sections:
            raise FormatError("value line before any 'cochain' header", number)
        else:
            sections[-1].body.append((number, line))
    return header, sections


def parse_cochain(text: str, complex_: OrderedComplex) -> tuple[str, Cochain]:
    header, sections = _sections(text)
    if header is not None:
        raise FormatError(f"unexpected record {header[1][0]!r}", header[0])
    if len(sections) != 1:
        raise FormatError(f"expected exactly one cochain, found {len(sections)}")
    return sections[0].name, _build_cochain(complex_, sections[0])


def dump_cochain(c: Cochain, name: str) -> str:
    lines = [f"cochain {name} deg {c.degree} coeff {c.ring.value}"]
    for simplex in c.support():
        lines.append(f"<{_format_simplex(c.complex, simplex)}> = {c.ring.format(c.values[simplex])}")
    return "\n".join(lines) + "\n"


# -- triples ----------------------------------------------------------------------------------------


def parse_triple(text: str, complex_: OrderedComplex) -> tuple[str, Triple]:
    """A ``triple <name>`` header followed by cochain sections w (qz, 3), p (z2, 2) and a (z2, 1).

    Omitted sections are zero.
    """
    header, sections = _sections(text)
    if header is None or header[1][0] != "triple" or len(header[1]) != 2:
        raise FormatError("expected 'triple <name>' header", header[0] if header else None)
    parts: dict[str, Cochain] = {}
    for section in sections:
        expected = TRIPLE_SECTIONS.get(section.name)
        if expected is None:
            raise FormatError(f"unknown triple section {section.name!r}; expected w, p or a", section.line)
        if (section.degree, section.ring) != expected:
            degree, ring = expected
            raise FormatError(f"section {section.name} must be deg {degree} coeff {ring.value}", section.line)
        if section.name in parts:
            raise FormatError(f"duplicate section {section.name}", section.line)
        parts[section.name] = _build_cochain(complex_, section)
    for key, (degree, ring) in TRIPLE_SECTIONS.items():
        parts.setdefault(key, Cochain.zero(complex_, degree, ring))
    return header[1][1], Triple(parts["w"], parts["p"], parts["a"])


def dump_triple(g: Triple, name: str) -> str:
    body = "".join(dump_cochain(c, key) for key, c in (("w", g.w), ("p", g.p), ("a", g.a)))
    return f"triple {name}\n{body}"


# -- quadratic forms --------------------------------------------------------------------------------


def parse_form(text: str) -> QuadraticForm:
    """``quadform <name> dim <n>``, then n ``B`` rows of 0/1 and one ``q`` row of values in 0..3."""
    name: str | None = None
    n = 0
    rows: list[list[int]] = []
    q: list[int] | None = None
    for number, line in _records(text):
        keyword, *args = line.split()
        try:
            if keyword == "quadform":
                if name is not None or len(args) != 3 or args[1] != "dim":
                    raise FormatError("expected a single 'quadform <name> dim <n>' header", number)
                name, n = args[0], int(args[2])
            elif name is None:
                raise FormatError("record before the 'quadform' header", number)
            elif keyword == "B":
                if len(args) != n:
                    raise FormatError(f"B row has {len(args)} entries, expected {n}", number)
                rows.append([int(x) for x in args])
            elif keyword == "q":
                if q is not None:
                    raise FormatError("duplicate q row", number)
                q = [int(x) for x in args]
            else:
                raise FormatError(f"unknown record {keyword!r}", number)
        except FormatError:
            raise
        except ValueError as e:
            raise FormatError(str(e), number) from None
    if name is None:
        raise FormatError("missing 'quadform' header")
    if len(rows) != n:
        raise FormatError(f"expected {n} B rows, found {len(rows)}")
    return QuadraticForm.build(rows, q if q is not None else [], name)


def dump_form(f: QuadraticForm) -> str:
    lines = [f"quadform {f.name} dim {f.n}"]
    lines += ["B " + " ".join(str(x) for x in row) for row in f.bilinear]
    lines.append("q " + " ".join(str(x) for x in f.q_basis))
    return "\n".join(lines) + "\n"


# -- files ------------------------------------------------------------------------------------------


def read_complex(path: Path) -> OrderedComplex:
    return parse_complex(path.read_text(encoding="utf-8"), name=path.stem)


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)
    return path
