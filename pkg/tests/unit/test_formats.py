"""Tests for the .osc, .coc, .triple and quadratic form text formats."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from gx.arf import QuadraticForm, QuadraticFormError
from gx.builtin_complexes import simplex_boundary, torus
from gx.cochains import Cochain, Ring
from gx.formats import (
    ComplexFormatError,
    FormatError,
    dump_cochain,
    dump_complex,
    dump_form,
    dump_triple,
    parse_cochain,
    parse_complex,
    parse_form,
    parse_triple,
    read_complex,
    write_text,
)
from gx.ggroup import Triple

TRIANGLE = """\
# a filled triangle with a dangling vertex
complex tri
vertex a
vertex b
vertex c
vertex d
simplex a b c
"""

CIRCLE = """\
complex loop
vertex a
vertex b
vertex c
simplex a b
simplex b c
simplex a c
cycle +(a,b) +<b,c> -a,c
"""


class TestComplexFormat:
    def test_parse(self) -> None:
        x = parse_complex(TRIANGLE)
        assert x.name == "tri"
        assert x.vertices == ("a", "b", "c", "d")
        assert x.f_vector == (4, 3, 1)

    def test_cycle_terms(self) -> None:
        x = parse_complex(CIRCLE)
        assert x.cycle is not None
        assert x.cycle.as_dict() == {(0, 1): 1, (1, 2): 1, (0, 2): -1}

    def test_dump_lists_maximal_simplices(self) -> None:
        text = dump_complex(parse_complex(TRIANGLE))
        assert "simplex a b c" in text
        assert "simplex d" in text
        assert "simplex a b\n" not in text

    def test_dump_parses_back(self) -> None:
        x = torus().complex
        again = parse_complex(dump_complex(x))
        assert again == x
        assert again.cycle == x.cycle

    def test_name_argument_is_default(self) -> None:
        assert parse_complex("vertex a\n", name="fallback").name == "fallback"

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("vertex a\nvertex a\n", "line 2: duplicate vertex 'a'"),
            ("vertex a\nsimplex a q\n", "line 2: simplex references unknown vertex 'q'"),
            ("vertex a\nvertex b\nsimplex b a\n", "line 3: non-increasing tuple"),
            ("polytope x\n", "line 1: unknown record 'polytope'"),
            ("vertex a\nvertex b\nsimplex a b\ncycle a,b\n", "line 4: malformed cycle term"),
            (
                "vertex a\nvertex b\nvertex c\nsimplex a b\ncycle +(a,c)\n",
                "line 5: cycle term \\(a,c\\) is not a simplex",
            ),
            ("complex\n", "line 1: expected 'complex <name>'"),
        ],
    )
    def test_errors_carry_line_numbers(self, text: str, message: str) -> None:
        with pytest.raises(ComplexFormatError, match=message):
            parse_complex(text)

    def test_error_line_attribute(self) -> None:
        with pytest.raises(FormatError) as excinfo:
            parse_complex("vertex a\n\n# comment\nvertex a\n")
        assert excinfo.value.line == 4

    def test_read_complex_uses_stem(self, tmp_path: Path) -> None:
        path = write_text(tmp_path / "sub" / "shape.osc", "vertex a\nvertex b\nsimplex a b\n")
        assert read_complex(path).name == "shape"


class TestCochainFormat:
    def test_parse_z2(self) -> None:
        x = parse_complex(TRIANGLE)
        name, c = parse_cochain("cochain alpha deg 1 coeff z2\n<a,b> = 1\n(b,c) = 3\na,c = 0\n", x)
        assert name == "alpha"
        assert c.ring is Ring.Z2
        assert c.values == {(0, 1): 1, (1, 2): 1}

    def test_parse_qz_fractions(self) -> None:
        x = parse_complex(TRIANGLE)
        _, c = parse_cochain("cochain w deg 2 coeff qz\n<a,b,c> = 5/4\n", x)
        assert c[(0, 1, 2)] == Fraction(1, 4)

    def test_dump_parses_back(self) -> None:
        x = simplex_boundary(3).complex
        c = Cochain.from_values(x, 1, Ring.Z4, {(0, 1): 3, (2, 3): 2})
        text = dump_cochain(c, "u")
        assert text.splitlines()[0] == "cochain u deg 1 coeff z4"
        assert parse_cochain(text, x) == ("u", c)

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("cochain u deg 1\n", "line 1: expected 'cochain"),
            ("cochain u deg 1 coeff r\n", "line 1: unknown ring tag 'r'"),
            ("<a,b> = 1\n", "line 1: value line before any 'cochain' header"),
            ("cochain u deg 1 coeff z\n<a,b> 1\n", "line 2: expected '<v,v,...> = <value>'"),
            ("cochain u deg 1 coeff z\n<a,b,c> = 1\n", "line 2: \\(a,b,c\\) does not have degree 1"),
            ("cochain u deg 1 coeff z\n<a,b> = 1\n<a,b> = 2\n", "line 3: duplicate value"),
            ("cochain u deg 1 coeff z\n<a,d> = 1\n", "line 2: .*not a simplex"),
            ("cochain u deg 1 coeff z\n<a,b> = x\n", "line 2"),
            ("cochain u deg 1 coeff z2\ncochain v deg 1 coeff z2\n", "exactly one cochain, found 2"),
        ],
    )
    def test_errors(self, text: str, message: str) -> None:
        with pytest.raises(FormatError, match=message):
            parse_cochain(text, parse_complex(TRIANGLE))


class TestTripleFormat:
    def test_missing_sections_are_zero(self) -> None:
        x = simplex_boundary(4).complex
        name, g = parse_triple("triple g\ncochain w deg 3 coeff qz\n<0,1,2,3> = 1/3\n", x)
        assert name == "g"
        assert g.p.is_zero()
        assert g.a.is_zero()
        assert g.w[(0, 1, 2, 3)] == Fraction(1, 3)

    def test_dump_parses_back(self) -> None:
        x = simplex_boundary(4).complex
        w = Cochain.from_values(x, 3, Ring.QZ, {(0, 1, 2, 4): Fraction(3, 8)})
        g = Triple.from_w(w)
        assert parse_triple(dump_triple(g, "h"), x) == ("h", g)

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("cochain w deg 3 coeff qz\n", "expected 'triple <name>' header"),
            ("triple g\ncochain q deg 2 coeff z2\n", "line 2: unknown triple section 'q'"),
            ("triple g\ncochain p deg 2 coeff z4\n", "line 2: section p must be deg 2 coeff z2"),
            ("triple g\ncochain a deg 1 coeff z2\ncochain a deg 1 coeff z2\n", "line 3: duplicate section a"),
        ],
    )
    def test_errors(self, text: str, message: str) -> None:
        with pytest.raises(FormatError, match=message):
            parse_triple(text, simplex_boundary(4).complex)


class TestFormFormat:
    def test_parse(self) -> None:
        f = parse_form("quadform h dim 2\nB 0 1\nB 1 0\nq 0 2\n")
        assert f == QuadraticForm.build([[0, 1], [1, 0]], [0, 2], name="h")

    def test_dump_parses_back(self) -> None:
        f = QuadraticForm.build([[1, 0], [0, 1]], [1, 3], name="pair")
        assert parse_form(dump_form(f)) == f

    def test_empty_form(self) -> None:
        f = parse_form("quadform nothing dim 0\nq\n")
        assert f.n == 0

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("B 0\n", "line 1: record before the 'quadform' header"),
            ("quadform f dim 2\nB 0 1 0\n", "line 2: B row has 3 entries, expected 2"),
            ("quadform f dim 1\nB 0\nq 0\nq 0\n", "line 4: duplicate q row"),
            ("quadform f dim 1\nB x\n", "line 2"),
            ("quadform f dim 2\nB 0 0\nq 0 0\n", "expected 2 B rows, found 1"),
            ("", "missing 'quadform' header"),
        ],
    )
    def test_errors(self, text: str, message: str) -> None:
        with pytest.raises(FormatError, match=message):
            parse_form(text)

    def test_invalid_form_is_rejected_after_parsing(self) -> None:
        with pytest.raises(QuadraticFormError, match="not symmetric"):
            parse_form("quadform f dim 2\nB 0 1\nB 0 0\nq 0 0\n")
