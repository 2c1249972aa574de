"""Tests for the built-in example complexes and the RP^3 evaluation check."""

from __future__ import annotations

import pytest

from gx.builtin_complexes import BUILTINS, builtin, simplex_boundary, t_s_sphere, verify_appendix
from gx.cochains import cup, d
from gx.complexes import chain_boundary
from gx.linalg import z2_cohomology


class TestCatalogue:
    @pytest.mark.parametrize(
        ("name", "f_vector"),
        [
            ("sphere1", (3, 3)),
            ("sphere2", (4, 6, 4)),
            ("sphere3", (5, 10, 10, 5)),
            ("rp2", (6, 15, 10)),
            ("torus", (7, 21, 14)),
        ],
    )
    def test_f_vectors(self, name: str, f_vector: tuple[int, ...]) -> None:
        assert builtin(name).complex.f_vector == f_vector
        assert builtin(name).complex.name == name

    def test_orientable_examples_carry_their_cycle(self) -> None:
        for name in ("sphere1", "sphere2", "sphere3", "torus"):
            example = builtin(name)
            assert example.fundamental is not None
            assert example.complex.cycle == example.fundamental
            assert chain_boundary(example.complex, example.fundamental).terms == ()

    def test_rp2_has_no_cycle(self) -> None:
        example = builtin("rp2")
        assert example.fundamental is None
        assert set(example.named_cochains) == {"a"}

    def test_torus_generators_are_cocycles(self) -> None:
        example = builtin("torus")
        assert set(example.named_cochains) == {"a", "b"}
        assert all(d(c).is_zero() for c in example.named_cochains.values())

    def test_unknown_name(self) -> None:
        with pytest.raises(ValueError, match="unknown built-in complex 'klein'"):
            builtin("klein")

    def test_simplex_boundary_range(self) -> None:
        with pytest.raises(ValueError, match="n = 2..4"):
            simplex_boundary(5)

    def test_registry_names(self) -> None:
        assert set(BUILTINS) == {"sphere1", "sphere2", "sphere3", "rp2", "torus", "tss2"}


class TestUnitTangentBundle:
    def test_shape(self) -> None:
        example = t_s_sphere()
        x = example.complex
        assert x.f_vector == (40, 232, 384, 192)
        assert list(x.vertices) == sorted(x.vertices)
        assert example.fundamental is not None
        assert len(example.fundamental) == 192

    def test_named_cochains(self) -> None:
        example = t_s_sphere()
        c, p, t = (example.named_cochains[k] for k in ("c", "p", "t"))
        assert (c.degree, p.degree, t.degree) == (1, 2, 1)
        assert d(c).is_zero()
        assert d(p).is_zero()
        assert p + d(t) == cup(c, c)

    def test_c_generates_first_cohomology(self) -> None:
        example = t_s_sphere()
        classes = z2_cohomology(example.complex, 1)
        assert classes.dimension == 1
        assert classes.coordinates(example.named_cochains["c"]) == (1,)

    def test_builtin_is_cached(self) -> None:
        assert builtin("tss2") is t_s_sphere()


class TestAppendixCheck:
    def test_every_step_passes(self) -> None:
        report = verify_appendix()
        failed = [step.name for step in report.steps if not step.passed]
        assert failed == []
        assert report.passed
        assert report.evaluation == "1/4"

    def test_step_names(self) -> None:
        names = [step.name for step in verify_appendix().steps]
        assert names[0] == "c is a cocycle"
        assert names[-1] == "evaluation"
        assert "integral of C^3" in names
        assert len(names) == 10
