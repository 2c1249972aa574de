"""Tests for quadratic forms and the Arf invariant."""

from __future__ import annotations

from fractions import Fraction

import pytest

from gx.arf import (
    SQRT2,
    DimensionCapError,
    QuadraticForm,
    QuadraticFormError,
    Zeta8Integer,
    arf,
    direct_sum,
    evaluate_q,
    gauss_sum,
    negate,
    radical_dimension,
)


def _line(q: int) -> QuadraticForm:
    return QuadraticForm.build([[q % 2]], [q], name=f"line{q}")


def _hyperbolic(q: int = 0) -> QuadraticForm:
    return QuadraticForm.build([[0, 1], [1, 0]], [q, q], name="hyp")


class TestZeta8Integer:
    def test_root_wraps_with_sign(self) -> None:
        assert Zeta8Integer.root(0) == Zeta8Integer(1)
        assert Zeta8Integer.root(4) == Zeta8Integer(-1)
        assert Zeta8Integer.root(7) == Zeta8Integer(0, 0, 0, -1)
        assert Zeta8Integer.root(-1) == Zeta8Integer.root(7)

    def test_multiplication_reduces_z4(self) -> None:
        z = Zeta8Integer.root(1)
        assert z * z * z * z == Zeta8Integer(-1)

    def test_sqrt2_squares_to_two(self) -> None:
        assert SQRT2 * SQRT2 == Zeta8Integer(2)

    def test_norm(self) -> None:
        assert Zeta8Integer(1, 0, 1, 0).norm() == 2
        assert Zeta8Integer(3).norm() == 9
        assert Zeta8Integer().is_zero()

    def test_irrational_norm_raises(self) -> None:
        with pytest.raises(QuadraticFormError, match="not rational"):
            Zeta8Integer(1, 1).norm()

    def test_arithmetic(self) -> None:
        a = Zeta8Integer(1, 2, 3, 4)
        assert a - a == Zeta8Integer()
        assert -a + a == Zeta8Integer()
        assert a.conjugate().conjugate() == a


class TestQuadraticForm:
    def test_build(self) -> None:
        f = _hyperbolic()
        assert f.n == 2
        assert f.row_masks() == [0b10, 0b01]

    def test_not_symmetric(self) -> None:
        with pytest.raises(QuadraticFormError, match="not symmetric"):
            QuadraticForm.build([[0, 1], [0, 0]], [0, 0])

    def test_entries_must_be_bits(self) -> None:
        with pytest.raises(QuadraticFormError, match="not in Z/2"):
            QuadraticForm.build([[2]], [0])

    def test_q_must_be_in_z4(self) -> None:
        with pytest.raises(QuadraticFormError, match="not in Z/4"):
            QuadraticForm.build([[0]], [4])

    def test_q_must_refine_diagonal(self) -> None:
        with pytest.raises(QuadraticFormError, match="disagrees with B"):
            QuadraticForm.build([[1]], [2])

    def test_shape_is_checked(self) -> None:
        with pytest.raises(QuadraticFormError, match="2x2"):
            QuadraticForm("f", 2, ((0, 1),), (0, 0))
        with pytest.raises(QuadraticFormError, match="expected 1 q values"):
            QuadraticForm("f", 1, ((0,),), ())

    def test_evaluate_by_polarization(self) -> None:
        f = _hyperbolic()
        assert evaluate_q(f, [1, 0]) == 0
        assert evaluate_q(f, [1, 1]) == 2
        assert evaluate_q(_line(3), [1]) == 3
        assert evaluate_q(_line(3), [0]) == 0

    def test_evaluate_checks_length(self) -> None:
        with pytest.raises(QuadraticFormError, match="vector has 1 entries"):
            evaluate_q(_hyperbolic(), [1])


class TestGaussSum:
    def test_line_forms(self) -> None:
        assert gauss_sum(_line(1)) == Zeta8Integer(1, 0, 1, 0)
        assert gauss_sum(_line(3)) == Zeta8Integer(1, 0, -1, 0)

    def test_hyperbolic(self) -> None:
        assert gauss_sum(_hyperbolic()) == Zeta8Integer(2)
        assert gauss_sum(_hyperbolic(2)) == Zeta8Integer(-2)

    def test_dimension_cap(self) -> None:
        f = QuadraticForm.build([[0] * 5 for _ in range(5)], [0] * 5)
        with pytest.raises(DimensionCapError, match="exceeds the cap 4"):
            gauss_sum(f, max_dim=4)


class TestArf:
    @pytest.mark.parametrize(
        ("form", "expected"),
        [
            (_line(1), 1),
            (_line(3), 7),
            (_hyperbolic(), 0),
            (_hyperbolic(2), 4),
            (QuadraticForm.build([], [], name="empty"), 0),
        ],
    )
    def test_known_values(self, form: QuadraticForm, expected: int) -> None:
        result = arf(form)
        assert result.k == expected
        assert not result.degenerate
        assert result.value == Fraction(expected, 8)

    def test_eight_copies_of_line_vanish(self) -> None:
        f = _line(1)
        total = f
        for _ in range(7):
            total = direct_sum(total, f)
        assert total.n == 8
        assert arf(total).k == 0

    def test_direct_sum_adds(self) -> None:
        f = direct_sum(_line(1), _line(1))
        assert f.name == "line1+line1"
        assert arf(f).k == 2
        assert arf(direct_sum(_line(1), _hyperbolic(2))).k == 5

    def test_negate(self) -> None:
        f = negate(_line(1))
        assert f.name == "-line1"
        assert f.q_basis == (3,)
        assert arf(f).k == 7
        assert arf(direct_sum(_line(1), f)).k == 0

    def test_degenerate_form(self) -> None:
        result = arf(QuadraticForm.build([[0]], [2]))
        assert result.degenerate
        assert result.value is None
        assert result.radical_dimension == 1
        assert str(result) == "degenerate"

    def test_radical_on_which_q_vanishes(self) -> None:
        f = QuadraticForm.build([[0]], [0])
        assert radical_dimension(f) == 1
        result = arf(f)
        assert result.k == 0
        assert result.gauss_sum == Zeta8Integer(2)

    def test_radical_with_nondegenerate_part(self) -> None:
        f = direct_sum(_line(3), QuadraticForm.build([[0]], [0]))
        assert radical_dimension(f) == 1
        assert arf(f).k == 7

    def test_string_form(self) -> None:
        assert str(arf(_line(1))) == "1 (mod 8) = 1/8"
