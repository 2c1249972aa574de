"""Tests for cochains, coefficient rings and products."""

from __future__ import annotations

from fractions import Fraction

import pytest

from gx.cochains import (
    MOD4,
    Cochain,
    CochainError,
    Ring,
    RingMismatchError,
    UnsupportedBidegreeError,
    cup,
    cup1,
    cup2,
    cup_power,
    d,
    half,
    integrate,
    map_coefficients,
    nth_part,
    pontrjagin_square_sq,
    pullback_cochain,
    special_lift,
)
from gx.complexes import DegreeError, OrderedComplex, SimplicialMap, fundamental_cycle


def _simplex3() -> OrderedComplex:
    return OrderedComplex.from_simplices("simplex3", ["0", "1", "2", "3"], [(0, 1, 2, 3)])


def _triangle() -> OrderedComplex:
    return OrderedComplex.from_simplices("triangle", ["a", "b", "c"], [(0, 1, 2)])


def _edges(x: OrderedComplex, ring: Ring, values: dict) -> Cochain:
    return Cochain.from_values(x, 1, ring, values)


class TestRing:
    def test_parse_is_case_insensitive(self) -> None:
        assert Ring.parse("Z2") is Ring.Z2
        assert Ring.parse("qz") is Ring.QZ

    def test_parse_unknown(self) -> None:
        with pytest.raises(CochainError, match="unknown ring tag"):
            Ring.parse("r")

    def test_normalize(self) -> None:
        assert Ring.Z.normalize(-3) == -3
        assert Ring.Z2.normalize(-3) == 1
        assert Ring.Z4.normalize(-5) == 3
        assert Ring.QZ.normalize(Fraction(5, 4)) == Fraction(1, 4)
        assert Ring.QZ.normalize(Fraction(-1, 8)) == Fraction(7, 8)

    def test_normalize_rejects_fractions_in_integral_rings(self) -> None:
        with pytest.raises(CochainError, match="not an integer"):
            Ring.Z.normalize(Fraction(1, 2))

    def test_format(self) -> None:
        assert Ring.QZ.format(Fraction(3, 8)) == "3/8"
        assert Ring.QZ.format(0) == "0"
        assert Ring.Z4.format(3) == "3"


class TestCochain:
    def test_from_values_normalizes_and_drops_zeros(self) -> None:
        c = _edges(_triangle(), Ring.Z2, {(0, 1): 3, (0, 2): 2})
        assert dict(c.values) == {(0, 1): 1}
        assert c[(0, 2)] == 0

    def test_from_values_checks_degree(self) -> None:
        with pytest.raises(CochainError, match="does not have degree 1"):
            _edges(_triangle(), Ring.Z, {(0, 1, 2): 1})

    def test_from_values_checks_membership(self) -> None:
        x = OrderedComplex.from_simplices("edge", ["a", "b", "c"], [(0, 1)])
        with pytest.raises(CochainError, match="is not a simplex"):
            _edges(x, Ring.Z, {(0, 2): 1})

    def test_negative_degree(self) -> None:
        with pytest.raises(DegreeError):
            Cochain.from_values(_triangle(), -1, Ring.Z, {})

    def test_arithmetic(self) -> None:
        x = _triangle()
        a = _edges(x, Ring.Z4, {(0, 1): 3, (1, 2): 1})
        b = _edges(x, Ring.Z4, {(0, 1): 1, (0, 2): 2})
        assert dict((a + b).values) == {(0, 2): 2, (1, 2): 1}
        assert dict((a - b).values) == {(0, 1): 2, (0, 2): 2, (1, 2): 1}
        assert dict((-a).values) == {(0, 1): 1, (1, 2): 3}
        assert 4 * a == Cochain.zero(x, 1, Ring.Z4)

    def test_mixed_rings_rejected(self) -> None:
        x = _triangle()
        with pytest.raises(RingMismatchError):
            _edges(x, Ring.Z, {(0, 1): 1}) + _edges(x, Ring.Z2, {(0, 1): 1})

    def test_mixed_degrees_rejected(self) -> None:
        x = _triangle()
        with pytest.raises(DegreeError):
            _edges(x, Ring.Z, {}) + Cochain.zero(x, 2, Ring.Z)

    def test_bits(self) -> None:
        x = _triangle()
        c = _edges(x, Ring.Z2, {(0, 2): 1, (1, 2): 1})
        assert c.to_bits() == 0b110
        assert Cochain.from_bits(x, 1, 0b110) == c

    def test_bits_need_z2(self) -> None:
        with pytest.raises(RingMismatchError):
            _edges(_triangle(), Ring.Z, {(0, 1): 1}).to_bits()

    def test_vector(self) -> None:
        x = _triangle()
        c = Cochain.from_vector(x, 1, Ring.Z, [1, 0, -2])
        assert c.to_vector() == [1, 0, -2]
        with pytest.raises(CochainError, match="expected 3"):
            Cochain.from_vector(x, 1, Ring.Z, [1])

    def test_indicator(self) -> None:
        c = Cochain.indicator(_triangle(), [(0, 1, 2)], Ring.Z)
        assert c.degree == 2
        assert c.support() == [(0, 1, 2)]
        with pytest.raises(CochainError, match="at least one"):
            Cochain.indicator(_triangle(), [], Ring.Z)


class TestCoboundary:
    def test_vertex_indicator(self) -> None:
        x = _triangle()
        dc = d(Cochain.indicator(x, [(0,)], Ring.Z))
        assert dict(dc.values) == {(0, 1): -1, (0, 2): -1}

    def test_d_squared_vanishes(self) -> None:
        x = _simplex3()
        c = _edges(x, Ring.Z, {(0, 1): 2, (1, 3): -1, (2, 3): 5})
        assert d(c).degree == 2
        assert d(d(c)).is_zero()

    def test_top_degree_is_zero(self) -> None:
        x = _triangle()
        dc = d(Cochain.indicator(x, [(0, 1, 2)], Ring.Z))
        assert dc.degree == 3
        assert dc.is_zero()

    def test_qz_values_reduce(self) -> None:
        x = _triangle()
        c = Cochain.from_values(x, 0, Ring.QZ, {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})
        assert dict(d(c).values) == {(0, 2): Fraction(1, 2), (1, 2): Fraction(1, 2)}


class TestProducts:
    def test_cup_front_and_back_faces(self) -> None:
        x = _triangle()
        a = _edges(x, Ring.Z, {(0, 1): 2})
        b = _edges(x, Ring.Z, {(1, 2): 3})
        assert dict(cup(a, b).values) == {(0, 1, 2): 6}
        assert cup(b, a).is_zero()

    def test_leibniz_rule(self) -> None:
        x = _simplex3()
        a = _edges(x, Ring.Z, {(0, 1): 1, (1, 2): 2, (2, 3): -1, (0, 3): 3})
        b = _edges(x, Ring.Z, {(0, 2): 1, (1, 3): -2, (2, 3): 4})
        assert d(cup(a, b)) == cup(d(a), b) - cup(a, d(b))

    def test_cup_is_associative(self) -> None:
        x = _simplex3()
        a = _edges(x, Ring.Z2, {(0, 1): 1, (1, 2): 1})
        b = _edges(x, Ring.Z2, {(1, 2): 1, (2, 3): 1})
        c = _edges(x, Ring.Z2, {(2, 3): 1})
        assert cup(cup(a, b), c) == cup(a, cup(b, c))
        assert dict(cup(cup(a, b), c).values) == {(0, 1, 2, 3): 1}

    def test_cup_rejects_qz(self) -> None:
        x = _triangle()
        a = _edges(x, Ring.QZ, {(0, 1): Fraction(1, 2)})
        with pytest.raises(RingMismatchError, match="Q/Z"):
            cup(a, a)

    def test_cup_rejects_mixed_rings(self) -> None:
        x = _triangle()
        with pytest.raises(RingMismatchError, match="ring mismatch"):
            cup(_edges(x, Ring.Z, {}), _edges(x, Ring.Z2, {}))

    def test_cup_power(self) -> None:
        x = _simplex3()
        a = _edges(x, Ring.Z2, {(0, 1): 1, (1, 2): 1, (2, 3): 1})
        assert dict(cup_power(a, 3).values) == {(0, 1, 2, 3): 1}
        with pytest.raises(CochainError):
            cup_power(a, 0)

    def test_cup1_in_degree_one(self) -> None:
        x = _triangle()
        a = _edges(x, Ring.Z, {(0, 1): 2, (0, 2): 1})
        b = _edges(x, Ring.Z, {(0, 1): 3})
        assert dict(cup1(a, b).values) == {(0, 1): -6}

    def test_cup1_one_two(self) -> None:
        x = _triangle()
        a = _edges(x, Ring.Z, {(0, 2): 2})
        p = Cochain.indicator(x, [(0, 1, 2)], Ring.Z)
        assert dict(cup1(a, p).values) == {(0, 1, 2): -2}

    def test_cup1_two_one(self) -> None:
        x = _triangle()
        p = Cochain.indicator(x, [(0, 1, 2)], Ring.Z)
        a = _edges(x, Ring.Z, {(0, 1): 1, (1, 2): 4, (0, 2): 7})
        assert dict(cup1(p, a).values) == {(0, 1, 2): 5}

    def test_cup1_two_two(self) -> None:
        x = _simplex3()
        p = Cochain.from_values(x, 2, Ring.Z, {(0, 1, 3): 1, (0, 2, 3): 2})
        q = Cochain.from_values(x, 2, Ring.Z, {(1, 2, 3): 3, (0, 1, 2): 5})
        assert dict(cup1(p, q).values) == {(0, 1, 2, 3): 3 - 10}

    def test_cup1_unsupported_bidegree(self) -> None:
        x = _triangle()
        with pytest.raises(UnsupportedBidegreeError):
            cup1(Cochain.zero(x, 0, Ring.Z), Cochain.zero(x, 1, Ring.Z))

    def test_cup1_coboundary_formula_in_degree_one(self) -> None:
        # d(x u_1 y) = x u y + y u x - dx u_1 y + x u_1 dy
        x = _simplex3()
        a = _edges(x, Ring.Z, {(0, 1): 1, (1, 2): -2, (0, 2): 3, (2, 3): 1})
        b = _edges(x, Ring.Z, {(0, 1): 2, (0, 2): -1, (1, 3): 5})
        lhs = d(cup1(a, b))
        rhs = cup(a, b) + cup(b, a) - cup1(d(a), b) + cup1(a, d(b))
        assert lhs == rhs

    def test_cup2(self) -> None:
        x = _triangle()
        p = Cochain.indicator(x, [(0, 1, 2)], Ring.Z)
        assert dict(cup2(3 * p, 2 * p).values) == {(0, 1, 2): -6}
        with pytest.raises(UnsupportedBidegreeError):
            cup2(_edges(x, Ring.Z, {}), p)


class TestLiftsAndMaps:
    def test_special_lift(self) -> None:
        x = _triangle()
        a = _edges(x, Ring.Z2, {(0, 1): 1})
        lifted = special_lift(a)
        assert lifted.ring is Ring.Z
        assert dict(lifted.values) == {(0, 1): 1}
        with pytest.raises(RingMismatchError):
            special_lift(lifted)

    def test_half_and_nth_part(self) -> None:
        x = _triangle()
        assert dict(half(_edges(x, Ring.Z2, {(0, 1): 1})).values) == {(0, 1): Fraction(1, 2)}
        assert dict(nth_part(8, _edges(x, Ring.Z, {(0, 1): 11})).values) == {(0, 1): Fraction(3, 8)}

    def test_map_coefficients_checks_source(self) -> None:
        with pytest.raises(RingMismatchError, match="mod4"):
            map_coefficients(MOD4, _edges(_triangle(), Ring.Z2, {}))

    def test_pontrjagin_square_needs_cocycle(self) -> None:
        x = _triangle()
        with pytest.raises(CochainError, match="not a cocycle"):
            pontrjagin_square_sq(_edges(x, Ring.Z2, {(0, 1): 1}))

    def test_pontrjagin_square_of_coboundary(self) -> None:
        x = _simplex3()
        a = d(Cochain.indicator(x, [(0,)], Ring.Z2))
        square = pontrjagin_square_sq(a)
        assert square.ring is Ring.Z4
        assert square.degree == 4

    def test_pullback_zeroes_collapsed_simplices(self) -> None:
        x = _triangle()
        y = OrderedComplex.from_simplices("edge", ["u", "v"], [(0, 1)])
        f = SimplicialMap.from_labels(x, y, {"a": "u", "b": "u", "c": "v"})
        pulled = pullback_cochain(f, _edges(y, Ring.Z, {(0, 1): 4}))
        assert dict(pulled.values) == {(0, 2): 4, (1, 2): 4}

    def test_pullback_checks_target(self) -> None:
        x = _triangle()
        f = SimplicialMap.identity(x)
        with pytest.raises(CochainError, match="target"):
            pullback_cochain(f, _edges(_simplex3(), Ring.Z, {}))


class TestIntegrate:
    def test_integral_over_fundamental_cycle(self) -> None:
        x = OrderedComplex.from_simplices(
            "tet", ["0", "1", "2", "3"], [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        )
        cycle = fundamental_cycle(x)
        top = Cochain.indicator(x, [(1, 2, 3)], Ring.Z)
        assert integrate(top, cycle) == 1
        everywhere = Cochain.from_values(x, 2, Ring.QZ, {s: Fraction(1, 4) for s in x.simplices[2]})
        assert integrate(everywhere, cycle) == 0

    def test_degree_mismatch(self) -> None:
        x = OrderedComplex.from_simplices(
            "tet", ["0", "1", "2", "3"], [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        )
        with pytest.raises(DegreeError):
            integrate(Cochain.zero(x, 1, Ring.Z), fundamental_cycle(x))
