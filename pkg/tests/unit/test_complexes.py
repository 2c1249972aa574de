"""Tests for ordered complexes, chains, fundamental cycles and subdivision."""

from __future__ import annotations

import pytest

from gx.builtin_complexes import rp2, simplex_boundary, torus
from gx.complexes import (
    ComplexError,
    DegreeError,
    NonOrientableError,
    NotAPseudoManifoldError,
    OrderedComplex,
    SignedChain,
    SimplicialMap,
    barycentric_subdivision,
    chain_boundary,
    coboundary_matrix,
    coboundary_rows,
    faces,
    fundamental_cycle,
    join,
    wedge,
)


def _triangle() -> OrderedComplex:
    return OrderedComplex.from_simplices("triangle", ["a", "b", "c"], [(0, 1, 2)])


def _hollow_tetrahedron() -> OrderedComplex:
    return OrderedComplex.from_simplices(
        "tet", ["0", "1", "2", "3"], [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    )


class TestConstruction:
    def test_closure_adds_faces(self) -> None:
        x = _triangle()
        assert x.f_vector == (3, 3, 1)
        assert x.top_dim == 2
        assert x.simplices_of(1) == ((0, 1), (0, 2), (1, 2))

    def test_isolated_vertices_are_kept(self) -> None:
        x = OrderedComplex.from_simplices("pts", ["a", "b", "c"], [(0, 1)])
        assert x.f_vector == (3, 1)

    def test_non_increasing_tuple_rejected(self) -> None:
        with pytest.raises(ComplexError, match="non-increasing"):
            OrderedComplex.from_simplices("bad", ["a", "b"], [(1, 0)])

    def test_repeated_vertex_rejected(self) -> None:
        with pytest.raises(ComplexError, match="non-increasing"):
            OrderedComplex.from_simplices("bad", ["a", "b"], [(0, 0)])

    def test_unknown_vertex_rejected(self) -> None:
        with pytest.raises(ComplexError, match="unknown vertex"):
            OrderedComplex.from_simplices("bad", ["a", "b"], [(0, 2)])

    def test_duplicate_identifier_rejected(self) -> None:
        with pytest.raises(ComplexError, match="duplicate"):
            OrderedComplex.from_simplices("bad", ["a", "a"], [(0, 1)])

    def test_from_labeled(self) -> None:
        x = OrderedComplex.from_labeled("lab", ["x", "y", "z"], [("x", "z"), ("y",)])
        assert x.f_vector == (3, 1)
        assert x.contains((0, 2))

    def test_from_labeled_unknown_vertex(self) -> None:
        with pytest.raises(ComplexError, match="unknown vertex 'w'"):
            OrderedComplex.from_labeled("lab", ["x"], [("x", "w")])


class TestLookups:
    def test_index_and_contains(self) -> None:
        x = _triangle()
        assert x.index((1, 2)) == 2
        assert x.contains((0, 1, 2))
        assert not x.contains((0, 1, 2, 3))
        with pytest.raises(ComplexError, match="is not a simplex"):
            x.index((0, 3))

    def test_count_out_of_range_is_zero(self) -> None:
        x = _triangle()
        assert x.count(5) == 0
        assert x.count(-1) == 0
        assert x.simplices_of(7) == ()

    def test_simplex_from_labels(self) -> None:
        x = _triangle()
        assert x.simplex_from_labels(["a", "c"]) == (0, 2)
        with pytest.raises(ComplexError, match="non-increasing"):
            x.simplex_from_labels(["c", "a"])
        with pytest.raises(ComplexError, match="unknown vertex"):
            x.simplex_from_labels(["a", "q"])

    def test_label(self) -> None:
        assert _triangle().label((0, 2)) == "(a,c)"

    def test_cofaces_carry_signs(self) -> None:
        x = _triangle()
        # edge (0,2) is the face of (0,1,2) omitting position 1
        assert x.cofaces[1][1] == (((0, 1, 2), -1),)
        assert x.cofaces[0][0] == (((0, 1), -1), ((0, 2), -1))

    def test_equality_and_hash(self) -> None:
        assert _triangle() == _triangle()
        assert hash(_triangle()) == hash(_triangle())
        assert _triangle() != _hollow_tetrahedron()

    def test_faces_order(self) -> None:
        assert faces((3, 5, 7)) == [(5, 7), (3, 7), (3, 5)]


class TestCoboundary:
    def test_rows_match_alternating_faces(self) -> None:
        rows = coboundary_rows(_triangle(), 1)
        assert rows == [{2: 1, 1: -1, 0: 1}]

    def test_top_degree_has_no_rows(self) -> None:
        assert coboundary_rows(_triangle(), 2) == []

    def test_negative_degree_raises(self) -> None:
        with pytest.raises(DegreeError):
            coboundary_rows(_triangle(), -1)

    def test_dense_matrix_squares_to_zero(self) -> None:
        x = _hollow_tetrahedron()
        d0 = coboundary_matrix(x, 0)
        d1 = coboundary_matrix(x, 1)
        for row in d1:
            for j in range(len(d0[0])):
                assert sum(row[i] * d0[i][j] for i in range(len(d0))) == 0

    def test_matrix_degree_out_of_range(self) -> None:
        with pytest.raises(DegreeError):
            coboundary_matrix(_triangle(), 2)


class TestChains:
    def test_from_mapping_drops_zeros(self) -> None:
        chain = SignedChain.from_mapping(1, {(0, 1): 1, (1, 2): 0})
        assert len(chain) == 1
        assert chain.coefficient((0, 1)) == 1
        assert chain.coefficient((1, 2)) == 0

    def test_from_mapping_checks_degree(self) -> None:
        with pytest.raises(DegreeError):
            SignedChain.from_mapping(2, {(0, 1): 1})

    def test_boundary_of_triangle(self) -> None:
        x = _triangle()
        boundary = chain_boundary(x, SignedChain.from_mapping(2, {(0, 1, 2): 1}))
        assert boundary.as_dict() == {(1, 2): 1, (0, 2): -1, (0, 1): 1}

    def test_negation(self) -> None:
        chain = -SignedChain.from_mapping(0, {(0,): 2})
        assert chain.coefficient((0,)) == -2


class TestFundamentalCycle:
    def test_hollow_tetrahedron(self) -> None:
        x = _hollow_tetrahedron()
        cycle = fundamental_cycle(x)
        assert len(cycle) == 4
        assert cycle.coefficient((1, 2, 3)) == 1
        assert chain_boundary(x, cycle).terms == ()

    def test_torus_is_orientable(self) -> None:
        x = torus().complex
        assert chain_boundary(x, fundamental_cycle(x)).terms == ()

    def test_rp2_is_not_orientable(self) -> None:
        with pytest.raises(NonOrientableError):
            fundamental_cycle(rp2().complex)

    def test_disk_is_not_closed(self) -> None:
        with pytest.raises(NotAPseudoManifoldError, match="needs 2"):
            fundamental_cycle(_triangle())

    def test_point_is_rejected(self) -> None:
        x = OrderedComplex.from_simplices("pt", ["a"], [(0,)])
        with pytest.raises(NotAPseudoManifoldError, match="dimension 0"):
            fundamental_cycle(x)

    def test_two_spheres_are_disconnected(self) -> None:
        x = OrderedComplex.from_simplices(
            "two", [str(i) for i in range(6)], [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
        )
        with pytest.raises(NotAPseudoManifoldError, match="not connected"):
            fundamental_cycle(x)

    def test_attached_cycle_is_validated(self) -> None:
        x = _hollow_tetrahedron()
        bad = SignedChain.from_mapping(2, {s: 1 for s in x.simplices[2]})
        with pytest.raises(NotAPseudoManifoldError, match="nonzero boundary"):
            fundamental_cycle(x.with_cycle(bad))

    def test_attached_cycle_is_returned(self) -> None:
        x = _hollow_tetrahedron()
        cycle = -fundamental_cycle(x)
        assert fundamental_cycle(x.with_cycle(cycle)) == cycle


class TestSimplicialMap:
    def test_identity(self) -> None:
        x = _triangle()
        f = SimplicialMap.identity(x)
        assert f.image((0, 2)) == (0, 2)

    def test_collapse_returns_none(self) -> None:
        x = _triangle()
        y = OrderedComplex.from_simplices("edge", ["u", "v"], [(0, 1)])
        f = SimplicialMap.from_labels(x, y, {"a": "u", "b": "u", "c": "v"})
        assert f.image((0, 1)) is None
        assert f.image((1, 2)) == (0, 1)

    def test_decreasing_map_rejected(self) -> None:
        x = OrderedComplex.from_simplices("edge", ["u", "v"], [(0, 1)])
        with pytest.raises(ComplexError, match="decreasing"):
            SimplicialMap(x, x, (1, 0))

    def test_image_must_be_a_simplex(self) -> None:
        x = OrderedComplex.from_simplices("edge", ["u", "v"], [(0, 1)])
        y = OrderedComplex.from_simplices("pts", ["p", "q"], [])
        with pytest.raises(ComplexError, match="not a simplex of the target"):
            SimplicialMap(x, y, (0, 1))


class TestBarycentricSubdivision:
    def test_f_vector_of_subdivided_sphere(self) -> None:
        x = simplex_boundary(3).complex
        subdivided, projection = barycentric_subdivision(x)
        assert subdivided.f_vector == (14, 36, 24)
        assert projection.target is x

    def test_vertex_identifiers(self) -> None:
        subdivided, _ = barycentric_subdivision(_triangle())
        assert subdivided.vertices == ("a", "b", "c", "[a.b]", "[a.c]", "[b.c]", "[a.b.c]")

    def test_projection_sends_barycenter_to_greatest_vertex(self) -> None:
        subdivided, projection = barycentric_subdivision(_triangle())
        assert projection.vertex_map == (0, 1, 2, 1, 2, 2, 2)

    def test_cycle_is_carried(self) -> None:
        x = simplex_boundary(3).complex
        subdivided, _ = barycentric_subdivision(x)
        assert subdivided.cycle is not None
        assert chain_boundary(subdivided, fundamental_cycle(subdivided)).terms == ()


class TestWedgeAndJoin:
    def test_wedge_shares_the_first_vertex(self) -> None:
        edge = OrderedComplex.from_simplices("edge", ["u", "v"], [(0, 1)])
        x = wedge(_triangle(), edge)
        assert x.name == "trianglevedge"
        assert x.vertices == ("a", "b", "c", "v")
        assert x.f_vector == (4, 4, 1)
        assert x.contains((0, 3))

    def test_wedge_renames_clashing_vertices(self) -> None:
        x = wedge(_triangle(), _triangle(), "two")
        assert x.vertices == ("a", "b", "c", "triangle_b", "triangle_c")
        assert x.f_vector == (5, 6, 2)
        assert x.contains((0, 3, 4))

    def test_wedge_of_empty_complex(self) -> None:
        empty = OrderedComplex.from_simplices("empty", [], [])
        with pytest.raises(ComplexError, match="empty"):
            wedge(_triangle(), empty)

    def test_join_of_two_point_pairs_is_a_circle(self) -> None:
        pair = OrderedComplex.from_simplices("pair", ["n", "s"], [])
        x = join(pair, pair)
        assert x.vertices == ("n", "s", "pair_n", "pair_s")
        assert x.f_vector == (4, 4)
        assert chain_boundary(x, fundamental_cycle(x)).terms == ()

    def test_cone_on_a_triangle(self) -> None:
        apex = OrderedComplex.from_simplices("apex", ["o"], [])
        x = join(_triangle(), apex, "cone")
        assert x.f_vector == (4, 6, 4, 1)
        assert x.simplices_of(3) == ((0, 1, 2, 3),)

    def test_suspension_of_rp2(self) -> None:
        pair = OrderedComplex.from_simplices("pair", ["n", "s"], [])
        assert join(rp2().complex, pair).f_vector == (8, 27, 40, 20)
