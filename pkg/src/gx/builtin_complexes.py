"""Built-in example complexes: spheres, RP^2, the 7-vertex torus and the unit tangent bundle of S^2."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .cochains import Cochain, Ring, cup, cup1, cup_power, d, half, integrate, nth_part, special_lift
from .complexes import OrderedComplex, SignedChain, fundamental_cycle
from .ggroup import Triple, big_d_prime, cbar_equal, evaluate_g1, extension_cocycle, g_equal, product
from .linalg import z2_cohomology
from .models import AppendixReport, AppendixStep

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NamedExample:
    complex: OrderedComplex
    fundamental: SignedChain | None = None
    named_cochains: dict[str, Cochain] = field(default_factory=dict)
    description: str = ""


def _oriented(complex_: OrderedComplex) -> OrderedComplex:
    return complex_.with_cycle(fundamental_cycle(complex_))


def simplex_boundary(n: int) -> NamedExample:
    """The boundary of the standard n-simplex, a triangulated (n-1)-sphere on vertices 0..n."""
    if not 2 <= n <= 4:
        raise ValueError(f"simplex boundaries are provided for n = 2..4, got {n}")
    vertices = [str(i) for i in range(n + 1)]
    facets = itertools.combinations(range(n + 1), n)
    complex_ = _oriented(OrderedComplex.from_simplices(f"sphere{n - 1}", vertices, facets))
    return NamedExample(complex_, complex_.cycle, description=f"boundary of the {n}-simplex")


RP2_TRIANGLES = ("124", "126", "135", "136", "145", "234", "235", "256", "346", "456")


def rp2() -> NamedExample:
    """The minimal 6-vertex projective plane (non-orientable, so no fundamental cycle)."""
    complex_ = OrderedComplex.from_labeled("rp2", [str(i) for i in range(1, 7)], [list(t) for t in RP2_TRIANGLES])
    generators = z2_cohomology(complex_, 1).representatives
    return NamedExample(complex_, None, {"a": generators[0]}, "6-vertex real projective plane")


def torus() -> NamedExample:
    """Moebius' 7-vertex torus with triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    triangles = []
    for i in range(7):
        for offsets in ((0, 1, 3), (0, 2, 3)):
            triangles.append(sorted((i + o) % 7 for o in offsets))
    complex_ = _oriented(OrderedComplex.from_simplices("torus", [str(i) for i in range(1, 8)], triangles))
    a, b = z2_cohomology(complex_, 1).representatives
    return NamedExample(complex_, complex_.cycle, {"a": a, "b": b}, "7-vertex torus")


# -- unit tangent bundle of S^2 ---------------------------------------------------------------------
#
# Vertices: ("T", x, y) on the boundary torus (x mod 8 along the equator, y mod 4 the level in the upper
# half's fiber coordinates), ("N", y) the north pole copies and ("S", y) the south pole copies.

Vertex = tuple[object, ...]

C_PLUS_SQUARED = (
    "00 31 40", "31 40 52", "21 40 52", "11 40 52", "01 40 52", "01 30 52", "01 13 52", "01 35 52",
    "23 35 52", "05 35 52", "05 35 44", "05 35 56", "05 17 56", "05 31 56", "27 31 56", "00 31 56",
)  # fmt: skip
P_SUPPORT = (
    "21 31 40", "21 31 52", "03 21 52", "15 21 52", "15 33 52", "05 15 52",
    "05 15 44", "05 15 56", "05 27 56", "05 31 56", "17 31 56", "21 31 56",
)  # fmt: skip
T_SUPPORT = ("31 40", "21 52", "11 52", "01 52", "23 52", "33 52", "05 52", "05 44", "05 56", "31 56")
C_CUBED_SUPPORT = "00 31 40 52"
TSS2_F_VECTOR = (40, 232, 384, 192)


def _T(x: int, y: int) -> Vertex:  # noqa: N802
    return ("T", x % 8, y % 4)


def _F(x: int, y1: int) -> Vertex:  # noqa: N802
    """A boundary vertex in the lower half's coordinates, glued by (z1, z2) -> (z1, z1^2 z2)."""
    return _T(x, x + y1)


def _label(v: Vertex) -> str:
    if v[0] == "T":
        x, y = int(v[1]), int(v[2])  # type: ignore[call-overload]
        return f"{(x + y) % 4}{2 * y + (1 if x >= 4 else 0)}"
    y = int(v[1])  # type: ignore[call-overload]
    base = 4 if v[0] == "N" else 6
    return f"{base + y % 2}{2 * y}"


def _lower_level(v: Vertex) -> int:
    """Fiber level in the lower half's coordinates."""
    if v[0] == "T":
        return (int(v[2]) - int(v[1])) % 4  # type: ignore[call-overload]
    return int(v[1])  # type: ignore[call-overload]


def _cone(apex: Vertex, faces: Iterable[tuple[Vertex, ...]]) -> list[frozenset[Vertex]]:
    return [frozenset((*face, apex)) for face in faces]


def _upper_strip(offset: int) -> list[tuple[Vertex, ...]]:
    """Boundary triangles between levels offset and offset + 2, upper-half coordinates."""
    out = []
    for x in range(8):
        y = offset
        out += [
            (_T(x, y), _T(x + 1, y), _T(x + 1, y + 1)),
            (_T(x, y), _T(x + 1, y + 1), _T(x + 1, y + 2)),
            (_T(x, y), _T(x, y + 1), _T(x + 1, y + 2)),
            (_T(x, y + 1), _T(x, y + 2), _T(x + 1, y + 2)),
        ]
    return out


def _lower_rows(rows: Iterable[int]) -> list[tuple[Vertex, ...]]:
    """Boundary triangles of the given unit rows, lower-half coordinates, diagonals in a checkerboard."""
    out = []
    for y1 in rows:
        for x in range(8):
            if (x - y1) % 2 == 0:
                out += [
                    (_F(x, y1), _F(x + 1, y1), _F(x + 1, y1 + 1)),
                    (_F(x, y1), _F(x, y1 + 1), _F(x + 1, y1 + 1)),
                ]
            else:
                out += [
                    (_F(x, y1), _F(x + 1, y1), _F(x, y1 + 1)),
                    (_F(x + 1, y1), _F(x, y1 + 1), _F(x + 1, y1 + 1)),
                ]
    return out


def _disk(level: int, pole: str, vertex: Callable[[int, int], Vertex]) -> list[tuple[Vertex, ...]]:
    return [(vertex(x, level), vertex(x + 1, level), (pole, level)) for x in range(8)]


def _tss2_tetrahedra() -> list[frozenset[Vertex]]:
    upper_boundary = {frozenset(t) for t in _upper_strip(0) + _upper_strip(2)}
    lower_boundary = {frozenset(t) for t in _lower_rows(range(4))}
    if upper_boundary != lower_boundary:
        raise RuntimeError("gluing of the two solid tori does not match on the boundary torus")

    n_disks = {y: _disk(y, "N", _T) for y in (0, 2)}
    s_disks = {y: _disk(y, "S", _F) for y in (0, 2)}
    tets = (
        _cone(("N", 1), n_disks[0] + n_disks[2] + _upper_strip(0))
        + _cone(("N", 3), n_disks[2] + n_disks[0] + _upper_strip(2))
        + _cone(("S", 1), _lower_rows((0, 1)) + s_disks[0] + s_disks[2])
        + _cone(("S", 3), _lower_rows((2, 3)) + s_disks[2] + s_disks[0])
    )
    for tet in tets:
        if len(tet) != 4 or len({_label(v)[0] for v in tet}) != 4:
            raise RuntimeError(f"tetrahedron {sorted(map(_label, tet))} does not have distinct A values")
    return tets


# interior edges of the upper half on which c is nonzero
@lru_cache(maxsize=1)
def _c_plus_interior() -> frozenset[frozenset[Vertex]]:
    edges: set[frozenset[Vertex]] = {frozenset({("N", 0), ("N", 1)})}
    runs = (
        (0, 0, range(4, 8)),
        (0, 1, range(0, 4)),
        (1, 1, range(1, 5)),
        (2, 1, range(2, 6)),
        (2, 2, range(2, 6)),
        (2, 3, range(2, 6)),
        (3, 3, range(3, 7)),
        (0, 3, range(4, 8)),
    )
    for level, pole, xs in runs:
        edges.update(frozenset({_T(x, level), ("N", pole)}) for x in xs)
    return frozenset(edges)


def _c_value(edge: frozenset[Vertex]) -> int:
    if any(v[0] == "N" for v in edge):
        return 1 if edge in _c_plus_interior() else 0
    return 1 if {_lower_level(v) for v in edge} == {0, 1} else 0


def _projection(v: Vertex) -> object:
    return v[1] if v[0] == "T" else v[0]


def _from_labels(complex_: OrderedComplex, groups: Iterable[str], ring: Ring = Ring.Z2) -> Cochain:
    simplices = [complex_.simplex_from_labels(sorted(group.split())) for group in groups]
    return Cochain.indicator(complex_, simplices, ring)


@lru_cache(maxsize=1)
def t_s_sphere() -> NamedExample:
    """The 40-vertex triangulation of the unit tangent bundle of S^2 (= RP^3) with the cochains c, p, t.

    Two solid tori H+ x S^1 and H- x S^1 are glued along their boundary by (z1, z2) -> (z1, z1^2 z2);
    each is split by pole disks at levels 0 and 2 into balls coned from the poles at levels 1 and 3.
    Vertices are labelled AB and ordered lexicographically; every tetrahedron has distinct A values.
    """
    tets = _tss2_tetrahedra()
    vertex_set = sorted({v for tet in tets for v in tet}, key=_label)
    labels = [_label(v) for v in vertex_set]
    facets = [sorted(_label(v) for v in tet) for tet in tets]
    complex_ = OrderedComplex.from_labeled("tss2", labels, facets)
    if complex_.f_vector != TSS2_F_VECTOR:
        raise RuntimeError(f"unexpected f-vector {complex_.f_vector}")

    cycle = fundamental_cycle(complex_)
    calibration = complex_.simplex_from_labels(C_CUBED_SUPPORT.split())
    if cycle.coefficient(calibration) == 1:
        cycle = -cycle
    complex_ = complex_.with_cycle(cycle)

    by_label = dict(zip(labels, vertex_set))
    c_values = {}
    for edge in complex_.simplices_of(1):
        if _c_value(frozenset(by_label[complex_.vertices[i]] for i in edge)):
            c_values[edge] = 1
    c = Cochain.from_values(complex_, 1, Ring.Z2, c_values)

    p_values = {}
    for triangle in complex_.simplices_of(2):
        if {_projection(by_label[complex_.vertices[i]]) for i in triangle} == {6, 7, "N"}:
            p_values[triangle] = 1
    p = Cochain.from_values(complex_, 2, Ring.Z2, p_values)
    t = _from_labels(complex_, T_SUPPORT)
    logger.debug("Built tss2: f-vector %s, |c| = %d, |p| = %d", complex_.f_vector, len(c.values), len(p.values))
    return NamedExample(complex_, cycle, {"c": c, "p": p, "t": t}, "unit tangent bundle of S^2")


BUILTINS: dict[str, Callable[[], NamedExample]] = {
    "sphere1": lambda: simplex_boundary(2),
    "sphere2": lambda: simplex_boundary(3),
    "sphere3": lambda: simplex_boundary(4),
    "rp2": rp2,
    "torus": torus,
    "tss2": t_s_sphere,
}


def builtin(name: str) -> NamedExample:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown built-in complex {name!r}; choose from {', '.join(BUILTINS)}") from None
    return factory()


# -- appendix check ---------------------------------------------------------------------------------


def _step(
    name: str,
    passed: bool,
    detail: str = "",
    complex_: OrderedComplex | None = None,
    offenders: Iterable[tuple[int, ...]] = (),
) -> AppendixStep:
    shown = [complex_.label(s) for s in list(offenders)[:8]] if complex_ is not None else []
    return AppendixStep(name=name, passed=passed, detail=detail, counterexamples=shown)


def _difference(a: Cochain, b: Cochain) -> list[tuple[int, ...]]:
    return sorted(set(a.values) ^ set(b.values))


def verify_appendix() -> AppendixReport:
    """Check the cochain identities behind the value 1/4 of ((1/2)c^3 + (1/4)C^3, c^2, 0) on RP^3."""
    example = t_s_sphere()
    complex_ = example.complex
    cycle = example.fundamental
    assert cycle is not None
    c, p, t = (example.named_cochains[k] for k in ("c", "p", "t"))
    steps: list[AppendixStep] = []

    dc = d(c)
    steps.append(_step("c is a cocycle", dc.is_zero(), f"|dc| = {len(dc.values)}", complex_, dc.support()))

    c2 = cup(c, c)
    north = {complex_.vertex_index(_label(("N", y))) for y in range(4)}
    south = {complex_.vertex_index(_label(("S", y))) for y in range(4)}
    lower_hits = [s for s in c2.support() if not north & set(s)]
    steps.append(_step("(c-)^2 = 0", not lower_hits, "", complex_, lower_hits))

    expected_c2 = _from_labels(complex_, C_PLUS_SQUARED)
    upper_c2 = Cochain(complex_, 2, Ring.Z2, {s: v for s, v in c2.values.items() if not south & set(s)})
    steps.append(
        _step(
            "(c+)^2 support",
            upper_c2 == expected_c2,
            f"{len(upper_c2.values)} simplices",
            complex_,
            _difference(upper_c2, expected_c2),
        )
    )

    big_c = special_lift(c)
    c3 = cup_power(big_c, 3)
    expected_c3 = _from_labels(complex_, [C_CUBED_SUPPORT], Ring.Z)
    steps.append(_step("C^3 support", c3 == expected_c3, "", complex_, _difference(c3, expected_c3)))

    integral = integrate(c3, cycle)
    steps.append(_step("integral of C^3", integral == -1, f"= {integral}"))

    expected_p = _from_labels(complex_, P_SUPPORT)
    p_ok = d(p).is_zero() and p == expected_p
    p_detail = f"{len(p.values)} simplices"
    steps.append(_step("p cocycle and support", p_ok, p_detail, complex_, _difference(p, expected_p)))

    dt = d(t)
    steps.append(_step("p + dt = c^2", p + dt == c2, "", complex_, _difference(p + dt, c2)))

    products = {"t dt": cup(t, dt), "t p": cup(t, p), "p t": cup(p, t)}
    nonzero = [name for name, value in products.items() if not value.is_zero()]
    steps.append(_step("t dt = t p = p t = 0", not nonzero, ", ".join(nonzero)))

    moved = d(cup1(p, t)) == cup1(p, dt)
    zero1 = Cochain.zero(complex_, 1, Ring.Z2)
    zero3 = Cochain.zero(complex_, 3, Ring.QZ)
    shifted = product(Triple(zero3, p, zero1), big_d_prime(t, Cochain.zero(complex_, 0, Ring.Z2)))
    moved = moved and cbar_equal(shifted, Triple(half(cup1(p, dt)), c2, zero1))
    w = half(cup_power(c, 3)) + nth_part(4, c3)
    moved = moved and g_equal(Triple(w, c2, zero1), Triple(w, p, zero1))
    steps.append(_step("(0,p,0) = (0,c^2,0) in G", moved, "via d(p u_1 t) = p u_1 dt"))

    value = (Fraction(integrate(half(cup_power(c, 3)), cycle)) + Fraction(integrate(nth_part(4, c3), cycle))) % 1
    via_pairing = evaluate_g1(extension_cocycle(c, c), cycle, t, 0)
    steps.append(
        _step("evaluation", value == Fraction(1, 4) and via_pairing == value, f"{value}; pairing gives {via_pairing}")
    )

    passed = all(step.passed for step in steps)
    logger.info("Appendix check %s with evaluation %s", "passed" if passed else "failed", value)
    return AppendixReport(steps=steps, evaluation=str(value), passed=passed)
