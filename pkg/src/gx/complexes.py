"""Ordered simplicial complexes, signed chains, fundamental cycles and barycentric subdivision."""

from __future__ import annotations

import itertools
import logging
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, replace
from functools import cached_property

logger = logging.getLogger(__name__)

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Raised when a complex or a map between complexes is malformed."""


class DegreeError(ValueError):
    """Raised when an operation is asked for a degree it does not support."""


class NotAPseudoManifoldError(ValueError):
    pass


class NonOrientableError(ValueError):
    pass


def faces(simplex: Simplex) -> list[Simplex]:
    """Codimension-one faces, ordered by omitted position."""
    return [simplex[:i] + simplex[i + 1 :] for i in range(len(simplex))]


@dataclass(frozen=True)
class SignedChain:
    degree: int
    terms: tuple[tuple[Simplex, int], ...] = ()

    @classmethod
    def from_mapping(cls, degree: int, mapping: Mapping[Simplex, int]) -> SignedChain:
        for simplex in mapping:
            if len(simplex) != degree + 1:
                raise DegreeError(f"Simplex {simplex} does not have degree {degree}")
        return cls(degree, tuple(sorted((s, c) for s, c in mapping.items() if c)))

    def as_dict(self) -> dict[Simplex, int]:
        return dict(self.terms)

    def coefficient(self, simplex: Simplex) -> int:
        return self.as_dict().get(simplex, 0)

    def __neg__(self) -> SignedChain:
        return SignedChain(self.degree, tuple((s, -c) for s, c in self.terms))

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True, eq=False)
class OrderedComplex:
    """A finite simplicial complex whose vertex listing order is a total order.

    Vertices are referred to by their index in ``vertices``; every simplex is a strictly increasing
    tuple of indices and ``simplices[k]`` holds the k-simplices in lexicographic order. Instances are
    immutable; derived lookups are computed once per instance.
    """

    name: str
    vertices: tuple[str, ...]
    simplices: tuple[tuple[Simplex, ...], ...]
    cycle: SignedChain | None = None

    @classmethod
    def from_simplices(
        cls,
        name: str,
        vertices: Sequence[str],
        simplices: Iterable[Sequence[int]],
        cycle: SignedChain | None = None,
    ) -> OrderedComplex:
        """Build a complex from index tuples, adding every face (closure)."""
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise ComplexError("duplicate vertex identifier")
        by_dim: dict[int, set[Simplex]] = {0: {(i,) for i in range(len(vertices))}} if vertices else {}
        for raw in simplices:
            simplex = tuple(raw)
            if not simplex:
                continue
            if any(b <= a for a, b in zip(simplex, simplex[1:])):
                raise ComplexError(f"non-increasing tuple {simplex}")
            if simplex[0] < 0 or simplex[-1] >= len(vertices):
                raise ComplexError(f"simplex {simplex} references an unknown vertex")
            for size in range(1, len(simplex) + 1):
                by_dim.setdefault(size - 1, set()).update(itertools.combinations(simplex, size))
        top = max(by_dim) if by_dim else -1
        layers = tuple(tuple(sorted(by_dim.get(k, ()))) for k in range(top + 1))
        return cls(name=name, vertices=vertices, simplices=layers, cycle=cycle)

    @classmethod
    def from_labeled(
        cls,
        name: str,
        vertices: Sequence[str],
        simplices: Iterable[Sequence[str]],
    ) -> OrderedComplex:
        position = {v: i for i, v in enumerate(vertices)}
        indexed = []
        for labeled in simplices:
            try:
                indexed.append(tuple(position[v] for v in labeled))
            except KeyError as e:
                raise ComplexError(f"simplex references unknown vertex {e.args[0]!r}") from None
        return cls.from_simplices(name, vertices, indexed)

    def with_cycle(self, cycle: SignedChain | None) -> OrderedComplex:
        return replace(self, cycle=cycle)

    # -- identity ---------------------------------------------------------------------------------

    @cached_property
    def _key(self) -> tuple[object, ...]:
        return (self.name, self.vertices, self.simplices, self.cycle)

    @cached_property
    def _hash(self) -> int:
        return hash(self._key)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, OrderedComplex):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"OrderedComplex(name={self.name!r}, f_vector={self.f_vector})"

    # -- lookups ----------------------------------------------------------------------------------

    @property
    def top_dim(self) -> int:
        return len(self.simplices) - 1

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.simplices)

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k <= self.top_dim else 0

    def simplices_of(self, k: int) -> tuple[Simplex, ...]:
        return self.simplices[k] if 0 <= k <= self.top_dim else ()

    @cached_property
    def _index(self) -> tuple[dict[Simplex, int], ...]:
        return tuple({s: i for i, s in enumerate(layer)} for layer in self.simplices)

    @cached_property
    def _vertex_position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def index(self, simplex: Simplex) -> int:
        try:
            return self._index[len(simplex) - 1][simplex]
        except (IndexError, KeyError):
            raise ComplexError(f"{self.label(simplex)} is not a simplex of {self.name}") from None

    def contains(self, simplex: Simplex) -> bool:
        k = len(simplex) - 1
        return 0 <= k <= self.top_dim and simplex in self._index[k]

    def vertex_index(self, vertex_id: str) -> int:
        try:
            return self._vertex_position[vertex_id]
        except KeyError:
            raise ComplexError(f"unknown vertex {vertex_id!r}") from None

    def simplex_from_labels(self, labels: Sequence[str]) -> Simplex:
        simplex = tuple(self.vertex_index(v) for v in labels)
        if any(b <= a for a, b in zip(simplex, simplex[1:])):
            raise ComplexError(f"non-increasing tuple {tuple(labels)}")
        if not self.contains(simplex):
            raise ComplexError(f"({','.join(labels)}) is not a simplex of {self.name}")
        return simplex

    def label(self, simplex: Simplex) -> str:
        return "(" + ",".join(self.vertices[i] if 0 <= i < len(self.vertices) else "?" for i in simplex) + ")"

    @cached_property
    def cofaces(self) -> tuple[tuple[tuple[tuple[Simplex, int], ...], ...], ...]:
        """For each k and each k-simplex (by index): the (k+1)-simplices containing it, with the
        coboundary sign (-1)^i where i is the position of the omitted vertex."""
        table: list[list[list[tuple[Simplex, int]]]] = [[[] for _ in layer] for layer in self.simplices]
        for k in range(1, self.top_dim + 1):
            lower = self._index[k - 1]
            for sigma in self.simplices[k]:
                for i, face in enumerate(faces(sigma)):
                    table[k - 1][lower[face]].append((sigma, -1 if i % 2 else 1))
        return tuple(tuple(tuple(entries) for entries in layer) for layer in table)


@dataclass(frozen=True)
class SimplicialMap:
    """A vertex map between ordered complexes, stored as target vertex index per source vertex."""

    source: OrderedComplex
    target: OrderedComplex
    vertex_map: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertex_map) != len(self.source.vertices):
            raise ComplexError("vertex map must assign every source vertex")
        for k in range(self.source.top_dim + 1):
            for sigma in self.source.simplices[k]:
                images = [self.vertex_map[v] for v in sigma]
                if any(b < a for a, b in zip(images, images[1:])):
                    raise ComplexError(f"map is decreasing on {self.source.label(sigma)}")
                if not self.target.contains(tuple(sorted(set(images)))):
                    raise ComplexError(f"image of {self.source.label(sigma)} is not a simplex of the target")

    @classmethod
    def from_labels(
        cls, source: OrderedComplex, target: OrderedComplex, mapping: Mapping[str, str]
    ) -> SimplicialMap:
        return cls(source, target, tuple(target.vertex_index(mapping[v]) for v in source.vertices))

    @classmethod
    def identity(cls, complex_: OrderedComplex) -> SimplicialMap:
        return cls(complex_, complex_, tuple(range(len(complex_.vertices))))

    def image(self, simplex: Simplex) -> Simplex | None:
        """Image of a simplex, or None when it collapses to a lower-dimensional one."""
        images = tuple(self.vertex_map[v] for v in simplex)
        if len(set(images)) < len(images):
            return None
        return images


def coboundary_rows(complex_: OrderedComplex, k: int) -> list[dict[int, int]]:
    """Sparse rows of d: C^k -> C^{k+1}, one row per (k+1)-simplex, keyed by k-simplex index."""
    if k < 0:
        raise DegreeError(f"degree {k} out of range")
    if k + 1 > complex_.top_dim:
        return []
    lower = complex_._index[k]
    rows = []
    for sigma in complex_.simplices[k + 1]:
        row: dict[int, int] = {}
        for i, face in enumerate(faces(sigma)):
            row[lower[face]] = -1 if i % 2 else 1
        rows.append(row)
    return rows


def coboundary_matrix(complex_: OrderedComplex, k: int) -> list[list[int]]:
    """Dense matrix of d: C^k -> C^{k+1} in the simplex bases (rows: (k+1)-simplices)."""
    if not 0 <= k < complex_.top_dim:
        raise DegreeError(f"coboundary degree {k} out of range for a complex of dimension {complex_.top_dim}")
    width = complex_.count(k)
    matrix = []
    for row in coboundary_rows(complex_, k):
        dense = [0] * width
        for j, value in row.items():
            dense[j] = value
        matrix.append(dense)
    return matrix


def chain_boundary(complex_: OrderedComplex, chain: SignedChain) -> SignedChain:
    out: dict[Simplex, int] = {}
    for sigma, coefficient in chain.terms:
        if not complex_.contains(sigma):
            raise ComplexError(f"{complex_.label(sigma)} is not a simplex of {complex_.name}")
        if chain.degree == 0:
            continue
        for i, face in enumerate(faces(sigma)):
            out[face] = out.get(face, 0) + (-coefficient if i % 2 else coefficient)
    return SignedChain.from_mapping(max(chain.degree - 1, 0), out)


def _check_pseudo_manifold(complex_: OrderedComplex) -> int:
    n = complex_.top_dim
    if n < 1:
        raise NotAPseudoManifoldError(
            f"{complex_.name} has dimension {n}; a closed pseudo-manifold needs dimension >= 1"
        )
    for k in range(n):
        for idx, entries in enumerate(complex_.cofaces[k]):
            if k == n - 1 and len(entries) != 2:
                face = complex_.simplices[k][idx]
                raise NotAPseudoManifoldError(
                    f"{complex_.label(face)} lies in {len(entries)} top simplices; a closed pseudo-manifold needs 2"
                )
            if not entries:
                raise NotAPseudoManifoldError(f"{complex_.label(complex_.simplices[k][idx])} is not in a top simplex")
    return n


def fundamental_cycle(complex_: OrderedComplex) -> SignedChain:
    """The orientation cycle of a closed orientable pseudo-manifold.

    A cycle attached to the complex is validated and returned. Otherwise signs are propagated across
    shared codimension-one faces starting from the lexicographically last top simplex with coefficient +1.
    """
    n = _check_pseudo_manifold(complex_)
    if complex_.cycle is not None:
        _validate_cycle(complex_, complex_.cycle)
        return complex_.cycle

    tops = complex_.simplices[n]
    top_index = complex_._index[n]
    lower = complex_._index[n - 1]
    # (face index) -> [(top index, position of face in top)]
    incidence: list[list[tuple[int, int]]] = [[] for _ in complex_.simplices[n - 1]]
    for t, sigma in enumerate(tops):
        for i, face in enumerate(faces(sigma)):
            incidence[lower[face]].append((t, i))

    signs: list[int] = [0] * len(tops)
    seed = top_index[tops[-1]]
    signs[seed] = 1
    queue = deque([seed])
    while queue:
        t = queue.popleft()
        for i, face in enumerate(faces(tops[t])):
            for other, j in incidence[lower[face]]:
                if other == t:
                    continue
                wanted = -signs[t] * (-1 if (i + j) % 2 else 1)
                if signs[other] == 0:
                    signs[other] = wanted
                    queue.append(other)
                elif signs[other] != wanted:
                    raise NonOrientableError(f"{complex_.name} is non-orientable")
    if not all(signs):
        raise NotAPseudoManifoldError(f"{complex_.name} is not connected through codimension-one faces")
    logger.debug("Propagated orientation over %d top simplices of %s", len(tops), complex_.name)
    return SignedChain(n, tuple(zip(tops, signs)))


def _validate_cycle(complex_: OrderedComplex, cycle: SignedChain) -> None:
    n = complex_.top_dim
    if cycle.degree != n:
        raise NotAPseudoManifoldError(f"supplied cycle has degree {cycle.degree}, expected {n}")
    coefficients = cycle.as_dict()
    for sigma in complex_.simplices[n]:
        if abs(coefficients.get(sigma, 0)) != 1:
            raise NotAPseudoManifoldError(f"supplied cycle must have coefficient +-1 on {complex_.label(sigma)}")
    if len(coefficients) != len(complex_.simplices[n]):
        raise NotAPseudoManifoldError("supplied cycle has terms outside the complex")
    boundary = chain_boundary(complex_, cycle)
    if boundary.terms:
        face, _ = boundary.terms[0]
        raise NotAPseudoManifoldError(f"supplied cycle has nonzero boundary at {complex_.label(face)}")


def _permutation_sign(sequence: Sequence[int]) -> int:
    sign = 1
    items = list(sequence)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def barycentric_subdivision(complex_: OrderedComplex) -> tuple[OrderedComplex, SimplicialMap]:
    """First barycentric subdivision and the projection sending each barycenter to its greatest vertex.

    Barycenters are ordered by the dimension of their simplex, then lexicographically. A vertex keeps
    its identifier; a higher simplex becomes ``[a.b.c]``.
    """
    ordered = [s for layer in complex_.simplices for s in layer]
    position = {s: i for i, s in enumerate(ordered)}

    def ident(s: Simplex) -> str:
        if len(s) == 1:
            return complex_.vertices[s[0]]
        return "[" + ".".join(complex_.vertices[v] for v in s) + "]"

    # chains[s] = every flag ending at s, as tuples of barycenter indices
    chains: dict[Simplex, list[tuple[int, ...]]] = {}
    for s in ordered:
        found = [(position[s],)]
        if len(s) > 1:
            for size in range(1, len(s)):
                for face in itertools.combinations(s, size):
                    found.extend(flag + (position[s],) for flag in chains[face])
        chains[s] = found

    flags = [flag for s in ordered for flag in chains[s]]
    subdivided = OrderedComplex.from_simplices(f"sd({complex_.name})", [ident(s) for s in ordered], flags)

    if complex_.cycle is not None:
        terms: dict[Simplex, int] = {}
        for sigma, coefficient in complex_.cycle.terms:
            for flag in chains[sigma]:
                if len(flag) != len(sigma):
                    continue
                added = [next(iter(set(ordered[b]) - set(ordered[a]))) for a, b in zip(flag, flag[1:])]
                order = [ordered[flag[0]][0], *added]
                terms[flag] = coefficient * _permutation_sign(order)
        subdivided = subdivided.with_cycle(SignedChain.from_mapping(complex_.cycle.degree, terms))

    projection = SimplicialMap(subdivided, complex_, tuple(s[-1] for s in ordered))
    logger.debug("Subdivided %s: f-vector %s -> %s", complex_.name, complex_.f_vector, subdivided.f_vector)
    return subdivided, projection


def _renamed(complex_: OrderedComplex, taken: set[str]) -> list[str]:
    return [v if v not in taken else f"{complex_.name}_{v}" for v in complex_.vertices]


def wedge(x: OrderedComplex, y: OrderedComplex, name: str | None = None) -> OrderedComplex:
    """Glue the first vertex of ``y`` onto the first vertex of ``x``.

    The remaining vertices of ``y`` follow those of ``x``, so both vertex orders survive.
    """
    if not x.vertices or not y.vertices:
        raise ComplexError("cannot wedge an empty complex")
    offset = len(x.vertices) - 1
    labels = list(x.vertices) + _renamed(y, set(x.vertices))[1:]
    moved = [tuple(0 if v == 0 else v + offset for v in s) for layer in y.simplices for s in layer]
    facets = [s for layer in x.simplices for s in layer] + moved
    return OrderedComplex.from_simplices(name or f"{x.name}v{y.name}", labels, facets)


def join(x: OrderedComplex, y: OrderedComplex, name: str | None = None) -> OrderedComplex:
    """Simplicial join; every vertex of ``x`` precedes every vertex of ``y``."""
    offset = len(x.vertices)
    labels = list(x.vertices) + _renamed(y, set(x.vertices))
    left: list[Simplex] = [(), *(s for layer in x.simplices for s in layer)]
    right: list[Simplex] = [(), *(tuple(v + offset for v in t) for layer in y.simplices for t in layer)]
    return OrderedComplex.from_simplices(name or f"{x.name}*{y.name}", labels, [s + t for s in left for t in right])
