"""Cochains with coefficients, the coboundary, cup and cup_i products, special lifts and coefficient maps."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .complexes import DegreeError, OrderedComplex, SignedChain, Simplex, SimplicialMap

logger = logging.getLogger(__name__)

Value = int | Fraction


class CochainError(ValueError):
    pass


class RingMismatchError(CochainError):
    pass


class UnsupportedBidegreeError(CochainError):
    pass


class Ring(Enum):
    Z = "z"
    Z2 = "z2"
    Z4 = "z4"
    QZ = "qz"

    @classmethod
    def parse(cls, tag: str) -> Ring:
        try:
            return cls(tag.lower())
        except ValueError:
            raise CochainError(f"unknown ring tag {tag!r}; expected one of z, z2, z4, qz") from None

    @property
    def modulus(self) -> int | None:
        return {Ring.Z: None, Ring.Z2: 2, Ring.Z4: 4, Ring.QZ: 1}[self]

    def normalize(self, value: Value) -> Value:
        if self is Ring.QZ:
            return Fraction(value) % 1
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise CochainError(f"value {value} is not an integer")
            value = value.numerator
        if self is Ring.Z:
            return int(value)
        return int(value) % (2 if self is Ring.Z2 else 4)

    def format(self, value: Value) -> str:
        if self is Ring.QZ:
            value = Fraction(value)
            return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
        return str(value)


@dataclass(frozen=True, eq=False)
class Cochain:
    """A sparse k-cochain on an ordered complex. Absent simplices evaluate to zero.

    The constructor trusts ``values`` to be normalized (keys of degree k, no zeros, values reduced
    in the ring); :meth:`from_values` validates arbitrary input.
    """

    complex: OrderedComplex
    degree: int
    ring: Ring
    values: Mapping[Simplex, Value]

    @classmethod
    def from_values(
        cls, complex_: OrderedComplex, degree: int, ring: Ring, values: Mapping[Simplex, Value]
    ) -> Cochain:
        if degree < 0:
            raise DegreeError(f"cochain degree {degree} is negative")
        clean: dict[Simplex, Value] = {}
        for simplex, raw in values.items():
            if len(simplex) != degree + 1:
                raise CochainError(f"{complex_.label(simplex)} does not have degree {degree}")
            if not complex_.contains(simplex):
                raise CochainError(f"{complex_.label(simplex)} is not a simplex of {complex_.name}")
            value = ring.normalize(raw)
            if value:
                clean[simplex] = value
        return cls(complex_, degree, ring, clean)

    @classmethod
    def zero(cls, complex_: OrderedComplex, degree: int, ring: Ring) -> Cochain:
        return cls(complex_, degree, ring, {})

    @classmethod
    def indicator(cls, complex_: OrderedComplex, simplices: Iterable[Simplex], ring: Ring) -> Cochain:
        simplices = list(simplices)
        if not simplices:
            raise CochainError("indicator needs at least one simplex")
        return cls.from_values(complex_, len(simplices[0]) - 1, ring, {s: 1 for s in simplices})

    # -- GF(2) bit vectors: bit i is the i-th simplex of the degree ---------------------------------

    @classmethod
    def from_bits(cls, complex_: OrderedComplex, degree: int, bits: int) -> Cochain:
        layer = complex_.simplices_of(degree)
        values: dict[Simplex, Value] = {}
        while bits:
            low = bits & -bits
            values[layer[low.bit_length() - 1]] = 1
            bits ^= low
        return cls(complex_, degree, Ring.Z2, values)

    def to_bits(self) -> int:
        if self.ring is not Ring.Z2:
            raise RingMismatchError("bit vectors are only defined for Z/2 cochains")
        bits = 0
        for simplex in self.values:
            bits |= 1 << self.complex.index(simplex)
        return bits

    def to_vector(self) -> list[Value]:
        layer = self.complex.simplices_of(self.degree)
        return [self.values.get(s, 0) for s in layer]

    @classmethod
    def from_vector(cls, complex_: OrderedComplex, degree: int, ring: Ring, vector: Iterable[Value]) -> Cochain:
        layer = complex_.simplices_of(degree)
        values = list(vector)
        if len(values) != len(layer):
            raise CochainError(f"vector has {len(values)} entries, expected {len(layer)}")
        return cls.from_values(complex_, degree, ring, dict(zip(layer, values)))

    # -- arithmetic --------------------------------------------------------------------------------

    def __getitem__(self, simplex: Simplex) -> Value:
        return self.values.get(simplex, 0)

    def is_zero(self) -> bool:
        return not self.values

    def support(self) -> list[Simplex]:
        return sorted(self.values)

    def _check_compatible(self, other: Cochain) -> None:
        if self.complex != other.complex:
            raise CochainError("cochains live on different complexes")
        if self.degree != other.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")
        if self.ring is not other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring.value} vs {other.ring.value}")

    def _combine(self, other: Cochain, sign: int) -> Cochain:
        self._check_compatible(other)
        out = dict(self.values)
        normalize = self.ring.normalize
        for simplex, value in other.values.items():
            total = normalize(out.get(simplex, 0) + sign * value)
            if total:
                out[simplex] = total
            else:
                out.pop(simplex, None)
        return Cochain(self.complex, self.degree, self.ring, out)

    def __add__(self, other: Cochain) -> Cochain:
        return self._combine(other, 1)

    def __sub__(self, other: Cochain) -> Cochain:
        return self._combine(other, -1)

    def __neg__(self) -> Cochain:
        return self.scale(-1)

    def scale(self, factor: int) -> Cochain:
        normalize = self.ring.normalize
        out = {s: normalize(factor * v) for s, v in self.values.items()}
        return Cochain(self.complex, self.degree, self.ring, {s: v for s, v in out.items() if v})

    def __rmul__(self, factor: int) -> Cochain:
        return self.scale(factor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.ring is other.ring
            and self.complex == other.complex
            and dict(self.values) == dict(other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        shown = ", ".join(f"{self.complex.label(s)}={self.ring.format(v)}" for s, v in sorted(self.values.items())[:6])
        more = "" if len(self.values) <= 6 else f", ... {len(self.values) - 6} more"
        return f"Cochain(deg={self.degree}, ring={self.ring.value}, {{{shown}{more}}})"


# -- coefficient morphisms --------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientMorphism:
    """An additive map between coefficient rings, applied entrywise to cochains."""

    tag: str
    source: Ring
    target: Ring
    n: int = 1

    def apply(self, value: Value) -> Value:
        if self.tag == "mod2":
            return int(value) % 2
        if self.tag == "mod4":
            return int(value) % 4
        if self.tag == "double":
            return (2 * int(value)) % 4
        # half, quarter4 and nth all send 1 to 1/n
        return Fraction(int(value), self.n) % 1


MOD2 = CoefficientMorphism("mod2", Ring.Z, Ring.Z2)
MOD4 = CoefficientMorphism("mod4", Ring.Z, Ring.Z4)
DOUBLE = CoefficientMorphism("double", Ring.Z2, Ring.Z4)
HALF = CoefficientMorphism("half", Ring.Z2, Ring.QZ, 2)
QUARTER4 = CoefficientMorphism("quarter4", Ring.Z4, Ring.QZ, 4)


def nth(n: int) -> CoefficientMorphism:
    if n < 1:
        raise CochainError(f"nth needs a positive integer, got {n}")
    return CoefficientMorphism("nth", Ring.Z, Ring.QZ, n)


def map_coefficients(morphism: CoefficientMorphism, c: Cochain) -> Cochain:
    if c.ring is not morphism.source:
        raise RingMismatchError(
            f"{morphism.tag} maps {morphism.source.value} cochains, got a {c.ring.value} cochain"
        )
    out = {}
    for simplex, value in c.values.items():
        image = morphism.apply(value)
        if image:
            out[simplex] = image
    return Cochain(c.complex, c.degree, morphism.target, out)


def half(c: Cochain) -> Cochain:
    return map_coefficients(HALF, c)


def nth_part(n: int, c: Cochain) -> Cochain:
    """(1/n) c for an integral cochain c, as a Q/Z cochain."""
    return map_coefficients(nth(n), c)


# -- coboundary and products ------------------------------------------------------------------------


def d(c: Cochain) -> Cochain:
    """Simplicial coboundary (dc)(v0..v_{k+1}) = sum_i (-1)^i c(v0..^vi..v_{k+1}).

    A cochain of degree >= top_dim has zero coboundary.
    """
    complex_ = c.complex
    k = c.degree
    if k + 1 > complex_.top_dim:
        return Cochain.zero(complex_, k + 1, c.ring)
    cofaces = complex_.cofaces[k]
    index = complex_._index[k]
    acc: dict[Simplex, Value] = {}
    for simplex, value in c.values.items():
        for sigma, sign in cofaces[index[simplex]]:
            acc[sigma] = acc.get(sigma, 0) + sign * value
    normalize = c.ring.normalize
    out = {}
    for sigma, value in acc.items():
        value = normalize(value)
        if value:
            out[sigma] = value
    return Cochain(complex_, k + 1, c.ring, out)


def _check_product(x: Cochain, y: Cochain) -> None:
    if x.complex != y.complex:
        raise CochainError("cochains live on different complexes")
    if x.ring is not y.ring:
        raise RingMismatchError(f"ring mismatch: {x.ring.value} vs {y.ring.value}; map coefficients first")
    if x.ring is Ring.QZ:
        raise RingMismatchError("products are not defined for Q/Z cochains")


def _assemble(x: Cochain, degree: int, terms: Iterable[tuple[Simplex, int]]) -> Cochain:
    normalize = x.ring.normalize
    out = {}
    for sigma, value in terms:
        value = normalize(value)
        if value:
            out[sigma] = value
    return Cochain(x.complex, degree, x.ring, out)


def cup(x: Cochain, y: Cochain) -> Cochain:
    """Alexander-Whitney product (x u y)(v0..v_{m+n}) = x(v0..vm) y(vm..v_{m+n})."""
    _check_product(x, y)
    m, n = x.degree, y.degree
    xv, yv = x.values, y.values
    if not xv or not yv:
        return Cochain.zero(x.complex, m + n, x.ring)

    def terms() -> Iterable[tuple[Simplex, int]]:
        for sigma in x.complex.simplices_of(m + n):
            front = xv.get(sigma[: m + 1])
            if front:
                back = yv.get(sigma[m:])
                if back:
                    yield sigma, front * back

    return _assemble(x, m + n, terms())


def cup1(x: Cochain, y: Cochain) -> Cochain:
    """Steenrod's cup_1 product in bidegrees (1,1), (1,2), (2,1) and (2,2)."""
    _check_product(x, y)
    bidegree = (x.degree, y.degree)
    xv, yv = x.values, y.values
    if bidegree == (1, 1):
        degree = 1
        terms = ((e, -xv[e] * yv[e]) for e in xv if e in yv)
    elif bidegree == (1, 2):
        degree = 2
        terms = ((s, -xv.get((s[0], s[2]), 0) * yv[s]) for s in yv)
    elif bidegree == (2, 1):
        degree = 2
        terms = ((s, xv[s] * (yv.get(s[0:2], 0) + yv.get(s[1:3], 0))) for s in xv)
    elif bidegree == (2, 2):
        degree = 3
        terms = (
            (
                s,
                xv.get((s[0], s[1], s[3]), 0) * yv.get(s[1:4], 0)
                - xv.get((s[0], s[2], s[3]), 0) * yv.get(s[0:3], 0),
            )
            for s in x.complex.simplices_of(3)
        )
    else:
        raise UnsupportedBidegreeError(f"cup_1 is not implemented in bidegree {bidegree}")
    return _assemble(x, degree, terms)


def cup2(p: Cochain, q: Cochain) -> Cochain:
    """cup_2 of two 2-cochains: (p u_2 q)(012) = -p(012) q(012)."""
    _check_product(p, q)
    if (p.degree, q.degree) != (2, 2):
        raise UnsupportedBidegreeError(f"cup_2 is only implemented in bidegree (2, 2), got {(p.degree, q.degree)}")
    qv = q.values
    return _assemble(p, 2, ((s, -v * qv[s]) for s, v in p.values.items() if s in qv))


def cup_power(x: Cochain, n: int) -> Cochain:
    if n < 1:
        raise CochainError("cup powers start at 1")
    result = x
    for _ in range(n - 1):
        result = cup(result, x)
    return result


def special_lift(x: Cochain) -> Cochain:
    """The integral lift of a Z/2 cochain taking only the values 0 and 1."""
    if x.ring is not Ring.Z2:
        raise RingMismatchError(f"special lifts start from Z/2 cochains, got {x.ring.value}")
    return Cochain(x.complex, x.degree, Ring.Z, dict.fromkeys(x.values, 1))


def pontrjagin_square_sq(a: Cochain) -> Cochain:
    """P(a^2) = A^4 mod 4 for a Z/2 1-cocycle a with special lift A."""
    if a.ring is not Ring.Z2 or a.degree != 1:
        raise CochainError("the Pontrjagin square of a^2 needs a Z/2 1-cochain")
    if not d(a).is_zero():
        raise CochainError("a is not a cocycle")
    return map_coefficients(MOD4, cup_power(special_lift(a), 4))


# -- functoriality and evaluation -------------------------------------------------------------------


def pullback_cochain(f: SimplicialMap, c: Cochain) -> Cochain:
    """(f*c)(s) = c(f(s)), with zero on simplices whose image is degenerate."""
    if c.complex != f.target:
        raise CochainError("cochain does not live on the target of the map")
    out: dict[Simplex, Value] = {}
    if c.values:
        for sigma in f.source.simplices_of(c.degree):
            image = f.image(sigma)
            if image is not None:
                value = c.values.get(image)
                if value:
                    out[sigma] = value
    return Cochain(f.source, c.degree, c.ring, out)


def integrate(c: Cochain, z: SignedChain) -> Value:
    """Evaluate a cochain on a chain, in the ring of the cochain."""
    if c.degree != z.degree:
        raise DegreeError(f"cannot integrate a degree {c.degree} cochain over a degree {z.degree} chain")
    total: Value = 0
    for simplex, coefficient in z.terms:
        value = c.values.get(simplex)
        if value:
            total += coefficient * value
    return c.ring.normalize(total)
