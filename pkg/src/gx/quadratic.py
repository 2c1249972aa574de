"""Quadratic functions on Z^2(X; Z/2) refining (1/2) of the cup_1 pairing over a fundamental cycle."""

from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .cochains import Cochain, Ring, cup, cup1, d, integrate
from .complexes import OrderedComplex, SignedChain, faces
from .linalg import DimensionMismatchError, GF2Basis, GF2System, z2_coboundary_system

logger = logging.getLogger(__name__)

PAIR_SAMPLES = 32


@dataclass(frozen=True)
class SpinQuadraticBasis:
    """Ordered basis of Z^2(X; Z/2): coboundaries dt first (with their primitive t), then the rest."""

    complex: OrderedComplex
    cocycles: tuple[Cochain, ...]
    primitives: tuple[Cochain | None, ...]

    def __len__(self) -> int:
        return len(self.cocycles)

    @cached_property
    def _system(self) -> GF2System:
        rows = [0] * self.complex.count(2)
        for j, z in enumerate(self.cocycles):
            for simplex in z.values:
                rows[self.complex.index(simplex)] |= 1 << j
        return GF2System(rows, len(self.cocycles))

    def coordinates(self, p: Cochain) -> tuple[int, ...]:
        found = self._system.solve(p.to_bits())
        if found is None:
            raise ValueError("cochain is not a 2-cocycle")
        return tuple((found >> j) & 1 for j in range(len(self.cocycles)))


def spin_quadratic_basis(complex_: OrderedComplex) -> SpinQuadraticBasis:
    basis = GF2Basis()
    cocycles: list[Cochain] = []
    primitives: list[Cochain | None] = []
    for edge in complex_.simplices_of(1):
        t = Cochain.indicator(complex_, [edge], Ring.Z2)
        dt = d(t)
        if basis.insert(dt.to_bits()):
            cocycles.append(dt)
            primitives.append(t)
    for z in z2_coboundary_system(complex_, 2).kernel():
        if basis.insert(z):
            cocycles.append(Cochain.from_bits(complex_, 2, z))
            primitives.append(None)
    exact = sum(p is not None for p in primitives)
    logger.debug("Z^2(%s): %d basis cocycles, %d exact", complex_.name, len(cocycles), exact)
    return SpinQuadraticBasis(complex_, tuple(cocycles), tuple(primitives))


def _pairing(p: Cochain, q: Cochain, cycle: SignedChain) -> Fraction:
    """(1/2) of the integral of p u_1 q, as an element of Q/Z."""
    return Fraction(int(integrate(cup1(p, q), cycle)), 2) % 1


def _check_values(basis: SpinQuadraticBasis, values: Sequence[Fraction]) -> None:
    if len(values) != len(basis):
        raise DimensionMismatchError(f"quadratic function has {len(values)} values for a basis of {len(basis)}")


def extend_quadratic(
    basis: SpinQuadraticBasis, values: Sequence[Fraction], cycle: SignedChain, p: Cochain
) -> Fraction:
    """Q(p) from the basis values using Q(p + q) = Q(p) + Q(q) + (1/2) int p u_1 q."""
    _check_values(basis, values)
    chosen = [j for j, bit in enumerate(basis.coordinates(p)) if bit]
    total = sum((Fraction(values[j]) for j in chosen), Fraction(0))
    running = Cochain.zero(basis.complex, 2, Ring.Z2)
    for j in chosen:
        total += _pairing(running, basis.cocycles[j], cycle)
        running = running + basis.cocycles[j]
    return total % 1


def validate_spin_quadratic(
    basis: SpinQuadraticBasis, values: Sequence[Fraction], cycle: SignedChain, seed: int = 0
) -> bool:
    """Check Q(dt) = (1/2) int t dt on every edge indicator and the pair rule on random pairs."""
    _check_values(basis, values)
    complex_ = basis.complex
    for z, q in zip(basis.cocycles, values):
        if (2 * Fraction(q) - _pairing(z, z, cycle)) % 1:
            return False
    for edge in complex_.simplices_of(1):
        t = Cochain.indicator(complex_, [edge], Ring.Z2)
        dt = d(t)
        expected = Fraction(int(integrate(cup(t, dt), cycle)), 2) % 1
        if extend_quadratic(basis, values, cycle, dt) != expected:
            logger.debug("Q(dt) check failed on edge %s", complex_.label(edge))
            return False
    rng = random.Random(seed)
    n = len(basis)
    for _ in range(PAIR_SAMPLES if n else 0):
        p = _combine(basis, rng.getrandbits(n))
        q = _combine(basis, rng.getrandbits(n))
        lhs = extend_quadratic(basis, values, cycle, p + q)
        rhs = extend_quadratic(basis, values, cycle, p) + extend_quadratic(basis, values, cycle, q)
        if (lhs - rhs - _pairing(p, q, cycle)) % 1:
            return False
    return True


def _combine(basis: SpinQuadraticBasis, bits: int) -> Cochain:
    total = Cochain.zero(basis.complex, 2, Ring.Z2)
    for j, z in enumerate(basis.cocycles):
        if (bits >> j) & 1:
            total = total + z
    return total


def quadratic_difference(
    basis: SpinQuadraticBasis,
    first: Sequence[Fraction],
    second: Sequence[Fraction],
    cycle: SignedChain,
) -> Cochain | None:
    """A Z/2 1-cocycle b with Q1(p) - Q2(p) = (1/2) int p u b on the basis, or None."""
    _check_values(basis, first)
    _check_values(basis, second)
    complex_ = basis.complex
    edges = complex_.simplices_of(1)
    coefficients = cycle.as_dict()
    rows: list[int] = []
    rhs: list[int] = []
    for triangle in complex_.simplices_of(2):
        rows.append(sum(1 << complex_.index(face) for face in faces(triangle)))
        rhs.append(0)
    for z, q1, q2 in zip(basis.cocycles, first, second):
        delta = 2 * (Fraction(q1) - Fraction(q2)) % 2
        if delta.denominator != 1:
            return None
        row = 0
        for tet in complex_.simplices_of(3):
            if coefficients.get(tet, 0) % 2 and z[tet[:3]]:
                row ^= 1 << complex_.index(tet[2:])
        rows.append(row)
        rhs.append(int(delta) % 2)
    system = GF2System(rows, len(edges))
    found = system.solve(sum(1 << i for i, bit in enumerate(rhs) if bit))
    return None if found is None else Cochain.from_bits(complex_, 1, found)

