"""Z/4-valued quadratic refinements of Z/2 bilinear forms and their Z/8 Arf invariant via exact Gauss sums."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .linalg import GF2System

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 24


class QuadraticFormError(ValueError):
    pass


class DimensionCapError(ValueError):
    pass


@dataclass(frozen=True)
class Zeta8Integer:
    """c0 + c1 z + c2 z^2 + c3 z^3 with z a primitive 8th root of unity (z^4 = -1)."""

    c0: int = 0
    c1: int = 0
    c2: int = 0
    c3: int = 0

    @property
    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __add__(self, other: Zeta8Integer) -> Zeta8Integer:
        return Zeta8Integer(*(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: Zeta8Integer) -> Zeta8Integer:
        return Zeta8Integer(*(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> Zeta8Integer:
        return Zeta8Integer(*(-a for a in self.coefficients))

    def __mul__(self, other: Zeta8Integer) -> Zeta8Integer:
        out = [0, 0, 0, 0]
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j, b in enumerate(other.coefficients):
                k = i + j
                if k >= 4:
                    out[k - 4] -= a * b
                else:
                    out[k] += a * b
        return Zeta8Integer(*out)

    def conjugate(self) -> Zeta8Integer:
        return Zeta8Integer(self.c0, -self.c3, -self.c2, -self.c1)

    def norm(self) -> int:
        """|x|^2, an integer for elements of Z[i]; raises if the product is not rational."""
        product = self * self.conjugate()
        if product.c1 or product.c2 or product.c3:
            raise QuadraticFormError(f"norm {product} is not rational")
        return product.c0

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    @classmethod
    def root(cls, k: int) -> Zeta8Integer:
        k %= 8
        sign = -1 if k >= 4 else 1
        coefficients = [0, 0, 0, 0]
        coefficients[k % 4] = sign
        return cls(*coefficients)


SQRT2 = Zeta8Integer(0, 1, 0, -1)


@dataclass(frozen=True)
class QuadraticForm:
    """Q: (Z/2)^n -> Z/4 with Q(x + y) = Q(x) + Q(y) + 2 B(x, y), given by B and Q on the standard basis."""

    name: str
    n: int
    bilinear: tuple[tuple[int, ...], ...]
    q_basis: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise QuadraticFormError(f"dimension must be non-negative, got {self.n}")
        if len(self.bilinear) != self.n or any(len(row) != self.n for row in self.bilinear):
            raise QuadraticFormError(f"bilinear form must be {self.n}x{self.n}")
        if len(self.q_basis) != self.n:
            raise QuadraticFormError(f"expected {self.n} q values, got {len(self.q_basis)}")
        for i, row in enumerate(self.bilinear):
            for j, value in enumerate(row):
                if value not in (0, 1):
                    raise QuadraticFormError(f"B[{i}][{j}] = {value} is not in Z/2")
                if value != self.bilinear[j][i]:
                    raise QuadraticFormError(f"bilinear form is not symmetric at ({i}, {j})")
        for i, q in enumerate(self.q_basis):
            if q not in (0, 1, 2, 3):
                raise QuadraticFormError(f"q[{i}] = {q} is not in Z/4")
            if q % 2 != self.bilinear[i][i]:
                raise QuadraticFormError(f"q[{i}] = {q} disagrees with B[{i}][{i}] mod 2")

    @classmethod
    def build(cls, bilinear: Sequence[Sequence[int]], q_basis: Sequence[int], name: str = "form") -> QuadraticForm:
        matrix = tuple(tuple(int(x) for x in row) for row in bilinear)
        return cls(name, len(q_basis), matrix, tuple(int(q) for q in q_basis))

    def row_masks(self) -> list[int]:
        return [sum(1 << j for j, value in enumerate(row) if value) for row in self.bilinear]


def evaluate_q(f: QuadraticForm, v: Sequence[int]) -> int:
    """Q(sum v_i e_i) by polarization."""
    if len(v) != f.n:
        raise QuadraticFormError(f"vector has {len(v)} entries, expected {f.n}")
    support = [i for i, x in enumerate(v) if x % 2]
    total = sum(f.q_basis[i] for i in support)
    for k, i in enumerate(support):
        for j in support[k + 1 :]:
            total += 2 * f.bilinear[i][j]
    return total % 4


def gauss_sum(f: QuadraticForm, max_dim: int = DEFAULT_MAX_DIM) -> Zeta8Integer:
    """Sum of i^Q(x) over all x, walking the Gray code so each step updates Q in O(1)."""
    if f.n > max_dim:
        logger.warning("Refusing a Gauss sum over 2^%d vectors", f.n)
        raise DimensionCapError(f"form dimension {f.n} exceeds the cap {max_dim}")
    rows = f.row_masks()
    counts = [0, 0, 0, 0]
    x = 0
    value = 0
    counts[0] += 1
    for step in range(1, 1 << f.n):
        j = (step & -step).bit_length() - 1
        value = (value + f.q_basis[j] + 2 * ((x & rows[j]).bit_count() & 1)) % 4
        x ^= 1 << j
        counts[value] += 1
    return Zeta8Integer(counts[0] - counts[2], 0, counts[1] - counts[3], 0)


def radical_dimension(f: QuadraticForm) -> int:
    return f.n - GF2System(f.row_masks(), f.n).rank


@dataclass(frozen=True)
class ArfResult:
    """The Arf invariant k in Z/8 (k/8 in Q/Z), or a degenerate verdict when the Gauss sum vanishes."""

    k: int | None
    gauss_sum: Zeta8Integer
    radical_dimension: int = 0

    @property
    def degenerate(self) -> bool:
        return self.k is None

    @property
    def value(self) -> Fraction | None:
        return None if self.k is None else Fraction(self.k, 8)

    def __str__(self) -> str:
        if self.k is None:
            return "degenerate"
        return f"{self.k} (mod 8) = {self.value}"


def arf(f: QuadraticForm, max_dim: int = DEFAULT_MAX_DIM) -> ArfResult:
    """Arf invariant from S = 2^(m/2) z^k.

    m = n for nondegenerate forms. A degenerate form whose refinement vanishes on the radical
    has |S|^2 = 2^(n + r) and the Arf invariant of the induced form; otherwise S = 0.
    """
    s = gauss_sum(f, max_dim)
    rad = radical_dimension(f)
    if s.is_zero():
        return ArfResult(None, s, rad)
    norm = s.norm()
    m = norm.bit_length() - 1
    if norm != 1 << m or m != f.n + rad:
        raise RuntimeError(f"Gauss sum {s} has norm {norm}, expected 2^{f.n + rad}")
    scale = Zeta8Integer(1 << (m // 2))
    if m % 2:
        scale = scale * SQRT2
    for k in range(8):
        if scale * Zeta8Integer.root(k) == s:
            logger.debug("Arf(%s) = %d from Gauss sum %s", f.name, k, s)
            return ArfResult(k, s, rad)
    raise RuntimeError(f"Gauss sum {s} is not a scaled 8th root of unity")


def direct_sum(f1: QuadraticForm, f2: QuadraticForm) -> QuadraticForm:
    n = f1.n + f2.n
    rows = [list(row) + [0] * f2.n for row in f1.bilinear] + [[0] * f1.n + list(row) for row in f2.bilinear]
    return QuadraticForm(f"{f1.name}+{f2.name}", n, tuple(tuple(row) for row in rows), f1.q_basis + f2.q_basis)


def negate(f: QuadraticForm) -> QuadraticForm:
    return QuadraticForm(f"-{f.name}", f.n, f.bilinear, tuple((-q) % 4 for q in f.q_basis))
