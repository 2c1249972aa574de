"""Exact linear algebra over Z, Z/n, GF(2) and Q/Z, and (co)homology of ordered complexes."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .cochains import Cochain, Ring
from .complexes import DegreeError, OrderedComplex, SignedChain, coboundary_rows

logger = logging.getLogger(__name__)

Matrix = list[list[int]]
QZVector = list[Fraction]
SparseRow = dict[int, int]


class DimensionMismatchError(ValueError):
    pass


def qz_vector(entries: Sequence[Fraction | int]) -> QZVector:
    """Reduce rational entries into [0, 1)."""
    return [Fraction(e) % 1 for e in entries]


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _shape(a: Sequence[Sequence[int]], ncols: int | None) -> tuple[int, int]:
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    if ncols is not None and ncols != n:
        raise DimensionMismatchError(f"matrix has {n} columns, expected {ncols}")
    for row in a:
        if len(row) != n:
            raise DimensionMismatchError("matrix rows have different lengths")
    return m, n


# -- Smith normal form ------------------------------------------------------------------------------


@dataclass(frozen=True)
class SNFDecomposition:
    """A = u · s · v with u, v unimodular and s diagonal with s1 | s2 | ... >= 0."""

    u: Matrix
    s: Matrix
    v: Matrix
    u_inv: Matrix
    v_inv: Matrix
    diagonal: tuple[int, ...]
    rank: int


def smith_normal_form(a: Sequence[Sequence[int]], ncols: int | None = None) -> SNFDecomposition:
    """Smith normal form with transforms, pivoting on the smallest nonzero magnitude.

    Ties go to the first entry in row-major order so results are reproducible.
    """
    m, n = _shape(a, ncols)
    w = [[int(x) for x in row] for row in a]
    u, u_inv, v, v_inv = _identity(m), _identity(m), _identity(n), _identity(n)

    def row_add(i: int, j: int, q: int) -> None:  # row i += q row j
        if not q:
            return
        wi, wj = w[i], w[j]
        for c in range(n):
            if wj[c]:
                wi[c] += q * wj[c]
        for row in u:
            row[j] -= q * row[i]
        ui, uj = u_inv[i], u_inv[j]
        for c in range(m):
            if uj[c]:
                ui[c] += q * uj[c]

    def row_swap(i: int, j: int) -> None:
        if i == j:
            return
        w[i], w[j] = w[j], w[i]
        u_inv[i], u_inv[j] = u_inv[j], u_inv[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    def row_negate(i: int) -> None:
        w[i] = [-x for x in w[i]]
        u_inv[i] = [-x for x in u_inv[i]]
        for row in u:
            row[i] = -row[i]

    def col_add(j: int, i: int, q: int) -> None:  # col j += q col i
        if not q:
            return
        for row in w:
            if row[i]:
                row[j] += q * row[i]
        vi, vj = v[i], v[j]
        for c in range(n):
            if vj[c]:
                vi[c] -= q * vj[c]
        for row in v_inv:
            row[j] += q * row[i]

    def col_swap(i: int, j: int) -> None:
        if i == j:
            return
        v[i], v[j] = v[j], v[i]
        for row in w:
            row[i], row[j] = row[j], row[i]
        for row in v_inv:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        pivot: tuple[int, int] | None = None
        for i in range(t, m):
            for j in range(t, n):
                x = w[i][j]
                if x and (pivot is None or abs(x) < abs(w[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])

        while True:
            p = w[t][t]
            dirty = False
            for i in range(t + 1, m):
                if w[i][t]:
                    row_add(i, t, -(w[i][t] // p))
                    dirty = dirty or w[i][t] != 0
            for j in range(t + 1, n):
                if w[t][j]:
                    col_add(j, t, -(w[t][j] // p))
                    dirty = dirty or w[t][j] != 0
            if dirty:
                best = (t, t)
                for i in range(t + 1, m):
                    if w[i][t] and abs(w[i][t]) < abs(w[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, n):
                    if w[t][j] and abs(w[t][j]) < abs(w[best[0]][best[1]]):
                        best = (t, j)
                row_swap(t, best[0])
                col_swap(t, best[1])
                continue
            bad = next((i for i in range(t + 1, m) if any(w[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            row_add(t, bad, 1)

        if w[t][t] < 0:
            row_negate(t)
        t += 1

    diagonal = tuple(w[i][i] for i in range(min(m, n)))
    return SNFDecomposition(
        u=u, s=w, v=v, u_inv=u_inv, v_inv=v_inv, diagonal=diagonal, rank=sum(1 for x in diagonal if x)
    )


def _mat_vec(a: Matrix, x: Sequence[int]) -> list[int]:
    return [sum(r * y for r, y in zip(row, x) if r) for row in a]


def solve_integer(
    a: Sequence[Sequence[int]], b: Sequence[int], snf: SNFDecomposition | None = None, ncols: int | None = None
) -> list[int] | None:
    """An integer solution of a·x = b, or None."""
    m, n = _shape(a, ncols)
    if len(b) != m:
        raise DimensionMismatchError(f"right-hand side has {len(b)} entries, expected {m}")
    snf = snf or smith_normal_form(a, n)
    c = _mat_vec(snf.u_inv, b)
    y = [0] * len(snf.v)
    for i, ci in enumerate(c):
        s = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if s == 0:
            if ci:
                return None
        elif ci % s:
            return None
        else:
            y[i] = ci // s
    return _mat_vec(snf.v_inv, y)


def solve_mod_n(
    a: Sequence[Sequence[int]],
    b: Sequence[int],
    n: int,
    snf: SNFDecomposition | None = None,
    ncols: int | None = None,
) -> list[int] | None:
    """A solution of a·x ≡ b (mod n) with entries in [0, n), or None."""
    if n < 2:
        raise ValueError(f"modulus must be at least 2, got {n}")
    m, cols = _shape(a, ncols)
    if len(b) != m:
        raise DimensionMismatchError(f"right-hand side has {len(b)} entries, expected {m}")
    snf = snf or smith_normal_form(a, cols)
    c = [x % n for x in _mat_vec(snf.u_inv, b)]
    y = [0] * len(snf.v)
    for i, ci in enumerate(c):
        s = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if s == 0:
            if ci:
                return None
            continue
        g = math.gcd(s, n)
        if ci % g:
            return None
        reduced = n // g
        y[i] = (ci // g) * pow(s // g, -1, reduced) % reduced if reduced > 1 else 0
    return [x % n for x in _mat_vec(snf.v_inv, y)]


# -- GF(2) ------------------------------------------------------------------------------------------


def _parity(x: int) -> int:
    return x.bit_count() & 1


class GF2System:
    """Reduced row echelon form of a GF(2) matrix whose rows are bitmasks over the unknowns.

    The row transform is kept so that any right-hand side can be solved without re-eliminating.
    """

    def __init__(self, rows: Sequence[int], ncols: int) -> None:
        self.ncols = ncols
        self.nrows = len(rows)
        work = list(rows)
        transform = [1 << i for i in range(len(work))]
        pivots: list[int] = []
        r = 0
        for col in range(ncols):
            if r == len(work):
                break
            bit = 1 << col
            sel = next((i for i in range(r, len(work)) if work[i] & bit), None)
            if sel is None:
                continue
            work[r], work[sel] = work[sel], work[r]
            transform[r], transform[sel] = transform[sel], transform[r]
            for i in range(len(work)):
                if i != r and work[i] & bit:
                    work[i] ^= work[r]
                    transform[i] ^= transform[r]
            pivots.append(col)
            r += 1
        self._rows = work
        self._transform = transform
        self.pivot_columns = tuple(pivots)
        self.rank = r

    def solve(self, b: int) -> int | None:
        for i in range(self.rank, self.nrows):
            if _parity(self._transform[i] & b):
                return None
        x = 0
        for i, col in enumerate(self.pivot_columns):
            if _parity(self._transform[i] & b):
                x |= 1 << col
        return x

    def image_contains(self, b: int) -> bool:
        return self.solve(b) is not None

    def kernel(self) -> list[int]:
        pivot_set = set(self.pivot_columns)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            vector = 1 << free
            for i, col in enumerate(self.pivot_columns):
                if (self._rows[i] >> free) & 1:
                    vector |= 1 << col
            basis.append(vector)
        return basis


class GF2Basis:
    """Incremental XOR basis; each stored vector carries a tag recording which inputs built it."""

    def __init__(self) -> None:
        self._pivots: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, vector: int, tag: int = 0) -> tuple[int, int]:
        while vector:
            entry = self._pivots.get(vector.bit_length() - 1)
            if entry is None:
                break
            vector ^= entry[0]
            tag ^= entry[1]
        return vector, tag

    def insert(self, vector: int, tag: int = 0) -> bool:
        residual, tag = self.reduce(vector, tag)
        if not residual:
            return False
        self._pivots[residual.bit_length() - 1] = (residual, tag)
        return True


@dataclass(frozen=True)
class GF2Solution:
    solution: list[int] | None
    kernel: list[list[int]] = field(default_factory=list)


def _bits_to_list(bits: int, n: int) -> list[int]:
    return [(bits >> i) & 1 for i in range(n)]


def solve_gf2(a: Sequence[Sequence[int]], b: Sequence[int]) -> GF2Solution:
    """One solution of a·x = b over GF(2) (None if inconsistent) together with a kernel basis of a."""
    m, n = _shape(a, None)
    if len(b) != m:
        raise DimensionMismatchError(f"right-hand side has {len(b)} entries, expected {m}")
    rows = [sum(1 << j for j, x in enumerate(row) if x % 2) for row in a]
    system = GF2System(rows, n)
    rhs = sum(1 << i for i, x in enumerate(b) if x % 2)
    x = system.solve(rhs)
    return GF2Solution(
        solution=None if x is None else _bits_to_list(x, n),
        kernel=[_bits_to_list(k, n) for k in system.kernel()],
    )


# -- integer echelon and Q/Z images -----------------------------------------------------------------


def _axpy(target: SparseRow, source: Mapping[int, int], q: int) -> None:
    for k, value in source.items():
        total = target.get(k, 0) + q * value
        if total:
            target[k] = total
        else:
            target.pop(k, None)


def _dot(row: Mapping[int, int], vector: Mapping[int, Fraction | int]) -> Fraction:
    if len(row) > len(vector):
        return Fraction(sum(v * row[k] for k, v in vector.items() if k in row))
    return Fraction(sum(v * vector[k] for k, v in row.items() if k in vector))


class IntegerEchelon:
    """Row echelon form E = T·A of a sparse integer matrix with unimodular T.

    Rows ``rank..m`` of T form a saturated basis of the left kernel of A. With
    ``track_inverse`` the rows of (T^-1)^T are kept as well, giving coordinates in that basis.
    """

    def __init__(self, rows: Sequence[Mapping[int, int]], ncols: int, track_inverse: bool = False) -> None:
        m = len(rows)
        e: list[SparseRow] = [{k: v for k, v in row.items() if v} for row in rows]
        t: list[SparseRow] = [{i: 1} for i in range(m)]
        inv_t: list[SparseRow] | None = [{i: 1} for i in range(m)] if track_inverse else None

        def swap(i: int, j: int) -> None:
            if i == j:
                return
            e[i], e[j] = e[j], e[i]
            t[i], t[j] = t[j], t[i]
            if inv_t is not None:
                inv_t[i], inv_t[j] = inv_t[j], inv_t[i]

        def row_sub(i: int, p: int, q: int) -> None:  # row i -= q row p
            _axpy(e[i], e[p], -q)
            _axpy(t[i], t[p], -q)
            if inv_t is not None:
                _axpy(inv_t[p], inv_t[i], q)

        pivots: list[int] = []
        r = 0
        for col in range(ncols):
            if r == m:
                break
            live = [i for i in range(r, m) if col in e[i]]
            if not live:
                continue
            while True:
                best = min(live, key=lambda i: (abs(e[i][col]), i))
                swap(r, best)
                if r not in live:
                    live[live.index(best)] = r
                others = [i for i in live if i != r and col in e[i]]
                if not others:
                    break
                p = e[r][col]
                for i in others:
                    row_sub(i, r, e[i][col] // p)
                live = [r] + [i for i in others if col in e[i]]
                if len(live) == 1:
                    break
            pivots.append(col)
            r += 1

        self.ncols = ncols
        self.nrows = m
        self.rank = r
        self.pivot_columns = tuple(pivots)
        self.rows = e
        self.transform = t
        self.inverse_transpose = inv_t

    def left_kernel(self) -> list[SparseRow]:
        return self.transform[self.rank :]

    def kernel_coordinates(self, vector: Mapping[int, int]) -> list[int]:
        """Coordinates of a left-kernel vector in the basis :meth:`left_kernel`."""
        if self.inverse_transpose is None:
            raise RuntimeError("echelon was built without track_inverse")
        coords = []
        for row in self.inverse_transpose[self.rank :]:
            value = _dot(row, vector)
            coords.append(int(value))
        return coords

    def back_substitute(self, rhs: Sequence[Fraction]) -> dict[int, Fraction]:
        """Rational x with E[:rank]·x = rhs, free variables zero."""
        x: dict[int, Fraction] = {}
        for i in range(self.rank - 1, -1, -1):
            col = self.pivot_columns[i]
            row = self.rows[i]
            acc = Fraction(rhs[i])
            for k, value in row.items():
                if k != col and k in x:
                    acc -= value * x[k]
            if acc:
                x[col] = acc / row[col]
        return x


class QZImage:
    """The image of an integer matrix acting on Q/Z vectors.

    b lies in the image iff every left-kernel row of A pairs integrally with a rational lift of b.
    """

    def __init__(self, rows: Sequence[Mapping[int, int]], ncols: int) -> None:
        self.echelon = IntegerEchelon(rows, ncols)
        self.nrows = len(rows)
        self.ncols = ncols

    @property
    def cokernel_rank(self) -> int:
        return self.nrows - self.echelon.rank

    def kernel_values(self, b: Mapping[int, Fraction]) -> list[Fraction]:
        return [_dot(row, b) for row in self.echelon.left_kernel()]

    def contains(self, b: Mapping[int, Fraction]) -> bool:
        return all(v.denominator == 1 for v in self.kernel_values(b))

    def preimage(self, b: Mapping[int, Fraction]) -> dict[int, Fraction] | None:
        if not self.contains(b):
            return None
        transform = self.echelon.transform
        rhs = [_dot(transform[i], b) for i in range(self.echelon.rank)]
        solution = self.echelon.back_substitute(rhs)
        return {k: v % 1 for k, v in solution.items() if v % 1}

    def contains_affine(self, b: Mapping[int, Fraction], gens: Sequence[Mapping[int, Fraction]]) -> bool:
        """Whether b ∈ image + Z-span(gens) for half-integral generators."""
        for g in gens:
            if any((2 * Fraction(v)) % 1 for v in g.values()):
                raise ValueError("affine generators must satisfy 2g = 0 mod 1")
        target = self.kernel_values(b)
        if not target:
            return True
        columns = [self.kernel_values(g) for g in gens]
        scale = math.lcm(*(v.denominator for v in target), *(v.denominator for col in columns for v in col))
        k = len(target)
        matrix = [
            [scale if j == i else 0 for j in range(k)] + [int(col[i] * scale) for col in columns] for i in range(k)
        ]
        rhs = [int(v * scale) for v in target]
        return solve_integer(matrix, rhs) is not None


def _dense_to_rows(a: Sequence[Sequence[int]]) -> list[SparseRow]:
    return [{j: int(x) for j, x in enumerate(row) if x} for row in a]


def _qz_to_map(b: Sequence[Fraction | int]) -> dict[int, Fraction]:
    return {i: Fraction(x) % 1 for i, x in enumerate(b) if Fraction(x) % 1}


def image_membership_qz(a: Sequence[Sequence[int]], b: Sequence[Fraction | int]) -> QZVector | None:
    """A Q/Z preimage of b under a, or None when b is not in the image."""
    m, n = _shape(a, None)
    if len(b) != m:
        raise DimensionMismatchError(f"vector has {len(b)} entries, expected {m}")
    image = QZImage(_dense_to_rows(a), n)
    found = image.preimage(_qz_to_map(b))
    if found is None:
        return None
    return [found.get(j, Fraction(0)) for j in range(n)]


def affine_coboundary_membership(
    a: Sequence[Sequence[int]], b: Sequence[Fraction | int], gens: Sequence[Sequence[Fraction | int]]
) -> bool:
    """Whether b ∈ a·(Q/Z)^n + Z-span(gens mod 1)."""
    m, n = _shape(a, None)
    for g in [b, *gens]:
        if len(g) != m:
            raise DimensionMismatchError(f"vector has {len(g)} entries, expected {m}")
    image = QZImage(_dense_to_rows(a), n)
    return image.contains_affine(_qz_to_map(b), [_qz_to_map(g) for g in gens])


# -- group presentations ----------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """Z^free_rank x (Q/Z)^circle_rank x Z/d1 x Z/d2 x ..., with representatives when known."""

    free_rank: int = 0
    circle_rank: int = 0
    torsion: tuple[int, ...] = ()
    basis_cocycles: tuple[Cochain, ...] = ()
    basis_cycles: tuple[SignedChain, ...] = ()

    def __post_init__(self) -> None:
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"invariant factors must be at least 2, got {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain, got {self.torsion}")

    @property
    def is_trivial(self) -> bool:
        return not (self.free_rank or self.circle_rank or self.torsion)

    @property
    def order(self) -> int | None:
        if self.free_rank or self.circle_rank:
            return None
        return math.prod(self.torsion)

    def format(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        if self.circle_rank:
            parts.append(f"(Q/Z)^{self.circle_rank}")
        return " x ".join(parts) if parts else "0"


def _subquotient(
    outgoing: Sequence[Mapping[int, int]], out_width: int, incoming: Sequence[Mapping[int, int]]
) -> tuple[list[SparseRow], list[int], list[SparseRow]]:
    """Z/B for Z = {y : sum_j y_j outgoing[j] = 0} and B = span(incoming) inside Z.

    Returns free generators, invariant factors and torsion generators, all as vectors in Z^len(outgoing).
    """
    size = len(outgoing)
    if size == 0:
        return [], [], []
    cycles = IntegerEchelon(outgoing, out_width, track_inverse=True)
    basis = cycles.left_kernel()
    z = len(basis)
    relations = [{i: c for i, c in enumerate(cycles.kernel_coordinates(v)) if c} for v in incoming]

    reduced = IntegerEchelon(relations, z)
    rows = {i: dict(reduced.rows[i]) for i in range(reduced.rank)}
    pivot_of = {i: reduced.pivot_columns[i] for i in range(reduced.rank)}
    eliminated: set[int] = set()
    # unit pivots, latest column first, so earlier rows keep their echelon shape
    for i in sorted(rows, key=lambda i: -pivot_of[i]):
        col = pivot_of[i]
        unit = rows[i].get(col)
        if unit not in (1, -1):
            continue
        for j, other in rows.items():
            if j != i and col in other:
                _axpy(other, rows[i], -other[col] * unit)
        del rows[i]
        eliminated.add(col)

    keep = [c for c in range(z) if c not in eliminated]
    residual = [[row.get(c, 0) for c in keep] for row in rows.values()]
    snf = smith_normal_form(residual, len(keep))

    free: list[SparseRow] = []
    torsion: list[int] = []
    torsion_gens: list[SparseRow] = []
    for i in range(len(keep)):
        s = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if s == 1:
            continue
        coords = {keep[k]: x for k, x in enumerate(snf.v[i]) if x}
        vector: SparseRow = {}
        for c, x in coords.items():
            _axpy(vector, basis[c], x)
        if s == 0:
            free.append(vector)
        else:
            torsion.append(s)
            torsion_gens.append(vector)
    return free, torsion, torsion_gens


def _coface_rows(complex_: OrderedComplex, k: int) -> list[SparseRow]:
    """Row per k-simplex: its coboundary as a vector over (k+1)-simplices."""
    if not 0 <= k <= complex_.top_dim:
        return []
    upper = complex_._index[k + 1] if k + 1 <= complex_.top_dim else {}
    return [{upper[sigma]: sign for sigma, sign in entries} for entries in complex_.cofaces[k]]


@lru_cache(maxsize=256)
def homology(complex_: OrderedComplex, k: int) -> AbelianGroupPresentation:
    """Integral homology H_k with representative cycles (free generators first, then torsion)."""
    if k < 0:
        raise DegreeError(f"homology degree {k} is negative")
    if k > complex_.top_dim:
        return AbelianGroupPresentation()
    outgoing = coboundary_rows(complex_, k - 1) if k >= 1 else [{} for _ in complex_.simplices[0]]
    incoming = coboundary_rows(complex_, k)
    free, torsion, torsion_gens = _subquotient(outgoing, complex_.count(k - 1) if k >= 1 else 0, incoming)
    layer = complex_.simplices[k]
    cycles = tuple(SignedChain.from_mapping(k, {layer[j]: c for j, c in g.items()}) for g in free + torsion_gens)
    logger.debug("H_%d(%s) = free %d, torsion %s", k, complex_.name, len(free), torsion)
    return AbelianGroupPresentation(free_rank=len(free), torsion=tuple(torsion), basis_cycles=cycles)


def _integral_cohomology(complex_: OrderedComplex, k: int) -> AbelianGroupPresentation:
    outgoing = _coface_rows(complex_, k)
    incoming = _coface_rows(complex_, k - 1) if k >= 1 else []
    # incoming rows are indexed by (k-1)-simplices and keyed by k-simplex index, as needed
    free, torsion, torsion_gens = _subquotient(outgoing, complex_.count(k + 1), incoming)
    layer = complex_.simplices[k]
    cocycles = tuple(
        Cochain.from_values(complex_, k, Ring.Z, {layer[j]: c for j, c in g.items()}) for g in free + torsion_gens
    )
    return AbelianGroupPresentation(free_rank=len(free), torsion=tuple(torsion), basis_cocycles=cocycles)


@lru_cache(maxsize=256)
def cohomology(complex_: OrderedComplex, coeff: Ring | str, k: int) -> AbelianGroupPresentation:
    """H^k(X; M) for M in Z, Z/2, Z/4 and the Q/Z model of R/Z."""
    ring = coeff if isinstance(coeff, Ring) else Ring.parse(coeff)
    if k < 0:
        raise DegreeError(f"cohomology degree {k} is negative")
    if k > complex_.top_dim:
        return AbelianGroupPresentation()
    if ring is Ring.Z:
        return _integral_cohomology(complex_, k)
    if ring is Ring.Z2:
        classes = z2_cohomology(complex_, k)
        return AbelianGroupPresentation(torsion=(2,) * classes.dimension, basis_cocycles=classes.representatives)
    if ring is Ring.QZ:
        h = homology(complex_, k)
        return AbelianGroupPresentation(circle_rank=h.free_rank, torsion=h.torsion)
    # Z/4 by universal coefficients: Hom(H_k, Z/4) + Ext(H_{k-1}, Z/4)
    factors = [math.gcd(d, 4) for d in homology(complex_, k).torsion]
    if k >= 1:
        factors += [math.gcd(d, 4) for d in homology(complex_, k - 1).torsion]
    factors += [4] * homology(complex_, k).free_rank
    return AbelianGroupPresentation(torsion=tuple(sorted(f for f in factors if f > 1)))


# -- per-complex coboundary systems -----------------------------------------------------------------


@lru_cache(maxsize=256)
def z2_coboundary_system(complex_: OrderedComplex, k: int) -> GF2System:
    """d: C^k(Z/2) -> C^{k+1}(Z/2) ready for repeated solves."""
    rows = [sum(1 << j for j in row) for row in coboundary_rows(complex_, k)]
    return GF2System(rows, complex_.count(k))


@lru_cache(maxsize=256)
def qz_coboundary_image(complex_: OrderedComplex, k: int) -> QZImage:
    """The image of d: C^k(Q/Z) -> C^{k+1}(Q/Z)."""
    return QZImage(coboundary_rows(complex_, k), complex_.count(k))


def qz_values(c: Cochain) -> dict[int, Fraction]:
    if c.ring is not Ring.QZ:
        raise ValueError(f"expected a Q/Z cochain, got {c.ring.value}")
    return {c.complex.index(s): Fraction(v) for s, v in c.values.items()}


def solve_coboundary_gf2(target: Cochain) -> Cochain | None:
    """Some x with dx = target over Z/2, or None."""
    complex_ = target.complex
    k = target.degree - 1
    if k < 0:
        return None if not target.is_zero() else Cochain.zero(complex_, 0, Ring.Z2)
    x = z2_coboundary_system(complex_, k).solve(target.to_bits())
    return None if x is None else Cochain.from_bits(complex_, k, x)


def solve_coboundary_qz(target: Cochain) -> Cochain | None:
    """Some Q/Z cochain x with dx = target, or None."""
    complex_ = target.complex
    k = target.degree - 1
    if k < 0:
        return None if not target.is_zero() else Cochain.zero(complex_, 0, Ring.QZ)
    found = qz_coboundary_image(complex_, k).preimage(qz_values(target))
    if found is None:
        return None
    layer = complex_.simplices_of(k)
    return Cochain(complex_, k, Ring.QZ, {layer[j]: v for j, v in found.items()})


def is_qz_coboundary(c: Cochain) -> bool:
    if c.is_zero():
        return True
    if c.degree == 0:
        return False
    return qz_coboundary_image(c.complex, c.degree - 1).contains(qz_values(c))


class Z2Cohomology:
    """H^k(X; Z/2) with chosen representative cocycles and class coordinates."""

    def __init__(self, complex_: OrderedComplex, k: int) -> None:
        self.complex = complex_
        self.degree = k
        self._basis = GF2Basis()
        reps: list[Cochain] = []
        if 0 <= k <= complex_.top_dim:
            if k >= 1:
                for row in _coface_rows(complex_, k - 1):
                    self._basis.insert(sum(1 << j for j in row), 0)
            for z in z2_coboundary_system(complex_, k).kernel():
                if self._basis.insert(z, 1 << len(reps)):
                    reps.append(Cochain.from_bits(complex_, k, z))
        self.representatives = tuple(reps)

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def coordinates(self, z: Cochain) -> tuple[int, ...]:
        if z.ring is not Ring.Z2 or z.degree != self.degree or z.complex != self.complex:
            raise ValueError(f"expected a Z/2 {self.degree}-cochain on {self.complex.name}")
        residual, tag = self._basis.reduce(z.to_bits())
        if residual:
            raise ValueError("cochain is not a cocycle")
        return tuple((tag >> i) & 1 for i in range(self.dimension))

    def is_coboundary(self, z: Cochain) -> bool:
        return not any(self.coordinates(z))

    def combination(self, coords: Sequence[int]) -> Cochain:
        total = Cochain.zero(self.complex, self.degree, Ring.Z2)
        for bit, rep in zip(coords, self.representatives):
            if bit % 2:
                total = total + rep
        return total


@lru_cache(maxsize=256)
def z2_cohomology(complex_: OrderedComplex, k: int) -> Z2Cohomology:
    return Z2Cohomology(complex_, k)


def z2_cocycle_basis(complex_: OrderedComplex, k: int) -> list[Cochain]:
    if not 0 <= k <= complex_.top_dim:
        return []
    return [Cochain.from_bits(complex_, k, z) for z in z2_coboundary_system(complex_, k).kernel()]


@lru_cache(maxsize=256)
def _integer_cocycle_rows(complex_: OrderedComplex, k: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    echelon = IntegerEchelon(_coface_rows(complex_, k), complex_.count(k + 1))
    return tuple(tuple(sorted(row.items())) for row in echelon.left_kernel())


def integer_cocycle_basis(complex_: OrderedComplex, k: int) -> list[Cochain]:
    """A Z-basis of the integral k-cocycles."""
    if not 0 <= k <= complex_.top_dim:
        return []
    layer = complex_.simplices[k]
    return [
        Cochain.from_values(complex_, k, Ring.Z, {layer[j]: c for j, c in row})
        for row in _integer_cocycle_rows(complex_, k)
    ]
