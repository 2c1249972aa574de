"""The group C(X) of triples (w, p, a), the differentials D and D', and decision procedures in G(X)."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .cochains import (
    MOD4,
    QUARTER4,
    Cochain,
    CochainError,
    Ring,
    Value,
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
from .complexes import OrderedComplex, SignedChain, SimplicialMap, coboundary_matrix
from .linalg import (
    AbelianGroupPresentation,
    GF2System,
    cohomology,
    homology,
    is_qz_coboundary,
    qz_coboundary_image,
    qz_values,
    smith_normal_form,
    solve_coboundary_gf2,
    solve_coboundary_qz,
    solve_mod_n,
    z2_cocycle_basis,
    z2_cohomology,
)

logger = logging.getLogger(__name__)


class PreconditionError(ValueError):
    pass


class NotInSH2Error(ValueError):
    pass


class SearchLimitError(ValueError):
    """Raised when an exhaustive search would exceed its configured cap."""


@dataclass(frozen=True)
class Triple:
    """An element (w, p, a) of C(X): w a Q/Z 3-cochain, p a Z/2 2-cocycle, a a Z/2 1-cocycle."""

    w: Cochain
    p: Cochain
    a: Cochain

    def __post_init__(self) -> None:
        expected = (("w", self.w, Ring.QZ, 3), ("p", self.p, Ring.Z2, 2), ("a", self.a, Ring.Z2, 1))
        for name, c, ring, degree in expected:
            if c.ring is not ring or c.degree != degree:
                raise CochainError(
                    f"{name} must be a {ring.value} {degree}-cochain, got {c.ring.value} degree {c.degree}"
                )
        if not (self.w.complex == self.p.complex == self.a.complex):
            raise CochainError("triple components live on different complexes")
        if not d(self.p).is_zero():
            raise CochainError("p is not a cocycle")
        if not d(self.a).is_zero():
            raise CochainError("a is not a cocycle")

    @classmethod
    def identity(cls, complex_: OrderedComplex) -> Triple:
        return cls(
            Cochain.zero(complex_, 3, Ring.QZ), Cochain.zero(complex_, 2, Ring.Z2), Cochain.zero(complex_, 1, Ring.Z2)
        )

    @classmethod
    def from_w(cls, w: Cochain) -> Triple:
        return cls(w, Cochain.zero(w.complex, 2, Ring.Z2), Cochain.zero(w.complex, 1, Ring.Z2))

    @classmethod
    def from_a(cls, a: Cochain) -> Triple:
        return cls(Cochain.zero(a.complex, 3, Ring.QZ), Cochain.zero(a.complex, 2, Ring.Z2), a)

    @property
    def complex(self) -> OrderedComplex:
        return self.w.complex

    def __mul__(self, other: Triple) -> Triple:
        return product(self, other)


def _quarter(x: Cochain) -> Cochain:
    return nth_part(4, x)


def _eighth(x: Cochain) -> Cochain:
    return nth_part(8, x)


def big_d(g: Triple) -> Cochain:
    """D(w, p, a) = dw + (1/2) p u p."""
    return d(g.w) + half(cup(g.p, g.p))


def is_d_cocycle(g: Triple) -> bool:
    return big_d(g).is_zero()


def _require_d_cocycle(g: Triple) -> None:
    if not is_d_cocycle(g):
        raise PreconditionError("triple is not a D-cocycle")


def big_d_prime(t: Cochain, x: Cochain) -> Triple:
    """D'(t, x) = ((1/2) t dt, dt, dx)."""
    dt = d(t)
    return Triple(half(cup(t, dt)), dt, d(x))


def c_prime_product(tx: tuple[Cochain, Cochain], sy: tuple[Cochain, Cochain]) -> tuple[Cochain, Cochain]:
    """(t, x)(s, y) = (t + s + x u dy, x + y) in C'."""
    (t, x), (s, y) = tx, sy
    return t + s + cup(x, d(y)), x + y


def c_prime_inverse(tx: tuple[Cochain, Cochain]) -> tuple[Cochain, Cochain]:
    t, x = tx
    return t + cup(x, d(x)), x


def product(g1: Triple, g2: Triple) -> Triple:
    """(w, p, a)(v, q, b) = (u, p + q + ab, a + b) with the +AB^2/4 sign choice."""
    if g1.complex != g2.complex:
        raise CochainError("triples live on different complexes")
    w, p, a = g1.w, g1.p, g1.a
    v, q, b = g2.w, g2.p, g2.a
    ab = cup(a, b)
    correction = cup1(p, q) + cup1(p + q, ab) + cup(cup(a, cup1(a, b)), b)
    big_a, big_b = special_lift(a), special_lift(b)
    u = w + v + half(correction) + _quarter(cup(big_a, cup(big_b, big_b)))
    return Triple(u, p + q + ab, a + b)


def inverse(g: Triple) -> Triple:
    """(w, p, a)^-1 = (-w + (1/2) p u_1 a^2 + (1/4) A^3, p + a^2, a)."""
    a2 = cup(g.a, g.a)
    big_a = special_lift(g.a)
    return Triple(-g.w + half(cup1(g.p, a2)) + _quarter(cup_power(big_a, 3)), g.p + a2, g.a)


def power(g: Triple, n: int) -> Triple:
    if n < 0:
        raise ValueError(f"power exponent must be non-negative, got {n}")
    result = Triple.identity(g.complex)
    for _ in range(n):
        result = product(result, g)
    return result


def commutator(g1: Triple, g2: Triple) -> Triple:
    return product(product(product(g1, g2), inverse(g1)), inverse(g2))


def cbar_equal(g1: Triple, g2: Triple) -> bool:
    """Equality in (C^3 / dC^2) x Z^2 x Z^1."""
    if g1.complex != g2.complex:
        raise CochainError("triples live on different complexes")
    return g1.p == g2.p and g1.a == g2.a and is_qz_coboundary(g1.w - g2.w)


def _zero0(complex_: OrderedComplex) -> Cochain:
    return Cochain.zero(complex_, 0, Ring.Z2)


def _zero1(complex_: OrderedComplex) -> Cochain:
    return Cochain.zero(complex_, 1, Ring.Z2)


def _clear_a(g: Triple) -> Triple | None:
    """g times D'(0, x)^-1 for some x with dx = a, or None when [a] != 0."""
    x = solve_coboundary_gf2(g.a)
    if x is None:
        return None
    return product(g, inverse(big_d_prime(_zero1(g.complex), x)))


def is_identity(g: Triple) -> bool:
    """Whether a D-cocycle lies in the image of D'.

    a is cleared by D'(0, x); then p = dt0 for some t0, and the remaining condition on w is
    membership of w - (1/2) t0 p in dC^2 + span{(1/2) z p : z in Z^1(Z/2)}.
    """
    _require_d_cocycle(g)
    g1 = _clear_a(g)
    if g1 is None:
        return False
    t0 = solve_coboundary_gf2(g1.p)
    if t0 is None:
        return False
    complex_ = g.complex
    target = g1.w - half(cup(t0, g1.p))
    gens = [half(cup(z, g1.p)) for z in z2_cocycle_basis(complex_, 1)]
    image = qz_coboundary_image(complex_, 2)
    return image.contains_affine(qz_values(target), [qz_values(gen) for gen in gens if not gen.is_zero()])


def g_equal(g1: Triple, g2: Triple) -> bool:
    _require_d_cocycle(g1)
    _require_d_cocycle(g2)
    return is_identity(product(g1, inverse(g2)))


def order(g: Triple, bound: int = 64) -> int | None:
    """Least n <= bound with g^n trivial in G, or None."""
    if bound < 1:
        raise ValueError(f"order bound must be positive, got {bound}")
    _require_d_cocycle(g)
    current = g
    for n in range(1, bound + 1):
        if is_identity(current):
            return n
        current = product(current, g)
    logger.debug("No order found for triple on %s within %d", g.complex.name, bound)
    return None


# -- filtration -------------------------------------------------------------------------------------


class FiltrationLevel(Enum):
    G_MOD_G1 = "G/G1"
    G1_MOD_G2 = "G1/G2"
    G2 = "G2"
    IDENTITY = "identity"


@dataclass(frozen=True)
class FiltrationClass:
    """Deepest filtration level of a class and its coordinates there.

    Coordinates are H^1(Z/2) bits, SH^2 bits, or the Q/Z values of w on the H_3 generators.
    """

    level: FiltrationLevel
    coordinates: tuple[Value, ...] = ()


def sh2_basis(complex_: OrderedComplex) -> tuple[Cochain, ...]:
    """Representatives of a basis of SH^2 = {[p] in H^2(Z/2) : (1/2) p^2 in dC^3(Q/Z)}."""
    return _sh2(complex_)[0]


@lru_cache(maxsize=256)
def _sh2(complex_: OrderedComplex) -> tuple[tuple[Cochain, ...], GF2System]:
    h2 = z2_cohomology(complex_, 2)
    n = h2.dimension
    if complex_.count(4) == 0:
        combos = [1 << i for i in range(n)]
    else:
        # [p] -> (1/2)[p]^2 is linear; read it in the Q/Z cokernel of d on C^3, where values lie in (1/2)Z/Z
        image = qz_coboundary_image(complex_, 3)
        columns = [image.kernel_values(qz_values(half(cup(h, h)))) for h in h2.representatives]
        rows = [sum(1 << i for i, col in enumerate(columns) if int(2 * col[r]) % 2) for r in range(image.cokernel_rank)]
        combos = GF2System(rows, n).kernel()
    basis = tuple(h2.combination([(c >> i) & 1 for i in range(n)]) for c in combos)
    # columns: H^2 coordinates of each basis element, so any SH^2 class can be expressed in the basis
    coordinate_rows = [sum(1 << j for j, c in enumerate(combos) if (c >> i) & 1) for i in range(n)]
    logger.debug("SH^2(%s): dimension %d of %d", complex_.name, len(basis), n)
    return basis, GF2System(coordinate_rows, len(combos))


def sh2_coordinates(p: Cochain) -> tuple[int, ...]:
    basis, system = _sh2(p.complex)
    h2 = z2_cohomology(p.complex, 2)
    coords = h2.coordinates(p)
    found = system.solve(sum(1 << i for i, bit in enumerate(coords) if bit))
    if found is None:
        raise NotInSH2Error("class of p is not in SH^2")
    return tuple((found >> j) & 1 for j in range(len(basis)))


def lift_to_G1(p: Cochain) -> Triple:  # noqa: N802
    """A triple (w, p, 0) with dw = -(1/2) p^2."""
    if p.ring is not Ring.Z2 or p.degree != 2 or not d(p).is_zero():
        raise CochainError("lift_to_G1 needs a Z/2 2-cocycle")
    w = solve_coboundary_qz(-half(cup(p, p)))
    if w is None:
        raise NotInSH2Error("class of p is not in SH^2")
    return Triple(w, p, _zero1(p.complex))


def filtration_class(g: Triple) -> FiltrationClass:
    _require_d_cocycle(g)
    complex_ = g.complex
    a_coords = z2_cohomology(complex_, 1).coordinates(g.a)
    if any(a_coords):
        return FiltrationClass(FiltrationLevel.G_MOD_G1, a_coords)
    g1 = _clear_a(g)
    assert g1 is not None
    if any(z2_cohomology(complex_, 2).coordinates(g1.p)):
        return FiltrationClass(FiltrationLevel.G1_MOD_G2, sh2_coordinates(g1.p))
    t0 = solve_coboundary_gf2(g1.p)
    assert t0 is not None
    g2 = product(g1, inverse(big_d_prime(t0, _zero0(complex_))))
    pairings = tuple(integrate(g2.w, cycle) for cycle in homology(complex_, 3).basis_cycles)
    if any(pairings):
        return FiltrationClass(FiltrationLevel.G2, pairings)
    return FiltrationClass(FiltrationLevel.IDENTITY)


# -- structure --------------------------------------------------------------------------------------


def extension_cocycle(a: Cochain, b: Cochain) -> Triple:
    """((1/2) a (a u_1 b) b + (1/4) A B^2, ab, 0), the G^1 class measuring the extension by H^1."""
    for c in (a, b):
        if c.ring is not Ring.Z2 or c.degree != 1 or not d(c).is_zero():
            raise CochainError("extension cocycles need Z/2 1-cocycles")
    big_a, big_b = special_lift(a), special_lift(b)
    w = half(cup(cup(a, cup1(a, b)), b)) + _quarter(cup(big_a, cup(big_b, big_b)))
    return Triple(w, cup(a, b), _zero1(a.complex))


def central_correction(p: Cochain, q: Cochain) -> Triple:
    """((1/2) d(p u_2 q), 0, 0): (w,p,0)(v,q,b) = (v,q,b)(w,p,0) times this."""
    return Triple.from_w(half(d(cup2(p, q))))


@dataclass(frozen=True)
class GStructureReport:
    complex_name: str
    h1: int
    h1_basis: tuple[Cochain, ...]
    sh2: int
    sh2_basis: tuple[Cochain, ...]
    h3: AbelianGroupPresentation
    alpha: tuple[tuple[int, ...], ...]
    z_table: tuple[tuple[FiltrationClass, ...], ...]
    group_order: int | None = field(default=None)


def alpha_matrix(complex_: OrderedComplex) -> tuple[tuple[int, ...], ...]:
    """alpha: SH^2 -> H^3/2H^3 on the SH^2 basis, one row per basis element.

    Columns are the even invariant factors of H_3; the entry is the parity of k where
    (w,p,0)^2 pairs to k/d with the corresponding torsion cycle.
    """
    h_3 = homology(complex_, 3)
    even = [i for i, dd in enumerate(h_3.torsion) if dd % 2 == 0]
    cycles = h_3.basis_cycles[h_3.free_rank :]
    rows = []
    for p in sh2_basis(complex_):
        g = lift_to_G1(p)
        square = product(g, g)
        row = []
        for i in even:
            value = Fraction(integrate(square.w, cycles[i]))
            row.append((value * h_3.torsion[i]).numerator % 2)
        rows.append(tuple(row))
    return tuple(rows)


def group_order(report: GStructureReport) -> int | None:
    if report.h3.free_rank or report.h3.circle_rank:
        return None
    return 2**report.h1 * 2**report.sh2 * math.prod(report.h3.torsion)


def structure_report(complex_: OrderedComplex) -> GStructureReport:
    h1 = z2_cohomology(complex_, 1)
    sh2 = sh2_basis(complex_)
    h3 = cohomology(complex_, Ring.QZ, 3)
    z_table = tuple(
        tuple(filtration_class(extension_cocycle(ai, aj)) for aj in h1.representatives) for ai in h1.representatives
    )
    report = GStructureReport(
        complex_name=complex_.name,
        h1=h1.dimension,
        h1_basis=h1.representatives,
        sh2=len(sh2),
        sh2_basis=sh2,
        h3=h3,
        alpha=alpha_matrix(complex_),
        z_table=z_table,
    )
    order_ = group_order(report)
    logger.info("G(%s): h1=%d sh2=%d h3=%s order=%s", complex_.name, report.h1, report.sh2, h3.format(), order_)
    return replace(report, group_order=order_)


# -- order criteria ---------------------------------------------------------------------------------


def _require_cocycle1(a: Cochain) -> None:
    if a.ring is not Ring.Z2 or a.degree != 1:
        raise CochainError("expected a Z/2 1-cochain")
    if not d(a).is_zero():
        raise PreconditionError("a is not a cocycle")


def lifts_to_order2(a: Cochain) -> bool:
    """Whether (0,0,a) has a lift of order 2, i.e. [a]^2 = 0."""
    _require_cocycle1(a)
    return z2_cohomology(a.complex, 2).is_coboundary(cup(a, a))


def lifts_to_order4(a: Cochain, max_sh2_dim: int = 16) -> bool:
    """Whether some p in SH^2 satisfies P([a]^2) = 2[p]^2 in H^4(Z/4)."""
    _require_cocycle1(a)
    if lifts_to_order2(a):
        raise PreconditionError("[a]^2 = 0; use the order-2 criterion")
    complex_ = a.complex
    if complex_.count(4) == 0:
        return True
    basis = sh2_basis(complex_)
    if len(basis) > max_sh2_dim:
        logger.warning("Refusing SH^2 search of dimension %d on %s", len(basis), complex_.name)
        raise SearchLimitError(f"SH^2 has dimension {len(basis)}, above the search cap {max_sh2_dim}")
    matrix = coboundary_matrix(complex_, 3)
    snf = smith_normal_form(matrix, complex_.count(3))
    a4 = cup_power(special_lift(a), 4)
    for bits in itertools.product((0, 1), repeat=len(basis)):
        p = Cochain.zero(complex_, 2, Ring.Z2)
        for bit, rep in zip(bits, basis):
            if bit:
                p = p + rep
        big_p = special_lift(p)
        target = map_coefficients(MOD4, a4 - 2 * cup(big_p, big_p))
        if solve_mod_n(matrix, [int(v) for v in target.to_vector()], 4, snf=snf) is not None:
            return True
    return False


# -- automorphisms and conventions ------------------------------------------------------------------


def chi(b: Cochain, g: Triple) -> Triple:
    """chi_b(g) = g times ((1/2) p b + (1/2) a (a u_1 b) b - (1/4) A B^2, ab, 0)."""
    _require_cocycle1(b)
    a = g.a
    big_a, big_b = special_lift(a), special_lift(b)
    w = half(cup(g.p, b)) + half(cup(cup(a, cup1(a, b)), b)) - _quarter(cup(big_a, cup(big_b, big_b)))
    return product(g, Triple(w, cup(a, b), _zero1(g.complex)))


def kapustin_form(g: Triple) -> Triple:
    """(w - A^3/8, p, a)."""
    return Triple(g.w - _eighth(cup_power(special_lift(g.a), 3)), g.p, g.a)


def from_kapustin_form(g: Triple) -> Triple:
    return Triple(g.w + _eighth(cup_power(special_lift(g.a), 3)), g.p, g.a)


def kapustin_relation(g: Triple) -> Cochain:
    """dw' + (1/2) p^2 + (1/4) P(a^2) for g already in Kapustin form; zero for D-cocycles."""
    return d(g.w) + half(cup(g.p, g.p)) + map_coefficients(QUARTER4, pontrjagin_square_sq(g.a))


def pullback_triple(f: SimplicialMap, g: Triple) -> Triple:
    return Triple(pullback_cochain(f, g.w), pullback_cochain(f, g.p), pullback_cochain(f, g.a))


# -- evaluation -------------------------------------------------------------------------------------


def evaluate_g1(
    g: Triple,
    cycle: SignedChain,
    t: Cochain,
    spin_term: Fraction | int = 0,
    arf_term: Fraction | int | None = None,
) -> Fraction:
    """arf_term + spin_term + integral over the cycle of w + (1/2)(p u_1 dt + t dt).

    The caller asserts that p + dt is pulled back from a reduced 2-cocycle on S^2; the spin and Arf
    terms are geometric inputs.
    """
    _require_d_cocycle(g)
    if Fraction(spin_term) % 1 not in (0, Fraction(1, 2)):
        raise ValueError(f"spin term must be 0 or 1/2, got {spin_term}")
    if not g.a.is_zero() and arf_term is None:
        raise ValueError("a is nonzero; an Arf term is required")
    if t.ring is not Ring.Z2 or t.degree != 1 or t.complex != g.complex:
        raise CochainError("t must be a Z/2 1-cochain on the same complex")
    dt = d(t)
    integrand = g.w + half(cup1(g.p, dt) + cup(t, dt))
    total = Fraction(arf_term or 0) + Fraction(spin_term) + Fraction(integrate(integrand, cycle))
    return total % 1

