"""Randomized property suites over random small complexes, behind ``gx verify laws``.

Every shard (one random complex) draws from its own ``random.Random`` seeded from the run seed and
the shard index, so a run is reproducible regardless of how shards are spread over workers.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .arf import QuadraticForm, arf, direct_sum, gauss_sum, negate, radical_dimension
from .builtin_complexes import rp2, simplex_boundary, torus
from .cochains import (
    Cochain,
    Ring,
    cup,
    cup1,
    cup2,
    cup_power,
    d,
    half,
    nth_part,
    pullback_cochain,
    special_lift,
)
from .complexes import OrderedComplex, SimplicialMap, barycentric_subdivision, join, wedge
from .ggroup import (
    Triple,
    big_d,
    big_d_prime,
    c_prime_product,
    cbar_equal,
    central_correction,
    chi,
    commutator,
    g_equal,
    inverse,
    is_identity,
    kapustin_form,
    kapustin_relation,
    lift_to_G1,
    power,
    product,
    pullback_triple,
    sh2_basis,
)
from .linalg import GF2System, cohomology, integer_cocycle_basis, is_qz_coboundary, z2_cocycle_basis
from .models import LawResult, LawsReport

logger = logging.getLogger(__name__)

SHARD_STRIDE = 1_000_003

Check = Callable[[random.Random, OrderedComplex], bool]


@dataclass(frozen=True)
class Law:
    name: str
    check: Check


# -- random data ------------------------------------------------------------------------------------


def random_complex(
    rng: random.Random, name: str = "random", max_vertices: int = 6, max_dim: int = 4
) -> OrderedComplex:
    n = rng.randint(3, max_vertices)
    facets = []
    for _ in range(rng.randint(2, 6)):
        size = rng.randint(2, min(n, max_dim + 1))
        facets.append(sorted(rng.sample(range(n), size)))
    return OrderedComplex.from_simplices(name, [str(i) for i in range(n)], facets)


def _simplex4() -> OrderedComplex:
    return OrderedComplex.from_simplices("simplex4", [str(i) for i in range(5)], [(0, 1, 2, 3, 4)])


def nontrivial_complexes() -> tuple[OrderedComplex, ...]:
    """Small complexes with non-zero H^1(Z/2), SH^2 or H^3, some carrying 4-simplices."""
    sphere0 = OrderedComplex.from_simplices("s0", ["n", "s"], [])
    return (
        rp2().complex,
        torus().complex,
        wedge(rp2().complex, _simplex4(), "rp2+simplex4"),
        wedge(torus().complex, simplex_boundary(3).complex, "torus+sphere2"),
        join(rp2().complex, sphere0, "suspended-rp2"),
    )


def shard_complex(rng: random.Random, index: int) -> OrderedComplex:
    """Even shards get a random complex, odd shards cycle through the nontrivial ones."""
    if index % 2 == 0:
        return random_complex(rng, f"random{index}")
    pool = nontrivial_complexes()
    return pool[(index // 2) % len(pool)]


def _random_value(rng: random.Random, ring: Ring) -> int | Fraction:
    if ring is Ring.Z:
        return rng.choice((-3, -2, -1, 1, 2, 3))
    if ring is Ring.Z4:
        return rng.randint(1, 3)
    if ring is Ring.QZ:
        return Fraction(rng.randint(1, 7), 8)
    return 1


def random_cochain(rng: random.Random, complex_: OrderedComplex, degree: int, ring: Ring) -> Cochain:
    values = {s: _random_value(rng, ring) for s in complex_.simplices_of(degree) if rng.random() < 0.5}
    return Cochain.from_values(complex_, degree, ring, values)


def _combination(rng: random.Random, basis: list[Cochain], zero: Cochain) -> Cochain:
    total = zero
    for z in basis:
        if rng.random() < 0.5:
            total = total + z
    return total


def random_z2_cocycle(rng: random.Random, complex_: OrderedComplex, degree: int) -> Cochain:
    return _combination(rng, z2_cocycle_basis(complex_, degree), Cochain.zero(complex_, degree, Ring.Z2))


def random_integer_cocycle(rng: random.Random, complex_: OrderedComplex, degree: int) -> Cochain:
    total = Cochain.zero(complex_, degree, Ring.Z)
    for z in integer_cocycle_basis(complex_, degree):
        total = total + rng.randint(-2, 2) * z
    return total


def random_qz_cocycle3(rng: random.Random, complex_: OrderedComplex) -> Cochain:
    return nth_part(8, random_integer_cocycle(rng, complex_, 3)) + half(random_z2_cocycle(rng, complex_, 3))


def random_triple(rng: random.Random, complex_: OrderedComplex) -> Triple:
    """Any triple with dp = 0 and da = 0; not necessarily a D-cocycle."""
    return Triple(
        random_cochain(rng, complex_, 3, Ring.QZ),
        random_z2_cocycle(rng, complex_, 2),
        random_z2_cocycle(rng, complex_, 1),
    )


def random_d_cocycle(rng: random.Random, complex_: OrderedComplex) -> Triple:
    """A product of D'(t, x), (w, 0, 0), a lift of an SH^2 class and (0, 0, a), in random order."""
    factors = [
        big_d_prime(random_cochain(rng, complex_, 1, Ring.Z2), random_cochain(rng, complex_, 0, Ring.Z2)),
        Triple.from_w(random_qz_cocycle3(rng, complex_)),
        lift_to_G1(_combination(rng, list(sh2_basis(complex_)), Cochain.zero(complex_, 2, Ring.Z2))),
        Triple.from_a(random_z2_cocycle(rng, complex_, 1)),
    ]
    rng.shuffle(factors)
    result = Triple.identity(complex_)
    for factor in factors:
        result = product(result, factor)
    return result


def random_nondegenerate_form(rng: random.Random, n: int, name: str = "form") -> QuadraticForm:
    while True:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = rng.randint(0, 1)
        masks = [sum(1 << j for j, v in enumerate(row) if v) for row in rows]
        if GF2System(masks, n).rank == n:
            q = [rows[i][i] + 2 * rng.randint(0, 1) for i in range(n)]
            return QuadraticForm.build(rows, q, name)


# -- group laws -------------------------------------------------------------------------------------


def _d_additive(rng: random.Random, x: OrderedComplex) -> bool:
    g1, g2 = random_triple(rng, x), random_triple(rng, x)
    return big_d(product(g1, g2)) == big_d(g1) + big_d(g2)


def _d_of_d_prime(rng: random.Random, x: OrderedComplex) -> bool:
    t, s = random_cochain(rng, x, 1, Ring.Z2), random_cochain(rng, x, 0, Ring.Z2)
    return big_d(big_d_prime(t, s)).is_zero()


def _d_prime_multiplicative(rng: random.Random, x: OrderedComplex) -> bool:
    tx = (random_cochain(rng, x, 1, Ring.Z2), random_cochain(rng, x, 0, Ring.Z2))
    sy = (random_cochain(rng, x, 1, Ring.Z2), random_cochain(rng, x, 0, Ring.Z2))
    return cbar_equal(big_d_prime(*c_prime_product(tx, sy)), product(big_d_prime(*tx), big_d_prime(*sy)))


def _associative(rng: random.Random, x: OrderedComplex) -> bool:
    g1, g2, g3 = (random_triple(rng, x) for _ in range(3))
    return cbar_equal(product(product(g1, g2), g3), product(g1, product(g2, g3)))


def _inverses(rng: random.Random, x: OrderedComplex) -> bool:
    g = random_triple(rng, x)
    one = Triple.identity(x)
    return cbar_equal(product(g, inverse(g)), one) and cbar_equal(product(inverse(g), g), one)


def _square(rng: random.Random, x: OrderedComplex) -> bool:
    g = random_triple(rng, x)
    big_a = special_lift(g.a)
    expected = Triple(g.w.scale(2) - nth_part(4, cup_power(big_a, 3)), cup(g.a, g.a), Cochain.zero(x, 1, Ring.Z2))
    return cbar_equal(power(g, 2), expected)


def _fourth_power(rng: random.Random, x: OrderedComplex) -> bool:
    g = random_triple(rng, x)
    expected = Triple.from_w(g.w.scale(4) + half(cup_power(g.a, 3)))
    return cbar_equal(power(g, 4), expected)


def _central(rng: random.Random, x: OrderedComplex) -> bool:
    g = Triple(random_cochain(rng, x, 3, Ring.QZ), random_z2_cocycle(rng, x, 2), Cochain.zero(x, 1, Ring.Z2))
    h = random_triple(rng, x)
    return cbar_equal(product(g, h), product(product(h, g), central_correction(g.p, h.p)))


def _commutator(rng: random.Random, x: OrderedComplex) -> bool:
    g1, g2 = random_d_cocycle(rng, x), random_d_cocycle(rng, x)
    return g_equal(commutator(g1, g2), big_d_prime(cup1(g1.a, g2.a), Cochain.zero(x, 0, Ring.Z2)))


def _kapustin(rng: random.Random, x: OrderedComplex) -> bool:
    return kapustin_relation(kapustin_form(random_d_cocycle(rng, x))).is_zero()


def _chi_involution(rng: random.Random, x: OrderedComplex) -> bool:
    g = random_d_cocycle(rng, x)
    b = random_z2_cocycle(rng, x, 1)
    return g_equal(chi(b, chi(b, g)), g) and g_equal(chi(Cochain.zero(x, 1, Ring.Z2), g), g)


def _eighth_power(rng: random.Random, x: OrderedComplex) -> bool:
    return is_identity(power(Triple.from_a(random_z2_cocycle(rng, x, 1)), 8))


def _identity_invariance(rng: random.Random, x: OrderedComplex) -> bool:
    g = random_d_cocycle(rng, x)
    verdict = is_identity(g)
    moved = product(g, big_d_prime(random_cochain(rng, x, 1, Ring.Z2), random_cochain(rng, x, 0, Ring.Z2)))
    shifted = Triple(g.w + d(random_cochain(rng, x, 2, Ring.QZ)), g.p, g.a)
    return is_identity(moved) == verdict and is_identity(shifted) == verdict


def _sh2_members(rng: random.Random, x: OrderedComplex) -> bool:
    return all(is_qz_coboundary(half(cup(p, p))) for p in sh2_basis(x))


# -- cochain identities -----------------------------------------------------------------------------


def _dd_zero(rng: random.Random, x: OrderedComplex) -> bool:
    k = rng.randint(0, max(x.top_dim - 1, 0))
    return d(d(random_cochain(rng, x, k, Ring.Z))).is_zero()


def _leibniz(rng: random.Random, x: OrderedComplex) -> bool:
    m, n = rng.randint(0, 2), rng.randint(0, 2)
    u, v = random_cochain(rng, x, m, Ring.Z), random_cochain(rng, x, n, Ring.Z)
    sign = -1 if m % 2 else 1
    return d(cup(u, v)) == cup(d(u), v) + sign * cup(u, d(v))


def _cup_associative(rng: random.Random, x: OrderedComplex) -> bool:
    u, v, w = (random_cochain(rng, x, rng.randint(0, 1), Ring.Z) for _ in range(3))
    return cup(cup(u, v), w) == cup(u, cup(v, w))


def _lift_coboundary(rng: random.Random, x: OrderedComplex) -> bool:
    big_a = special_lift(random_z2_cocycle(rng, x, 1))
    return d(big_a) == 2 * cup(big_a, big_a)


def _lift_of_sum(rng: random.Random, x: OrderedComplex) -> bool:
    a, b = random_z2_cocycle(rng, x, 1), random_z2_cocycle(rng, x, 1)
    big_a, big_b = special_lift(a), special_lift(b)
    return special_lift(a + b) == big_a + big_b + 2 * cup1(big_a, big_b)


def _square_of_sum(rng: random.Random, x: OrderedComplex) -> bool:
    a, b = random_z2_cocycle(rng, x, 1), random_z2_cocycle(rng, x, 1)
    big_a, big_b, big_c = special_lift(a), special_lift(b), special_lift(a + b)
    return cup(big_c, big_c) == cup(big_a, big_a) + cup(big_b, big_b) + d(cup1(big_a, big_b))


def _lift_coboundary2(rng: random.Random, x: OrderedComplex) -> bool:
    p = random_z2_cocycle(rng, x, 2)
    big_p = special_lift(p)
    return d(big_p) == 2 * cup1(big_p, big_p) and d(nth_part(4, big_p)) == half(cup1(p, p))


def _square_cup1_square(rng: random.Random, x: OrderedComplex) -> bool:
    big_a = special_lift(random_z2_cocycle(rng, x, 1))
    a2 = cup(big_a, big_a)
    return cup1(a2, a2).is_zero()


def _zero_cochain_lifts(rng: random.Random, x: OrderedComplex) -> bool:
    c = random_cochain(rng, x, 0, Ring.Z2)
    big_x, big_dx = special_lift(c), special_lift(d(c))
    return big_dx + d(big_x) == 2 * cup(big_dx, big_x) and big_dx - d(big_x) == 2 * cup(big_x, big_dx)


def _cup1_coboundary_11(rng: random.Random, x: OrderedComplex) -> bool:
    u, v = random_cochain(rng, x, 1, Ring.Z), random_cochain(rng, x, 1, Ring.Z)
    return d(cup1(u, v)) == -cup1(d(u), v) + cup1(u, d(v)) + cup(u, v) + cup(v, u)


def _cup1_coboundary_12(rng: random.Random, x: OrderedComplex) -> bool:
    u, q = random_cochain(rng, x, 1, Ring.Z), random_integer_cocycle(rng, x, 2)
    return d(cup1(u, q)) == -cup1(d(u), q) + cup(u, q) - cup(q, u)


def _cup1_coboundary_21(rng: random.Random, x: OrderedComplex) -> bool:
    p, u = random_integer_cocycle(rng, x, 2), random_cochain(rng, x, 1, Ring.Z)
    return d(cup1(p, u)) == -cup1(p, d(u)) + cup(p, u) - cup(u, p)


def _cup1_coboundary_22(rng: random.Random, x: OrderedComplex) -> bool:
    p, q = random_z2_cocycle(rng, x, 2), random_z2_cocycle(rng, x, 2)
    return d(cup1(p, q)) == cup(p, q) + cup(q, p)


def _cup2_coboundary(rng: random.Random, x: OrderedComplex) -> bool:
    p, q = random_z2_cocycle(rng, x, 2), random_z2_cocycle(rng, x, 2)
    return d(cup2(p, q)) == cup1(p, q) + cup1(q, p)


def _cube_primitive(rng: random.Random, x: OrderedComplex) -> bool:
    big_a = special_lift(random_z2_cocycle(rng, x, 1))
    return d(nth_part(8, cup_power(big_a, 3))) == nth_part(4, cup_power(big_a, 4))


# -- functoriality ----------------------------------------------------------------------------------


def _small(rng: random.Random) -> tuple[OrderedComplex, OrderedComplex, SimplicialMap]:
    base = random_complex(rng, "small", max_vertices=4, max_dim=2)
    subdivided, projection = barycentric_subdivision(base)
    return base, subdivided, projection


def _subdivision_cohomology(rng: random.Random, x: OrderedComplex) -> bool:
    base, subdivided, _ = _small(rng)
    for ring in Ring:
        for k in range(base.top_dim + 1):
            before, after = cohomology(base, ring, k), cohomology(subdivided, ring, k)
            if (before.free_rank, before.circle_rank, before.torsion) != (
                after.free_rank,
                after.circle_rank,
                after.torsion,
            ):
                return False
    return True


def _subdivision_products(rng: random.Random, x: OrderedComplex) -> bool:
    base, _, projection = _small(rng)
    u, v = random_cochain(rng, base, 1, Ring.Z), random_cochain(rng, base, 1, Ring.Z)
    pulled = cup(pullback_cochain(projection, u), pullback_cochain(projection, v))
    return pullback_cochain(projection, cup(u, v)) == pulled


def _pullback_coboundary(rng: random.Random, x: OrderedComplex) -> bool:
    base, _, projection = _small(rng)
    u = random_cochain(rng, base, rng.randint(0, base.top_dim), Ring.Z)
    return pullback_cochain(projection, d(u)) == d(pullback_cochain(projection, u))


def _subdivision_identity(rng: random.Random, x: OrderedComplex) -> bool:
    base, _, projection = _small(rng)
    g = random_d_cocycle(rng, base)
    return is_identity(g) == is_identity(pullback_triple(projection, g))


# -- Arf invariant ----------------------------------------------------------------------------------


def _arf_additive(rng: random.Random, x: OrderedComplex) -> bool:
    f1 = random_nondegenerate_form(rng, rng.randint(0, 6), "f1")
    f2 = random_nondegenerate_form(rng, rng.randint(0, 6), "f2")
    k1, k2, k = arf(f1).k, arf(f2).k, arf(direct_sum(f1, f2)).k
    return k1 is not None and k2 is not None and k == (k1 + k2) % 8


def _arf_norm(rng: random.Random, x: OrderedComplex) -> bool:
    n = rng.randint(0, 8)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randint(0, 1)
    f = QuadraticForm.build(rows, [rows[i][i] + 2 * rng.randint(0, 1) for i in range(n)])
    norm = gauss_sum(f).norm()
    return norm in (0, 2 ** (n + radical_dimension(f)))


def _arf_negation(rng: random.Random, x: OrderedComplex) -> bool:
    f = random_nondegenerate_form(rng, rng.randint(1, 6))
    k, k_neg = arf(f).k, arf(negate(f)).k
    return k is not None and k_neg == (-k) % 8


LAWS: tuple[Law, ...] = (
    Law("D is additive", _d_additive),
    Law("D o D' = 0", _d_of_d_prime),
    Law("D' is multiplicative", _d_prime_multiplicative),
    Law("product is associative", _associative),
    Law("inverses", _inverses),
    Law("square formula", _square),
    Law("fourth power formula", _fourth_power),
    Law("G1 is central up to d(p u_2 q)", _central),
    Law("commutators lie in the image of D'", _commutator),
    Law("Kapustin relation", _kapustin),
    Law("chi_b is an involution", _chi_involution),
    Law("(0,0,a)^8 is trivial", _eighth_power),
    Law("is_identity invariance", _identity_invariance),
    Law("SH^2 basis squares are coboundaries", _sh2_members),
    Law("d d = 0", _dd_zero),
    Law("Leibniz rule", _leibniz),
    Law("cup is associative", _cup_associative),
    Law("dA = 2A^2", _lift_coboundary),
    Law("lift of a + b", _lift_of_sum),
    Law("square of a lifted sum", _square_of_sum),
    Law("dP = 2 P u_1 P", _lift_coboundary2),
    Law("A^2 u_1 A^2 = 0", _square_cup1_square),
    Law("lifts of x and dx", _zero_cochain_lifts),
    Law("cup_1 coboundary (1,1)", _cup1_coboundary_11),
    Law("cup_1 coboundary (1,2)", _cup1_coboundary_12),
    Law("cup_1 coboundary (2,1)", _cup1_coboundary_21),
    Law("cup_1 coboundary (2,2) mod 2", _cup1_coboundary_22),
    Law("cup_2 coboundary mod 2", _cup2_coboundary),
    Law("d(A^3/8) = A^4/4", _cube_primitive),
    Law("subdivision preserves cohomology", _subdivision_cohomology),
    Law("pullback preserves cup products", _subdivision_products),
    Law("pullback commutes with d", _pullback_coboundary),
    Law("pullback preserves is_identity", _subdivision_identity),
    Law("Arf is additive", _arf_additive),
    Law("Gauss sum norm", _arf_norm),
    Law("Arf of -Q", _arf_negation),
)


# -- running ----------------------------------------------------------------------------------------

ShardResult = dict[str, tuple[int, int, str | None]]


def _run_shard(args: tuple[int, int, int, tuple[str, ...]]) -> ShardResult:
    seed, index, trials, names = args
    rng = random.Random(seed * SHARD_STRIDE + index)
    complex_ = shard_complex(rng, index)
    results: ShardResult = {}
    for law in LAWS:
        if law.name not in names:
            continue
        failures = 0
        counterexample = None
        for trial in range(trials):
            try:
                held = law.check(rng, complex_)
                error = ""
            except ValueError as e:
                held, error = False, f": {e}"
            if not held:
                failures += 1
                if counterexample is None:
                    counterexample = f"{complex_.name} (f-vector {complex_.f_vector}), trial {trial}{error}"
        results[law.name] = (trials, failures, counterexample)
    logger.debug("Shard %d on %s done", index, complex_.f_vector)
    return results


def run_laws(
    seed: int = 0, complexes: int = 20, trials: int = 10, workers: int = 1, only: tuple[str, ...] | None = None
) -> LawsReport:
    """Run every law (or those named in ``only``) ``trials`` times on each of ``complexes`` random complexes."""
    names = tuple(law.name for law in LAWS if only is None or law.name in only)
    if only is not None and len(names) != len(set(only)):
        unknown = sorted(set(only) - set(names))
        raise ValueError(f"unknown law(s): {', '.join(unknown)}")
    jobs = [(seed, i, trials, names) for i in range(complexes)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            shards = list(pool.map(_run_shard, jobs))
    else:
        shards = [_run_shard(job) for job in jobs]

    totals = {name: LawResult(name=name, trials=0) for name in names}
    for shard in shards:
        for name, (count, failures, counterexample) in shard.items():
            result = totals[name]
            result.trials += count
            result.failures += failures
            if result.counterexample is None:
                result.counterexample = counterexample
    laws = list(totals.values())
    passed = all(law.passed for law in laws)
    logger.info("Ran %d laws on %d complexes: %s", len(laws), complexes, "passed" if passed else "FAILED")
    return LawsReport(seed=seed, complexes=complexes, trials=trials, laws=laws, passed=passed)
