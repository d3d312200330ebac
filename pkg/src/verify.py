"""Verification suites: every identity is checked as an equality of normal forms.

A failed identity never raises; it is recorded in the returned report together
with both normal forms.
"""

import logging
import random
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Sequence

from . import scalars
from .algebra import BasicSet, LevelIndex
from .calculus import StarCalculus, StarElement, get_calculus
from .config import settings
from .correspondence import (
    CorrElement,
    apply_rank_one,
    basis_elements,
    generator_sets,
    inner_product,
    lambda_a,
    phi,
    phi_tilde,
    rank_one_decomposition,
    right_action,
    set_sigma_backward,
    set_sigma_forward,
    xi,
)
from .errors import InputError
from .report import Report
from .shift import EMPTY, Subshift, Word

logger = logging.getLogger(__name__)

GAUGE_SAMPLES = (scalars.IMAG_UNIT, scalars.gaussian(Fraction(3, 5), Fraction(4, 5)))


def _all_words(shift: Subshift, depth: int, min_length: int = 0) -> List[Word]:
    return [w for n in range(min_length, depth + 1) for w in product(range(len(shift.alphabet)), repeat=n)]


def _fmt(shift: Subshift, word: Word) -> str:
    return shift.alphabet.format_word(word)


def psi(calc: StarCalculus, x: CorrElement) -> StarElement:
    """``ψ((f_a)) = Σ_a S_a f_a``."""
    total = calc.zero()
    for a, f in x.components.items():
        total = total + calc.s((a,)) * calc.from_algebra(f)
    return total


def verify_relations(shift: Subshift, depth: int) -> Report:
    """Generator relations, the A_mu commutation rules, S_mu* S_mu on all words, and the single-generator case."""
    _check_depth(depth)
    calc = get_calculus(shift)
    report = Report(suite="relations", shift=shift.name, depth=depth)
    identity = calc.identity()

    total = calc.zero()
    for a in shift.alphabet:
        total = total + calc.s((a,)) * calc.s_star((a,))
    report.record("sum S_a S_a* = I", total == identity, "", total, identity)

    words = list(shift.language_up_to(depth))
    ranges = {w: calc.s(w) * calc.s_star(w) for w in words}
    a_mu = {w: calc.a(w) for w in words}
    for mu in words:
        for nu in words:
            instance = f"mu={_fmt(shift, mu)} nu={_fmt(shift, nu)}"
            lhs, rhs = a_mu[mu] * ranges[nu], ranges[nu] * a_mu[mu]
            report.record("A_mu S_nu S_nu* = S_nu S_nu* A_mu", lhs == rhs, instance, lhs, rhs)
            lhs, rhs = a_mu[mu] * a_mu[nu], a_mu[nu] * a_mu[mu]
            report.record("A_mu A_nu = A_nu A_mu", lhs == rhs, instance, lhs, rhs)

    algebra = calc.algebra
    for mu in _all_words(shift, depth):
        lhs = calc.s_star(mu) * calc.s(mu)
        rhs = calc.from_algebra(algebra.shifted_cylinder(mu))
        report.record("S_mu* S_mu = 1_{sigma^|mu|(C(mu))}", lhs == rhs, f"mu={_fmt(shift, mu)}", lhs, rhs)
    report.notes.append("S_mu* S_mu is checked against 1_{σ^{|mu|}(C(mu))} on the right-hand side")

    letters = shift.enumerate_language(1)
    if len(letters) == 1:
        s = calc.s(letters[0])
        report.record("one generator: S* S = I", s.adjoint() * s == identity, "", s.adjoint() * s, identity)
        report.record("one generator: S S* = I", s * s.adjoint() == identity, "", s * s.adjoint(), identity)
        pool = [s, s.adjoint()]
        for n in range(1, depth + 1):
            for factors in product(pool, repeat=n):
                x = calc.product(factors)
                keys = list(x.terms)
                ok = len(keys) == 1 and (not keys[0][0] or not keys[0][1]) and x.terms[keys[0]] == calc.algebra.unit()
                report.record("one generator: words reduce to S^n, S*^n or I", ok, f"length {n}", x, "single power")
    logger.info("relations on %s at depth %d: passed=%s", shift.name, depth, report.passed)
    return report


def verify_b_prime(shift: Subshift, depth: int) -> Report:
    """``S_mu* S_mu S_nu = S_nu S_{mu nu}* S_{mu nu}`` and both derivation chains."""
    _check_depth(depth)
    calc = get_calculus(shift)
    report = Report(suite="bprime", shift=shift.name, depth=depth)
    words = list(shift.language_up_to(depth))
    for mu in words:
        a_mu = calc.a(mu)
        for nu in words:
            instance = f"mu={_fmt(shift, mu)} nu={_fmt(shift, nu)}"
            s_nu = calc.s(nu)
            s_nu_star = s_nu.adjoint()
            a_munu = calc.a(mu + nu)
            lhs, rhs = a_mu * s_nu, s_nu * a_munu
            report.record("A_mu S_nu = S_nu A_{mu nu}", lhs == rhs, instance, lhs, rhs)

            # intertwining implies commutation
            range_nu = s_nu * s_nu_star
            sandwich = range_nu * a_mu * range_nu
            chain = [a_mu * range_nu, s_nu * a_munu * s_nu_star, sandwich]
            report.record("intertwining => commutation: first chain", _all_equal(chain), instance, chain[0], chain[-1])
            chain = [range_nu * a_mu, s_nu * (a_mu * s_nu).adjoint(), s_nu * (s_nu * a_munu).adjoint(), sandwich]
            report.record("intertwining => commutation: second chain", _all_equal(chain), instance, chain[0], chain[-1])
            report.record(
                "intertwining => commutation: conclusion", a_mu * range_nu == range_nu * a_mu, instance, a_mu * range_nu, range_nu * a_mu
            )

            # commutation implies intertwining
            chain = [a_mu * s_nu, a_mu * range_nu * s_nu, range_nu * a_mu * s_nu, s_nu * a_munu]
            report.record("commutation => intertwining", _all_equal(chain), instance, chain[0], chain[-1])
    logger.info("intertwining on %s at depth %d: passed=%s", shift.name, depth, report.passed)
    return report


def _all_equal(items: Sequence[StarElement]) -> bool:
    return all(items[0] == item for item in items[1:])


def verify_partial_isometries(shift: Subshift, depth: int) -> Report:
    calc = get_calculus(shift)
    report = Report(suite="partial isometries", shift=shift.name, depth=depth)
    for mu in _all_words(shift, depth):
        s = calc.s(mu)
        lhs = s * s.adjoint() * s
        report.record("S_mu S_mu* S_mu = S_mu", lhs == s, f"mu={_fmt(shift, mu)}", lhs, s)
    return report


def verify_word_orthogonality(shift: Subshift, depth: int) -> Report:
    calc = get_calculus(shift)
    report = Report(suite="word orthogonality", shift=shift.name, depth=depth)
    for k in range(depth + 1):
        words = _all_words(shift, k, min_length=k)
        for mu in words:
            for nu in words:
                lhs = calc.s_star(mu) * calc.s(nu)
                rhs = calc.a(mu) if mu == nu else calc.zero()
                instance = f"mu={_fmt(shift, mu)} nu={_fmt(shift, nu)}"
                report.record("S_mu* S_nu = delta A_mu", lhs == rhs, instance, lhs, rhs)
    return report


def _projections(calc: StarCalculus, depth: int) -> Dict[int, List[StarElement]]:
    algebra = calc.algebra
    return {l: [calc.atom_projection(i, l) for i in range(algebra.m(l))] for l in range(depth + 1)}


def verify_atom_support(shift: Subshift, depth: int) -> Report:
    calc = get_calculus(shift)
    report = Report(suite="atom support", shift=shift.name, depth=depth)
    projections = _projections(calc, depth)
    for l in range(1, depth + 1):
        for k in range(1, l + 1):
            for mu in _all_words(shift, k, min_length=k):
                s = calc.s(mu)
                a_mu = calc.a(mu)
                for i, e in enumerate(projections[l]):
                    lhs = s * e * s.adjoint()
                    rhs = a_mu * e
                    instance = f"mu={_fmt(shift, mu)} i={i} l={l}"
                    report.record("S_mu E S_mu* != 0 iff A_mu E != 0", lhs.is_zero() == rhs.is_zero(), instance, lhs, rhs)
    return report


def verify_atom_family(shift: Subshift, depth: int) -> Report:
    calc = get_calculus(shift)
    report = Report(suite="atom family", shift=shift.name, depth=depth)
    projections = _projections(calc, depth)
    for l in range(1, depth + 1):
        for k in range(1, l + 1):
            family = []
            for mu in _all_words(shift, k, min_length=k):
                s = calc.s(mu)
                for i, e in enumerate(projections[l]):
                    family.append(((mu, i), s * e * s.adjoint()))
            for (key, p) in family:
                instance = f"mu={_fmt(shift, key[0])} i={key[1]} l={l}"
                report.record("S_mu E S_mu* is self-adjoint", p.adjoint() == p, instance, p.adjoint(), p)
                for (key2, q) in family:
                    lhs = p * q
                    rhs = p if key == key2 else calc.zero()
                    pair = f"{instance} / mu'={_fmt(shift, key2[0])} i'={key2[1]}"
                    report.record("S_mu E S_mu* are orthogonal projections", lhs == rhs, pair, lhs, rhs)
    return report


def verify_projection_family(shift: Subshift, depth: int) -> Report:
    """The E_i^l from the snapshot agree with the A_mu products and form a partition of I."""
    calc = get_calculus(shift)
    algebra = calc.algebra
    report = Report(suite="E family", shift=shift.name, depth=depth)
    identity = calc.identity()
    for l in range(depth + 1):
        family = [calc.atom_projection(i, l) for i in range(algebra.m(l))]
        for i, e in enumerate(family):
            built = calc.atom_projection_product(i, l)
            report.record("E_i^l equals its A_mu product", built == e, f"i={i} l={l}", built, e)
            for j, f in enumerate(family):
                rhs = e if i == j else calc.zero()
                report.record("E_i^l E_j^l = delta E_i^l", e * f == rhs, f"i={i} j={j} l={l}", e * f, rhs)
        total = calc.zero()
        for e in family:
            total = total + e
        report.record("sum_i E_i^l = I", total == identity, f"l={l}", total, identity)
        for mu in shift.language_up_to(l):
            expected = calc.zero()
            for i, e in enumerate(family):
                if mu in algebra.classes(l)[i].extensions:
                    expected = expected + e
            report.record("A_mu = sum of E_i^l admitting mu", calc.a(mu) == expected, f"mu={_fmt(shift, mu)} l={l}", calc.a(mu), expected)
    return report


def verify_lemmas(shift: Subshift, depth: int) -> Report:
    _check_depth(depth)
    report = Report(suite="lemmas", shift=shift.name, depth=depth)
    for check in (verify_partial_isometries, verify_word_orthogonality, verify_atom_support, verify_atom_family, verify_projection_family):
        report.merge(check(shift, depth))
    logger.info("lemmas on %s at depth %d: passed=%s", shift.name, depth, report.passed)
    return report


def verify_closure(shift: Subshift, depth: int) -> Report:
    """Cylinder projections versus the degree-0 embedding, and the level inclusions."""
    _check_depth(depth)
    calc = get_calculus(shift)
    algebra = calc.algebra
    report = Report(suite="closure", shift=shift.name, depth=depth)
    words = list(shift.language_up_to(depth))
    projections = {}
    for mu in words:
        for nu in words:
            lhs = calc.cylinder_projection(mu, nu)
            rhs = calc.basic(mu, nu)
            projections[(mu, nu)] = lhs
            report.record(
                "S_nu S_mu* S_mu S_nu* = 1_{C(mu,nu)}", lhs == rhs, f"mu={_fmt(shift, mu)} nu={_fmt(shift, nu)}", lhs, rhs
            )
            report.record("cylinder projection has degree 0", lhs.degrees() in ([], [0]), f"mu={_fmt(shift, mu)} nu={_fmt(shift, nu)}", lhs.degrees(), [0])

    generators = generator_sets(shift, depth)
    elements = {b: algebra.embed_basic(b) for b in generators}
    for b1 in generators:
        for b2 in generators:
            lhs = projections[(b1.mu, b1.nu)] * projections[(b2.mu, b2.nu)]
            rhs = calc.from_algebra(elements[b1] * elements[b2])
            report.record("cylinder map is multiplicative", lhs == rhs, f"{_basic(shift, b1)} * {_basic(shift, b2)}", lhs, rhs)

    unit = algebra.unit()
    report.record("iota_k(1) = 1", algebra.iota_k(unit) == unit and algebra.iota_k(unit).level == LevelIndex(1, 1), "", algebra.iota_k(unit), unit)
    for b1 in generators:
        f = elements[b1]
        up = algebra.iota_k(f)
        report.record("iota_k preserves adjoints", algebra.iota_k(f.adjoint()) == up.adjoint(), _basic(shift, b1), up, f)
        report.record("iota_k is the identity on functions", up == f, _basic(shift, b1), up, f)
        n = up.level.k
        for word, t in algebra.descriptors(n):
            if algebra.evaluate(f, word, t) != algebra.evaluate(up, word, t):
                report.record("iota_k keeps point values", False, f"{_basic(shift, b1)} at {_fmt(shift, word)}", up, f)
                break
        else:
            report.record("iota_k keeps point values", True, _basic(shift, b1))
        for b2 in generators:
            g = elements[b2]
            lhs, rhs = algebra.iota_k(f * g), up * algebra.iota_k(g)
            report.record("iota_k preserves products", lhs == rhs, f"{_basic(shift, b1)} * {_basic(shift, b2)}", lhs, rhs)
        if not b1.nu:
            refined = algebra.refine_A(f)
            report.record("refine_A is the identity on functions", refined == f and refined.level == LevelIndex(0, f.level.l + 1), _basic(shift, b1), refined, f)
    logger.info("closure on %s at depth %d: passed=%s", shift.name, depth, report.passed)
    return report


def _basic(shift: Subshift, b: BasicSet) -> str:
    return f"C({_fmt(shift, b.mu)},{_fmt(shift, b.nu)})"


def verify_toeplitz(shift: Subshift, depth: int) -> Report:
    """Correspondence axioms and the Toeplitz / coinvariance identities of ``(ψ, π)``."""
    _check_depth(depth)
    calc = get_calculus(shift)
    algebra = calc.algebra
    report = Report(suite="toeplitz", shift=shift.name, depth=depth)
    generators = generator_sets(shift, max(depth - 1, 0))
    functions = [algebra.embed_basic(b) for b in generators]
    basis = basis_elements(shift, generators)
    basis_psi = [psi(calc, x) for x in basis]
    unit = algebra.unit()
    identity = calc.identity()

    coinvariant = calc.zero()
    for a in shift.alphabet:
        coinvariant = coinvariant + calc.s((a,)) * calc.s_star((a,))
    report.record("k(1) = sum S_a S_a* = I", coinvariant == identity, "", coinvariant, identity)

    for x, px in zip(basis, basis_psi):
        report.record("phi(1) = Id", phi(unit, x) == x, str(x), phi(unit, x), x)
        rebuilt = None
        for a in shift.alphabet:
            part = right_action(xi(shift, a), x.component(a))
            rebuilt = part if rebuilt is None else rebuilt + part
        report.record("xi = sum_a xi_a f_a", rebuilt == x, str(x), rebuilt, x)
        report.record("<xi,xi> >= 0", inner_product(x, x).is_nonnegative(), str(x), inner_product(x, x), ">= 0")
        for y, py in zip(basis, basis_psi):
            ip = inner_product(x, y)
            report.record("<xi,eta> = <eta,xi>*", ip == inner_product(y, x).adjoint(), f"{x} / {y}", ip, inner_product(y, x))
            lhs, rhs = px.adjoint() * py, calc.from_algebra(ip)
            report.record("psi(xi)* psi(eta) = pi(<xi,eta>)", lhs == rhs, f"{x} / {y}", lhs, rhs)
        for f in functions:
            ip_right = inner_product(x, right_action(x, f))
            report.record("<xi, xi f> = <xi,xi> f", ip_right == inner_product(x, x) * f, f"{x} f={f}", ip_right, inner_product(x, x) * f)
            lhs, rhs = psi(calc, right_action(x, f)), px * calc.from_algebra(f)
            report.record("psi(xi f) = psi(xi) pi(f)", lhs == rhs, f"{x} f={f}", lhs, rhs)
            lhs, rhs = psi(calc, phi(f, x)), calc.from_algebra(f) * px
            report.record("psi(phi(f) xi) = pi(f) psi(xi)", lhs == rhs, f"{x} f={f}", lhs, rhs)
            lhs, rhs = apply_rank_one(rank_one_decomposition(f), x), phi(f, x)
            report.record("sum theta(xi_a lambda_a(f), xi_a) = phi(f)", lhs == rhs, f"{x} f={f}", lhs, rhs)

    for f in functions:
        total = calc.zero()
        for a in shift.alphabet:
            total = total + psi(calc, right_action(xi(shift, a), lambda_a(a, f))) * psi(calc, xi(shift, a)).adjoint()
        rhs = calc.from_algebra(f)
        report.record("coinvariance sum psi(xi_a lambda_a(f)) psi(xi_a)* = pi(f)", total == rhs, str(f), total, rhs)
        for a in shift.alphabet:
            image = lambda_a(a, f)
            report.record("lambda_a(f) lies in D_a", image * algebra.shifted_cylinder((a,)) == image, f"a={_fmt(shift, (a,))} f={f}", image, f)
            report.record("lambda_a preserves adjoints", lambda_a(a, f.adjoint()) == image.adjoint(), f"a={_fmt(shift, (a,))} f={f}", image, f)
            for g in functions:
                lhs, rhs = lambda_a(a, f * g), image * lambda_a(a, g)
                report.record("lambda_a is multiplicative", lhs == rhs, f"a={_fmt(shift, (a,))} f={f} g={g}", lhs, rhs)
        for g in functions:
            lhs, rhs = phi_tilde(f * g), phi_tilde(f) * phi_tilde(g)
            report.record("phi_tilde is multiplicative", lhs == rhs, f"f={f} g={g}", lhs, rhs)
        if f.is_indicator():
            lhs = set_sigma_forward(set_sigma_backward(f))
            rhs = f * set_sigma_forward(unit)
            report.record("sigma(sigma^-1(E)) = E ∩ sigma(X)", lhs == rhs, str(f), lhs, rhs)
    report.record("phi_tilde(1) = 1", phi_tilde(unit) == unit, "", phi_tilde(unit), unit)
    logger.info("toeplitz on %s at depth %d: passed=%s", shift.name, depth, report.passed)
    return report


def _random_element(calc: StarCalculus, words: Sequence[Word], rng: random.Random) -> StarElement:
    x = calc.zero()
    for _ in range(2):
        nu, w, mu = rng.choice(words), rng.choice(words), rng.choice(words)
        coefficient = scalars.gaussian(Fraction(rng.randint(1, 3), rng.randint(1, 2)), rng.randint(-1, 1))
        x = x + (calc.s(nu) * calc.a(w) * calc.s_star(mu)).scale(coefficient)
    return x


def engine_pool(calc: StarCalculus, depth: int) -> List[StarElement]:
    """Fixed generators and projections, then ``engine_samples`` elements drawn from a seeded generator."""
    shift = calc.shift
    letters = shift.enumerate_language(1)
    pool: List[StarElement] = []
    for a in letters:
        pool.extend([calc.s(a), calc.s_star(a)])
    words = shift.enumerate_language(min(2, depth))
    if words:
        pool.append(calc.a(words[-1]).scale(Fraction(1, 2)))
        pool.append(calc.s(words[0]) * calc.s_star(words[-1]) * scalars.IMAG_UNIT)
    pool.append(calc.identity() - calc.basic(letters[0], EMPTY))
    pool = pool[:6]
    rng = random.Random(f"{settings.engine_seed}:{shift.name}:{depth}")  # noqa: S311
    candidates = shift.language_up_to(min(2, depth))
    pool.extend(_random_element(calc, candidates, rng) for _ in range(settings.engine_samples))
    logger.debug("Engine pool for %s: %d fixed, %d drawn with seed %d", shift.name, len(pool) - settings.engine_samples, settings.engine_samples, settings.engine_seed)
    return pool


def verify_engine(shift: Subshift, depth: int) -> Report:
    """Associativity, bilinearity, the adjoint, unit laws, grading and the gauge action on a sample pool."""
    _check_depth(depth)
    calc = get_calculus(shift)
    report = Report(suite="engine", shift=shift.name, depth=depth)
    pool = engine_pool(calc, depth)
    identity = calc.identity()
    for n, x in enumerate(pool):
        report.record("I x = x I = x", identity * x == x and x * identity == x, f"x{n}", identity * x, x)
        report.record("x** = x", x.adjoint().adjoint() == x, f"x{n}", x.adjoint().adjoint(), x)
        for z in GAUGE_SAMPLES:
            report.record("gamma_z(x*) = gamma_z(x)*", calc.gauge_act(x.adjoint(), z) == calc.gauge_act(x, z).adjoint(), f"x{n} z={scalars.format_scalar(z)}")
    for (n, x), (m, y) in product(enumerate(pool), repeat=2):
        xy = x * y
        instance = f"x{n} y{m}"
        report.record("(xy)* = y* x*", xy.adjoint() == y.adjoint() * x.adjoint(), instance, xy.adjoint(), y.adjoint() * x.adjoint())
        graded_x, graded_y = calc.gauge_grade(x), calc.gauge_grade(y)
        expected: Dict[int, StarElement] = {}
        for d1, part1 in graded_x.items():
            for d2, part2 in graded_y.items():
                term = part1 * part2
                expected[d1 + d2] = expected[d1 + d2] + term if d1 + d2 in expected else term
        expected = {d: e for d, e in expected.items() if not e.is_zero()}
        actual = calc.gauge_grade(xy)
        ok = set(actual) == set(expected) and all(actual[d] == expected[d] for d in actual)
        report.record("grading of a product is the convolution", ok, instance, actual, expected)
        for z in GAUGE_SAMPLES:
            lhs, rhs = calc.gauge_act(xy, z), calc.gauge_act(x, z) * calc.gauge_act(y, z)
            report.record("gamma_z is multiplicative", lhs == rhs, f"{instance} z={scalars.format_scalar(z)}", lhs, rhs)
        for (k, w) in enumerate(pool):
            lhs, rhs = xy * w, x * (y * w)
            report.record("associativity", lhs == rhs, f"{instance} w{k}", lhs, rhs)
            lhs, rhs = x * (y + w.scale(3)), xy + (x * w).scale(3)
            report.record("bilinearity", lhs == rhs, f"{instance} w{k}", lhs, rhs)
    for z in GAUGE_SAMPLES:
        report.record("gamma_z(I) = I", calc.gauge_act(identity, z) == identity, f"z={scalars.format_scalar(z)}")
    logger.info("engine on %s at depth %d: passed=%s", shift.name, depth, report.passed)
    return report


SUITES: Dict[str, Callable[[Subshift, int], Report]] = {
    "relations": verify_relations,
    "lemmas": verify_lemmas,
    "bprime": verify_b_prime,
    "closure": verify_closure,
    "toeplitz": verify_toeplitz,
    "engine": verify_engine,
}


def run_suite(shift: Subshift, suite: str, depth: int) -> Report:
    if suite == "all":
        report = Report(suite="all", shift=shift.name, depth=depth)
        for name, check in SUITES.items():
            logger.info("Running %s suite on %s", name, shift.name)
            report.merge(check(shift, depth))
        return report
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; expected one of {', '.join([*SUITES, 'all'])}")
    return SUITES[suite](shift, depth)


def _check_depth(depth: int) -> None:
    if depth < 1:
        raise InputError("verification depth must be at least 1")
