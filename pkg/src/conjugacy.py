"""Sliding block codes, conjugacy certificates and the maps they induce.

A certificate is a pair of block codes ``f: X -> Y`` and ``g: Y -> X`` whose
compositions are checked to be the identity. The pullback ``Ψ(h) = h ∘ f``
carries functions on Y to functions on X; ``T`` and ``S`` carry the
correspondences into each other, and the generator images ``ρ(S_a)`` live in
the normal-form calculus of X.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

from . import scalars
from .algebra import AlgebraElement, Atom, BasicSet, LevelIndex, get_algebra, k0_presentation
from .calculus import StarElement, get_calculus
from .correspondence import (
    CorrElement,
    basis_elements,
    generator_sets,
    inner_product,
    lambda_a,
    phi,
    phi_tilde,
    set_sigma_forward,
    xi,
)
from .errors import InputError, ShiftMismatchError, VerificationError
from .parser import parse_block_code
from .report import InvariantReport, Report, ShiftInvariants
from .shift import EMPTY, Subshift, Word
from .verify import GAUGE_SAMPLES, psi

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class BlockCode:
    """Sliding-window map ``ψ(x)_i = table[x_i ... x_{i+window-1}]`` from ``source`` to ``target``."""

    source: Subshift
    target: Subshift
    window: int
    table: Dict[Word, int]
    _preimages: Dict[int, Dict[Word, List[Word]]] = field(default_factory=dict, init=False, repr=False)
    _pullback: Optional["CylinderPullback"] = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.window < 1:
            raise InputError("window must be at least 1")
        for word, symbol in self.table.items():
            if len(word) != self.window:
                raise InputError(
                    f"table entry {self.source.alphabet.format_word(word)} has length {len(word)}, expected {self.window}"
                )
            self.source.alphabet.check_word(word)
            self.target.alphabet.check_word((symbol,))
        missing = [w for w in self.source.enumerate_language(self.window) if w not in self.table]
        if missing:
            raise InputError(
                f"block code {self.source.name} -> {self.target.name} has no entry for "
                + ", ".join(self.source.alphabet.format_word(w) for w in missing)
            )

    @classmethod
    def from_text(cls, text: str, source: Subshift, target: Subshift) -> "BlockCode":
        window, raw, lines = parse_block_code(text)
        table: Dict[Word, int] = {}
        for word_text, symbol_text in raw.items():
            line = lines[word_text]
            try:
                word = source.alphabet.parse_word(word_text)
                symbol = target.alphabet.index(symbol_text)
            except InputError as e:
                raise InputError(e.detail, line=line) from None
            if len(word) != window:
                raise InputError(f"entry {word_text!r} has length {len(word)}, expected {window}", line=line)
            if not source.is_in_language(word):
                logger.warning("Block code entry %s is not in the language of %s, ignoring it", word_text, source.name)
                continue
            table[word] = symbol
        return cls(source=source, target=target, window=window, table=table)

    def apply(self, word: Word) -> Word:
        """Image of a source word: one target symbol per full window."""
        n = len(word) - self.window + 1
        if n <= 0:
            return EMPTY
        image = []
        for i in range(n):
            block = word[i : i + self.window]
            if block not in self.table:
                raise InputError(f"no table entry for {self.source.alphabet.format_word(block)}")
            image.append(self.table[block])
        return tuple(image)

    def preimages(self, nu: Word) -> List[Word]:
        """Source words of length ``|nu| + window - 1`` whose image is ``nu``; their cylinders partition ``ψ^{-1}(C(nu))``."""
        n = len(nu) + self.window - 1
        if n not in self._preimages:
            index: Dict[Word, List[Word]] = {}
            for word in self.source.enumerate_language(n):
                index.setdefault(self.apply(word), []).append(word)
            self._preimages[n] = index
        return self._preimages[n].get(tuple(nu), [])

    def describe(self) -> str:
        return f"{self.source.name} -> {self.target.name} (window {self.window})"


def identity_code(shift: Subshift) -> BlockCode:
    return BlockCode(source=shift, target=shift, window=1, table={(a,): a for a in shift.alphabet})


@dataclass(eq=False)
class ConjugacyCertificate:
    forward: BlockCode
    inverse: BlockCode
    depth: int

    @property
    def source(self) -> Subshift:
        return self.forward.source

    @property
    def target(self) -> Subshift:
        return self.forward.target

    def pullback(self) -> "CylinderPullback":
        """``Ψ``: functions on the target pulled back to the source."""
        return _pullback_for(self.forward)

    def inverse_pullback(self) -> "CylinderPullback":
        return _pullback_for(self.inverse)

    def summary(self) -> Dict[str, object]:
        return {
            "source": self.source.name,
            "target": self.target.name,
            "forward_window": self.forward.window,
            "inverse_window": self.inverse.window,
            "depth": self.depth,
        }


class CylinderPullback:
    """Composition with a block code, computed on cylinders and atoms."""

    def __init__(self, code: BlockCode) -> None:
        self.code = code
        self.domain = get_algebra(code.source)
        self.codomain = get_algebra(code.target)
        self._cylinders: Dict[Word, AlgebraElement] = {}
        self._shifted: Dict[Word, AlgebraElement] = {}
        self._atoms: Dict[Tuple[LevelIndex, int], AlgebraElement] = {}

    def cylinder(self, nu: Word) -> AlgebraElement:
        """Pullback of ``1_{C(nu)}``: the sum of the cylinders of its preimage words."""
        nu = self.code.target.alphabet.check_word(nu)
        if nu not in self._cylinders:
            total = self.domain.zero()
            for word in self.code.preimages(nu):
                total = total + self.domain.cylinder(word)
            self._cylinders[nu] = total
        return self._cylinders[nu]

    def shifted_cylinder(self, mu: Word) -> AlgebraElement:
        """Pullback of ``1_{σ^{|mu|}(C(mu))}``, pushed forward through the source shift."""
        if mu not in self._shifted:
            e = self.cylinder(mu)
            for _ in mu:
                e = set_sigma_forward(e)
            self._shifted[mu] = e
        return self._shifted[mu]

    def basic(self, b: BasicSet) -> AlgebraElement:
        """Pullback of ``1_{C(mu, nu)} = 1_{C(nu)} · 1_{σ^{-|nu|}σ^{|mu|}C(mu)}``."""
        e = self.shifted_cylinder(self.code.target.alphabet.check_word(b.mu))
        for _ in b.nu:
            e = phi_tilde(e)
        return self.cylinder(b.nu) * e

    def atom(self, level: LevelIndex, index: int) -> AlgebraElement:
        key = (level, index)
        if key not in self._atoms:
            atom: Atom = self.codomain.atoms(level)[index]
            tail = self.domain.unit()
            for mu, inside in self.codomain.class_polynomial(atom.cls, level.l):
                a_mu = self.shifted_cylinder(mu)
                tail = tail * (a_mu if inside else 1 - a_mu)
            for _ in range(level.k):
                tail = phi_tilde(tail)
            self._atoms[key] = self.cylinder(atom.nu) * tail
        return self._atoms[key]

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        if f.algebra is not self.codomain:
            raise ShiftMismatchError(f"element of {f.shift.name} cannot be pulled back along {self.code.describe()}")
        total = self.domain.zero()
        for index, c in f.coeffs.items():
            total = total + self.atom(f.level, index) * c
        return total


def _pullback_for(code: BlockCode) -> CylinderPullback:
    if code._pullback is None:
        code._pullback = CylinderPullback(code)
    return code._pullback


def verify_block_code(code: BlockCode, depth: int) -> Report:
    """Every image of ``L^{k+m-1}(X)`` must lie in ``L^k(Y)`` for ``k <= depth``."""
    report = Report(suite="block code", shift=code.describe(), depth=depth)
    fmt_source, fmt_target = code.source.alphabet.format_word, code.target.alphabet.format_word
    for k in range(1, depth + 1):
        for word in code.source.enumerate_language(k + code.window - 1):
            image = code.apply(word)
            report.record(
                "image lies in the target language",
                code.target.is_in_language(image),
                fmt_source(word),
                fmt_target(image),
                f"L^{k}({code.target.name})",
            )
    logger.info("Block code %s at depth %d: passed=%s", code.describe(), depth, report.passed)
    return report


def _check_compositions(first: BlockCode, second: BlockCode, depth: int) -> None:
    """``second ∘ first`` must return the leading symbols of every word."""
    lag = first.window + second.window - 2
    fmt = first.source.alphabet.format_word
    for n in range(lag + 1, lag + depth + 1):
        for word in first.source.enumerate_language(n):
            try:
                back: Optional[Word] = second.apply(first.apply(word))
            except InputError:
                back = None
            if back == word[: n - lag]:
                continue
            witness = {"word": fmt(word), "round_trip": "undefined" if back is None else fmt(back)}
            for other in first.source.enumerate_language(n):
                if other != word and first.apply(other) == first.apply(word):
                    witness["pair"] = [fmt(word), fmt(other)]
                    witness["common_image"] = first.target.alphabet.format_word(first.apply(word))
                    break
            raise VerificationError(
                f"{second.describe()} does not invert {first.describe()} on {fmt(word)}", witness=witness
            )


def verify_conjugacy(forward: BlockCode, inverse: BlockCode, depth: int) -> ConjugacyCertificate:
    if inverse.source is not forward.target or inverse.target is not forward.source:
        raise ShiftMismatchError(f"{inverse.describe()} does not run opposite to {forward.describe()}")
    if depth < 1:
        raise InputError("conjugacy depth must be at least 1")
    for code in (forward, inverse):
        report = verify_block_code(code, depth)
        if not report.passed:
            example = report.counterexamples[0]
            raise VerificationError(
                f"{code.describe()} maps {example.instance} to {example.lhs}, which is not in {code.target.name}",
                witness={"word": example.instance, "image": example.lhs},
            )
    _check_compositions(forward, inverse, depth)
    _check_compositions(inverse, forward, depth)
    logger.info("Conjugacy certificate issued for %s at depth %d", forward.describe(), depth)
    return ConjugacyCertificate(forward=forward, inverse=inverse, depth=depth)


def pullback_Psi(cert: ConjugacyCertificate, f: AlgebraElement) -> AlgebraElement:  # noqa: N802
    """``Ψ(f) = f ∘ ψ`` for an element over the target."""
    return cert.pullback()(f)


def pullback_basic(cert: ConjugacyCertificate, b: BasicSet) -> AlgebraElement:
    return cert.pullback().basic(b)


def _corr_map(pullback: CylinderPullback, x: CorrElement) -> CorrElement:
    if x.algebra is not pullback.codomain:
        raise ShiftMismatchError(f"correspondence element of {x.shift.name} used with {pullback.code.describe()}")
    images = {a: pullback(f) for a, f in x.components.items()}
    components = {}
    for b in pullback.code.source.alphabet:
        total = pullback.domain.zero()
        for a, image in images.items():
            total = total + lambda_a(b, pullback.cylinder((a,))) * image
        components[b] = total
    return CorrElement(pullback.domain, components)


def corr_map_T(cert: ConjugacyCertificate, x: CorrElement) -> CorrElement:  # noqa: N802
    """``T(f_a)_b = Σ_a λ̃_b(Ψ(1_{C(a)})) Ψ(f_a)``, from the target correspondence to the source one."""
    return _corr_map(cert.pullback(), x)


def corr_map_S(cert: ConjugacyCertificate, x: CorrElement) -> CorrElement:  # noqa: N802
    return _corr_map(cert.inverse_pullback(), x)


def verify_corr_isomorphism(cert: ConjugacyCertificate, depth: int) -> Report:
    """Ψ is a unital *-isomorphism on snapshots and ``T`` intertwines the correspondences."""
    x_shift, y_shift = cert.source, cert.target
    report = Report(suite="correspondence isomorphism", shift=f"{x_shift.name} / {y_shift.name}", depth=depth)
    forward, backward = cert.pullback(), cert.inverse_pullback()
    x_alg, y_alg = forward.domain, forward.codomain
    fmt_x, fmt_y = x_shift.alphabet.format_word, y_shift.alphabet.format_word

    report.record("Psi(1) = 1", forward(y_alg.unit()) == x_alg.unit(), "", forward(y_alg.unit()), x_alg.unit())

    corr_generators = max(depth - 1, 0)
    y_generators = generator_sets(y_shift, depth)
    y_functions = {b: y_alg.embed_basic(b) for b in y_generators}
    for b, f in y_functions.items():
        instance = f"C({fmt_y(b.mu)},{fmt_y(b.nu)})"
        image = forward(f)
        report.record("Psi on atoms agrees with Psi on cylinders", image == forward.basic(b), instance, image, forward.basic(b))
        report.record("Psi^-1 Psi = id", backward(image) == f, instance, backward(image), f)
        twisted = f * scalars.IMAG_UNIT
        report.record("Psi preserves adjoints", forward(twisted.adjoint()) == forward(twisted).adjoint(), instance)
        for b2, g in y_functions.items():
            if len(b.mu) + len(b.nu) + len(b2.mu) + len(b2.nu) > depth:
                continue
            lhs, rhs = forward(f * g), image * forward(g)
            report.record("Psi is multiplicative", lhs == rhs, f"{instance} * C({fmt_y(b2.mu)},{fmt_y(b2.nu)})", lhs, rhs)
    for b in generator_sets(x_shift, depth):
        f = x_alg.embed_basic(b)
        report.record("Psi Psi^-1 = id", forward(backward(f)) == f, f"C({fmt_x(b.mu)},{fmt_x(b.nu)})", forward(backward(f)), f)

    for l in range(depth + 1):
        for k in range(l + 1):
            level = LevelIndex(k, l)
            images = [forward.atom(level, i) for i in range(len(y_alg.atoms(level)))]
            ok = all(not e.is_zero() for e in images)
            ok = ok and all((e * e2).is_zero() for i, e in enumerate(images) for e2 in images[i + 1 :])
            report.record("Psi is injective on atoms", ok, f"level {level}")

    for a in y_shift.alphabet:
        for b in x_shift.alphabet:
            lhs = backward(lambda_a(b, forward.cylinder((a,))))
            rhs = lambda_a(a, backward.cylinder((b,)))
            report.record("Psi^-1(lambda_b(Psi(1_C(a)))) = lambda_a(Psi^-1(1_C(b)))", lhs == rhs, f"a={fmt_y((a,))} b={fmt_x((b,))}", lhs, rhs)

    y_basis = basis_elements(y_shift, generator_sets(y_shift, corr_generators))
    x_basis = basis_elements(x_shift, generator_sets(x_shift, corr_generators))
    t_images = [corr_map_T(cert, v) for v in y_basis]
    s_images = [corr_map_S(cert, w) for w in x_basis]
    for v, tv in zip(y_basis, t_images):
        report.record("S T = id", corr_map_S(cert, tv) == v, str(v), corr_map_S(cert, tv), v)
        for v2, tv2 in zip(y_basis, t_images):
            lhs, rhs = inner_product(tv, tv2), forward(inner_product(v, v2))
            report.record("<T xi, T eta> = Psi(<xi, eta>)", lhs == rhs, f"{v} / {v2}", lhs, rhs)
        for w, sw in zip(x_basis, s_images):
            lhs, rhs = inner_product(tv, w), forward(inner_product(v, sw))
            report.record("<T xi, zeta> = Psi(<xi, S zeta>)", lhs == rhs, f"{v} / {w}", lhs, rhs)
        for b, f in y_functions.items():
            if len(b.mu) + len(b.nu) > corr_generators:
                continue
            lhs, rhs = corr_map_T(cert, phi(f, v)), phi(forward(f), tv)
            report.record("T(phi(f) xi) = phi(Psi(f)) T(xi)", lhs == rhs, f"{v} f={f}", lhs, rhs)
    for w, sw in zip(x_basis, s_images):
        report.record("T S = id", corr_map_T(cert, sw) == w, str(w), corr_map_T(cert, sw), w)
    logger.info("Correspondence isomorphism for %s at depth %d: passed=%s", cert.forward.describe(), depth, report.passed)
    return report


def induced_generator_images(cert: ConjugacyCertificate) -> Dict[int, StarElement]:
    """``ρ(S_a) = Σ_b S_b · T(ξ_a)_b`` in the calculus of the source, one entry per target symbol."""
    calc = get_calculus(cert.source)
    return {a: psi(calc, corr_map_T(cert, xi(cert.target, a))) for a in cert.target.alphabet}


def check_generator_images(cert: ConjugacyCertificate, depth: int) -> Report:
    """The images satisfy the target's relations and are homogeneous of degree 1."""
    calc = get_calculus(cert.source)
    y_shift = cert.target
    forward = cert.pullback()
    images = induced_generator_images(cert)
    fmt = y_shift.alphabet.format_word
    report = Report(suite="generator images", shift=f"{cert.source.name} / {y_shift.name}", depth=depth)
    identity = calc.identity()

    total = calc.zero()
    for a, s in images.items():
        total = total + s * s.adjoint()
        report.record("image is homogeneous of degree 1", s.degrees() == [1], fmt((a,)), s.degrees(), [1])
        report.record("image is a partial isometry", s * s.adjoint() * s == s, fmt((a,)), s * s.adjoint() * s, s)
        for z in GAUGE_SAMPLES:
            lhs, rhs = calc.gauge_act(s, z), s.scale(z)
            report.record("gamma_z(rho(S_a)) = rho(gamma_z(S_a))", lhs == rhs, f"a={fmt((a,))} z={scalars.format_scalar(z)}", lhs, rhs)
    report.record("sum rho(S_a) rho(S_a)* = I", total == identity, "", total, identity)

    words = [w for n in range(depth + 1) for w in product(range(len(y_shift.alphabet)), repeat=n)]
    s_words = {w: calc.product(images[a] for a in w) for w in words}
    a_words = {w: s_words[w].adjoint() * s_words[w] for w in words}
    for w in words:
        rhs = calc.from_algebra(forward.shifted_cylinder(w))
        report.record("rho(S_mu)* rho(S_mu) = Psi(A_mu)", a_words[w] == rhs, fmt(w), a_words[w], rhs)
    legal = [w for w in words if y_shift.is_in_language(w)]
    for mu in legal:
        for nu in legal:
            instance = f"mu={fmt(mu)} nu={fmt(nu)}"
            range_nu = s_words[nu] * s_words[nu].adjoint()
            lhs, rhs = a_words[mu] * range_nu, range_nu * a_words[mu]
            report.record("rho(A_mu) commutes with rho(S_nu S_nu*)", lhs == rhs, instance, lhs, rhs)
            lhs, rhs = a_words[mu] * a_words[nu], a_words[nu] * a_words[mu]
            report.record("rho(A_mu) rho(A_nu) = rho(A_nu) rho(A_mu)", lhs == rhs, instance, lhs, rhs)
    logger.info("Generator images for %s at depth %d: passed=%s", cert.forward.describe(), depth, report.passed)
    return report


def shift_invariants(shift: Subshift, depth: int) -> ShiftInvariants:
    algebra = get_algebra(shift)
    a_tower = algebra.bratteli("A", depth)
    return ShiftInvariants(
        shift=shift.name,
        m=[algebra.m(l) for l in range(depth + 1)],
        diagonal_atoms=[len(algebra.atoms(LevelIndex(j, j))) for j in range(depth + 1)],
        a_tower=a_tower,
        diagonal_tower=algebra.bratteli("diagonal", depth),
        k0=k0_presentation(a_tower),
    )


def compare_invariants(
    x: Subshift, y: Subshift, depth: int, cert: Optional[ConjugacyCertificate] = None
) -> InvariantReport:
    """Side-by-side invariants; with a certificate the isomorphism data is verified as well."""
    source, target = shift_invariants(x, depth), shift_invariants(y, depth)
    lag = next((d for d in range(depth + 1) if source.m[d:] == target.m[d:]), None)
    result = InvariantReport(
        depth=depth,
        source=source,
        target=target,
        m_equal=source.m == target.m,
        level_lag=lag,
    )
    if lag is not None and lag > 0:
        result.notes.append(f"m(l) sequences agree from level {lag} on")
    if cert is None:
        result.notes.append("no certificate supplied: matching invariants do not prove conjugacy")
        return result
    if cert.source is not x or cert.target is not y:
        raise ShiftMismatchError(f"certificate {cert.forward.describe()} does not match {x.name} -> {y.name}")
    window_lag = cert.forward.window + cert.inverse.window
    if lag is not None and lag > window_lag:
        result.notes.append(f"level lag {lag} exceeds the window bound {window_lag}")
    corr = verify_corr_isomorphism(cert, depth)
    images = check_generator_images(cert, depth)
    result.certificate = {
        **cert.summary(),
        "correspondence_isomorphism": corr.passed,
        "generator_images": images.passed,
    }
    return result
