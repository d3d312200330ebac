"""Command-line entry point."""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import BaseModel

from .algebra import LevelIndex, get_algebra, k0_presentation
from .calculus import get_calculus
from .config import settings
from .conjugacy import (
    BlockCode,
    ConjugacyCertificate,
    check_generator_images,
    compare_invariants,
    induced_generator_images,
    verify_block_code,
    verify_conjugacy,
    verify_corr_isomorphism,
)
from .errors import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED, InputError, SubshiftError, VerificationError
from .expression import evaluate, format_caret
from .parser import load_block_code_text, load_shift
from .report import (
    AtomEntry,
    AtomListing,
    BratteliDiagram,
    InvariantReport,
    K0Presentation,
    LanguageListing,
    PullbackListing,
    Report,
    RewriteResult,
    TailListing,
)
from .shift import Indeterminate, shortlex
from .verify import SUITES, run_suite

logger = logging.getLogger(__name__)


def _level(text: str) -> LevelIndex:
    try:
        k, l = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"level {text!r} must look like K,L") from None
    if k < 0 or l < 0:
        raise argparse.ArgumentTypeError(f"level {text!r} must have non-negative entries")
    return LevelIndex(k, l)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("depth must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subshift-cp",
        description="Finite towers, correspondences and normal forms for the algebra of a one-sided subshift",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--shift", required=True, help="shift definition file")
    common.add_argument("--format", choices=["human", "json"], default="human")
    depth = argparse.ArgumentParser(add_help=False)
    depth.add_argument("--depth", type=_positive, default=None, help="depth (default: SUBSHIFT_DEFAULT_DEPTH)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lang", parents=[common], help="list the words of length k")
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(handler=cmd_lang)

    p = sub.add_parser("tail", parents=[common], help="realizable tail types, optionally of a window")
    p.add_argument("--window", default=None)
    p.set_defaults(handler=cmd_tail)

    p = sub.add_parser("atoms", parents=[common], help="atoms of a snapshot level")
    p.add_argument("--level", type=_level, required=True, help="K,L")
    p.set_defaults(handler=cmd_atoms)

    for name, handler in (("bratteli", cmd_bratteli), ("k0", cmd_k0)):
        p = sub.add_parser(name, parents=[common, depth], help=f"{name} data of a tower")
        p.add_argument("--tower", choices=["A", "diagonal"], default="A")
        p.set_defaults(handler=handler)

    p = sub.add_parser("rewrite", parents=[common], help="normal form of an expression")
    p.add_argument("expression")
    p.add_argument("--assert-equal", dest="assert_equal", default=None, metavar="EXPR")
    p.set_defaults(handler=cmd_rewrite)

    p = sub.add_parser("verify", parents=[common, depth], help="run a verification suite")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.set_defaults(handler=cmd_verify)

    conj = sub.add_parser("conj", help="conjugacy certificates").add_subparsers(dest="action", required=True)
    for action, handler in (("verify", cmd_conj_verify), ("apply", cmd_conj_apply), ("compare", cmd_conj_compare)):
        p = conj.add_parser(action, parents=[common, depth])
        p.add_argument("--target", required=True, help="target shift definition file")
        p.add_argument("--code", required=action != "compare", default=None, help="block code source -> target")
        p.add_argument("--inverse", required=action != "compare", default=None, help="block code target -> source")
        p.set_defaults(handler=handler)
    return parser


def _depth(args: argparse.Namespace) -> int:
    return args.depth if args.depth is not None else settings.default_depth


def _emit(args: argparse.Namespace, model: BaseModel, human: str) -> None:
    print(model.model_dump_json(indent=2) if args.format == "json" else human)


def format_report(report: Report) -> str:
    lines = [f"suite {report.suite} on {report.shift}, depth {report.depth}"]
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        detail = f"{check.instances} instances" + (f", {check.failures} failed" if check.failures else "")
        lines.append(f"  {status} {check.name} ({detail})")
    for example in report.counterexamples:
        lines.append(f"  counterexample: {example.check} [{example.instance}]")
        lines.extend(f"    lhs: {line}" for line in example.lhs.splitlines())
        lines.extend(f"    rhs: {line}" for line in example.rhs.splitlines())
    lines.extend(f"  note: {note}" for note in report.notes)
    lines.append("passed" if report.passed else "FAILED")
    return "\n".join(lines)


def _matrix_lines(matrix: List[List[int]], indent: str = "    ") -> List[str]:
    return [indent + " ".join(str(v) for v in row) for row in matrix]


def format_bratteli(d: BratteliDiagram) -> str:
    lines = [f"{d.tower}-tower sizes: {' '.join(str(s) for s in d.sizes)}"]
    for j, matrix in enumerate(d.incidence):
        lines.append(f"  level {j} -> {j + 1}:")
        lines.extend(_matrix_lines(matrix))
    if d.stable:
        lines.append(f"stable from level {d.stable_from}")
    else:
        lines.append("not stable within depth")
    return "\n".join(lines)


def format_k0(k: K0Presentation) -> str:
    lines = [f"{k.tower}-tower sizes: {' '.join(str(s) for s in k.sizes)}"]
    if k.group:
        lines.append(f"K0: {k.group}")
    if k.matrix is not None:
        lines.append("connecting matrix:")
        lines.extend(_matrix_lines(k.matrix))
        lines.append(f"determinant: {k.determinant}")
        lines.append(f"invariant factors: {' '.join(str(f) for f in k.invariant_factors or [])}")
    if k.order_unit is not None:
        lines.append(f"order unit: ({' '.join(str(v) for v in k.order_unit)})")
    if k.note:
        lines.append(f"note: {k.note}")
    return "\n".join(lines)


def cmd_lang(args: argparse.Namespace) -> int:
    shift = load_shift(args.shift)
    words = shift.enumerate_language(args.k)
    listing = LanguageListing(
        shift=shift.name, length=args.k, count=len(words), words=[shift.alphabet.format_word(w) for w in words]
    )
    _emit(args, listing, "\n".join([f"L^{args.k}({shift.name}): {listing.count} words", *listing.words]))
    return EXIT_OK


def cmd_tail(args: argparse.Namespace) -> int:
    shift = load_shift(args.shift)
    listing = TailListing(shift=shift.name, realizable=[shift.describe_type(t) for t in shift.realizable_tail_types()])
    human = [f"{shift.name}: {len(listing.realizable)} realizable tail types", *(f"  {t}" for t in listing.realizable)]
    if args.window is not None:
        word = shift.alphabet.parse_word(args.window)
        listing.window = shift.alphabet.format_word(word)
        result = shift.tail_type_of_window(word)
        if isinstance(result, Indeterminate):
            listing.stable = False
            listing.candidates = [shift.describe_type(t) for t in result.candidates]
            listing.window_type = shift.describe_type(result.current) if result.current is not None else None
            human.append(f"window {listing.window}: indeterminate, candidates " + "; ".join(listing.candidates))
        else:
            listing.stable = True
            listing.window_type = shift.describe_type(result)
            human.append(f"window {listing.window}: {listing.window_type}")
    _emit(args, listing, "\n".join(human))
    return EXIT_OK


def cmd_atoms(args: argparse.Namespace) -> int:
    shift = load_shift(args.shift)
    algebra = get_algebra(shift)
    level: LevelIndex = args.level
    fmt = shift.alphabet.format_word
    entries = [
        AtomEntry(
            index=i,
            nu=fmt(atom.nu),
            tail_class=atom.cls,
            extensions=[fmt(w) for w in sorted(algebra.atom_extensions(atom, level), key=shortlex)],
        )
        for i, atom in enumerate(algebra.atoms(level))
    ]
    listing = AtomListing(
        shift=shift.name, k=level.k, l=level.l, count=len(entries), classes=algebra.m(level.l), atoms=entries
    )
    human = [f"level {level} of {shift.name}: {listing.count} atoms, {listing.classes} tail classes"]
    human.extend(f"  {e.index}: {e.nu}:{e.tail_class}  extensions {' '.join(e.extensions)}" for e in entries)
    _emit(args, listing, "\n".join(human))
    return EXIT_OK


def cmd_bratteli(args: argparse.Namespace) -> int:
    shift = load_shift(args.shift)
    diagram = get_algebra(shift).bratteli(args.tower, _depth(args))
    _emit(args, diagram, format_bratteli(diagram))
    return EXIT_OK


def cmd_k0(args: argparse.Namespace) -> int:
    shift = load_shift(args.shift)
    presentation = k0_presentation(get_algebra(shift).bratteli(args.tower, _depth(args)))
    _emit(args, presentation, format_k0(presentation))
    return EXIT_OK


def cmd_rewrite(args: argparse.Namespace) -> int:
    shift = load_shift(args.shift)
    calc = get_calculus(shift)
    x = evaluate(calc, args.expression)
    result = RewriteResult(shift=shift.name, expression=args.expression, normal_form=x.lines())
    human = list(result.normal_form)
    if args.assert_equal is not None:
        y = evaluate(calc, args.assert_equal)
        result.compared_with = args.assert_equal
        result.other_normal_form = y.lines()
        result.equal = x == y
        if result.equal:
            human.append("equal")
        else:
            human.extend(["differs from:", *result.other_normal_form])
    _emit(args, result, "\n".join(human))
    if result.equal is False:
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    shift = load_shift(args.shift)
    report = run_suite(shift, args.suite, _depth(args))
    _emit(args, report, format_report(report))
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def _load_pair(args: argparse.Namespace):
    source = load_shift(args.shift)
    target = load_shift(args.target)
    if args.code is None or args.inverse is None:
        return source, target, None
    forward = BlockCode.from_text(load_block_code_text(args.code), source, target)
    inverse = BlockCode.from_text(load_block_code_text(args.inverse), target, source)
    return source, target, (forward, inverse)


def _certificate(args: argparse.Namespace) -> ConjugacyCertificate:
    _, _, codes = _load_pair(args)
    forward, inverse = codes
    return verify_conjugacy(forward, inverse, _depth(args))


def cmd_conj_verify(args: argparse.Namespace) -> int:
    cert = _certificate(args)
    depth = _depth(args)
    report = Report(suite="conjugacy", shift=f"{cert.source.name} / {cert.target.name}", depth=depth)
    for part in (
        verify_block_code(cert.forward, depth),
        verify_block_code(cert.inverse, depth),
        verify_corr_isomorphism(cert, depth),
        check_generator_images(cert, depth),
    ):
        report.merge(part)
    summary = cert.summary()
    report.notes.append(
        f"certificate: {summary['source']} -> {summary['target']} windows "
        f"{summary['forward_window']}/{summary['inverse_window']}, verified to depth {summary['depth']}"
    )
    _emit(args, report, format_report(report))
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_conj_apply(args: argparse.Namespace) -> int:
    cert = _certificate(args)
    pullback = cert.pullback()
    fmt_y = cert.target.alphabet.format_word
    letters = cert.target.enumerate_language(1)
    listing = PullbackListing(
        source=cert.source.name,
        target=cert.target.name,
        cylinders={fmt_y(a): str(pullback.cylinder(a)) for a in letters},
        shifted_cylinders={fmt_y(a): str(pullback.shifted_cylinder(a)) for a in letters},
        generator_images={fmt_y((a,)): s.lines() for a, s in induced_generator_images(cert).items()},
    )
    human = [f"Psi: {cert.target.name} -> {cert.source.name}"]
    human.extend(f"  Psi(1_C({name})) = {image}" for name, image in listing.cylinders.items())
    human.extend(f"  Psi(A_{name}) = {image}" for name, image in listing.shifted_cylinders.items())
    human.append("generator images:")
    for name, lines in listing.generator_images.items():
        human.append(f"  rho(S({name})) =")
        human.extend(f"    {line}" for line in lines)
    _emit(args, listing, "\n".join(human))
    return EXIT_OK


def format_invariants(report: InvariantReport) -> str:
    source, target = report.source, report.target
    width = max(len(source.shift), len(target.shift), 8)
    lines = [f"{'':<22}{source.shift:>{width}}  {target.shift:>{width}}"]
    for l in range(report.depth + 1):
        lines.append(f"{f'm({l})':<22}{source.m[l]:>{width}}  {target.m[l]:>{width}}")
    for j in range(report.depth + 1):
        lines.append(f"{f'atoms ({j},{j})':<22}{source.diagonal_atoms[j]:>{width}}  {target.diagonal_atoms[j]:>{width}}")
    for label, left, right in (
        ("A-tower stable from", source.a_tower.stable_from, target.a_tower.stable_from),
        ("diagonal stable from", source.diagonal_tower.stable_from, target.diagonal_tower.stable_from),
        ("K0", source.k0.group, target.k0.group),
    ):
        lines.append(f"{label:<22}{str(left if left is not None else '-'):>{width}}  {str(right if right is not None else '-'):>{width}}")
    lines.append("m(l) sequences " + ("agree" if report.m_equal else "differ"))
    if report.certificate is not None:
        lines.append("certificate: " + ", ".join(f"{key}={value}" for key, value in report.certificate.items()))
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines)


def cmd_conj_compare(args: argparse.Namespace) -> int:
    source, target, codes = _load_pair(args)
    depth = _depth(args)
    cert = verify_conjugacy(codes[0], codes[1], depth) if codes is not None else None
    report = compare_invariants(source, target, depth, cert)
    _emit(args, report, format_invariants(report))
    if report.certificate is not None and not (
        report.certificate["correspondence_isomorphism"] and report.certificate["generator_images"]
    ):
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR
    logging.basicConfig(level=getattr(logging, settings.log_level.upper(), logging.INFO))
    try:
        return args.handler(args)
    except VerificationError as e:
        logger.error("Verification failed: %s", e.detail)
        print(f"verification failed: {e}", file=sys.stderr)
        for key, value in e.witness.items():
            print(f"  {key}: {value}", file=sys.stderr)
        return e.exit_code
    except InputError as e:
        logger.error("Input error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        if e.column is not None and e.context is not None:
            print(format_caret(e.context, e.column), file=sys.stderr)
        return e.exit_code
    except SubshiftError as e:
        logger.error("%s: %s", type(e).__name__, e.detail)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
