"""Command-line front end.

Exit codes: 0 success, 1 a law check failed, 2 bad signature or term
input, 3 a resource cap was exceeded, 4 unknown or incomplete
representation.
"""

from __future__ import annotations

import argparse
import dataclasses
import random
import sys
from pathlib import Path
from typing import Sequence

from .arity import Signature, SignatureFileError, SignatureInclusion, parse_signature, validate_signature
from .engine import ContextError
from .examples import REPRESENTATIONS, SHIPPED, load_shipped, representation
from .generate import DEFAULT_CAP, Generator, Ungenerable, count_terms, enumerate_terms
from .initiality import EvalReport, MissingInterpretation, eval_term, random_context, split_seed, translate
from .laws import Bounds, run_all
from .sexpr import SexprError, parse_terms, pretty_term, show_term, show_terms
from .terms import Frame, MalformedTerm, Term, check_term, free_vars

OK, LAW_FAILURE, BAD_INPUT, CAP_EXCEEDED, BAD_REP = 0, 1, 2, 3, 4
DEFAULT_DEPTH_CAP = 8


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclasses.dataclass(frozen=True)
class CliConfig:
    command: str
    signatures: tuple[str, ...]
    n: int | None
    depth: int | None
    samples: int
    seed: int
    rep: str | None
    fmt: str | None
    cap: int
    depth_cap: int
    term_file: str | None = None


# -- inputs -----------------------------------------------------------------------


def load_signature(source: str) -> Signature:
    """A signature file path, or the bare name of a shipped signature."""
    path = Path(source)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(BAD_INPUT, f"{source}: {exc}") from None
        sig = _parse(text, source)
    else:
        name = path.name.removesuffix(".sig")
        if name not in SHIPPED:
            raise CliError(BAD_INPUT, f"{source}: no such file or shipped signature")
        sig = load_shipped(name)
    problems = validate_signature(sig)
    if problems:
        raise CliError(BAD_INPUT, f"{source}: " + "; ".join(problems))
    return sig


def _parse(text: str, where: str) -> Signature:
    try:
        return parse_signature(text)
    except SignatureFileError as exc:
        raise CliError(BAD_INPUT, f"{where}: {exc}") from None


def load_terms(source: str, sig: Signature, n: int | None) -> list[tuple[Term, int]]:
    """Terms of a file ("-" reads standard input), each with its context size."""
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(BAD_INPUT, f"{source}: {exc}") from None
    try:
        terms = parse_terms(text)
    except SexprError as exc:
        raise CliError(BAD_INPUT, f"{source}: {exc}") from None
    if not terms:
        raise CliError(BAD_INPUT, f"{source}: no term found")
    out = []
    for t in terms:
        try:
            ctx = n if n is not None else max(free_vars(t), default=-1) + 1
            check_term(t, sig, Frame(ctx))
        except (MalformedTerm, ContextError) as exc:
            raise CliError(BAD_INPUT, f"{source}: malformed term: {exc}") from None
        out.append((t, ctx))
    return out


def _bounded_depth(cfg: CliConfig, default: int) -> int:
    d = default if cfg.depth is None else cfg.depth
    if d > cfg.depth_cap:
        raise CliError(CAP_EXCEEDED, f"depth {d} exceeds the depth cap {cfg.depth_cap}")
    return d


def _show(t: Term, fmt: str | None) -> str:
    return pretty_term(t) if fmt == "pretty" else show_term(t)


def _report_line(r: EvalReport, fmt: str | None) -> str:
    if fmt == "sexpr":
        return f"(law {r.law} {r.samples} {len(r.failures)})"
    return r.line()


# -- commands -----------------------------------------------------------------------


def cmd_check(cfg: CliConfig, out) -> int:
    sig = load_signature(cfg.signatures[0])
    ctx = 3 if cfg.n is None else cfg.n
    depth = _bounded_depth(cfg, 5)
    bounds = Bounds(
        samples=cfg.samples,
        max_ctx=ctx,
        depth=depth,
        exhaustive_ctx=min(ctx, 2),
        exhaustive_depth=min(depth, 3),
        cap=cfg.cap,
    )
    sigma_rep = _representation(cfg.rep, sig) if cfg.rep else None
    reports = run_all(sig, bounds, cfg.seed, sigma_rep)
    for r in reports:
        print(_report_line(r, cfg.fmt), file=out)
    for r in reports:
        c = r.first()
        if c is not None:
            print(f"{r.law}: first counterexample (seed {c.seed}, {c.note or 'mismatch'})", file=sys.stderr)
            print(f"  term: {_display(c.term)}", file=sys.stderr)
            print(f"  lhs:  {_display(c.lhs)}", file=sys.stderr)
            print(f"  rhs:  {_display(c.rhs)}", file=sys.stderr)
    return OK if all(r.passed for r in reports) else LAW_FAILURE


def _display(x) -> str:
    try:
        return show_term(x)
    except TypeError:
        return repr(x)


def cmd_enum(cfg: CliConfig, out) -> int:
    sig = load_signature(cfg.signatures[0])
    n = 0 if cfg.n is None else cfg.n
    depth = _bounded_depth(cfg, 3)
    size = count_terms(sig, n, depth)
    if size > cfg.cap:
        raise CliError(CAP_EXCEEDED, f"slice n={n} depth={depth} has {size} terms, cap is {cfg.cap}")
    terms = enumerate_terms(sig, n, depth, cfg.cap)
    if cfg.fmt == "pretty":
        for t in terms:
            print(pretty_term(t), file=out)
    else:
        out.write(show_terms(terms))
    print(f"count: {len(terms)}", file=out)
    return OK


def cmd_gen(cfg: CliConfig, out) -> int:
    sig = load_signature(cfg.signatures[0])
    depth = _bounded_depth(cfg, 3)
    for k in range(cfg.samples):
        rng = random.Random(split_seed(cfg.seed, k, "gen"))
        gen = Generator(sig, rng)
        n = random_context(gen, rng, 3, depth) if cfg.n is None else cfg.n
        try:
            t = gen.term(Frame(n), depth)
        except Ungenerable:
            raise CliError(BAD_INPUT, f"no term of depth <= {depth} over {n} variables") from None
        print(_show(t, cfg.fmt), file=out)
    return OK


def _representation(name: str, sig: Signature):
    try:
        rep = representation(name, sig)
    except KeyError:
        known = ", ".join(REPRESENTATIONS)
        raise CliError(BAD_REP, f"unknown representation {name!r} (known: {known})") from None
    missing = rep.missing(sig)
    if missing:
        raise CliError(BAD_REP, f"representation {name!r} does not interpret {', '.join(missing)}")
    return rep


def cmd_eval(cfg: CliConfig, out) -> int:
    sig = load_signature(cfg.signatures[0])
    rep = _representation(cfg.rep or "self", sig)
    for t, n in load_terms(cfg.term_file, sig, cfg.n):
        try:
            value = eval_term(t, sig, rep, n)
        except MissingInterpretation as exc:
            raise CliError(BAD_REP, str(exc)) from None
        if rep.name == "self":
            print(_show(value, cfg.fmt), file=out)
        else:
            print(rep.monad.show(value), file=out)
    return OK


def cmd_translate(cfg: CliConfig, out) -> int:
    source = load_signature(cfg.signatures[0])
    target = load_signature(cfg.signatures[1])
    inc = SignatureInclusion.by_name(source, target)
    problems = inc.problems()
    if problems:
        raise CliError(BAD_INPUT, "no inclusion by name: " + "; ".join(problems))
    for t, _ in load_terms(cfg.term_file, source, cfg.n):
        print(_show(translate(t, inc), cfg.fmt), file=out)
    return OK


COMMANDS = {
    "check": cmd_check,
    "enum": cmd_enum,
    "gen": cmd_gen,
    "eval": cmd_eval,
    "translate": cmd_translate,
}


# -- argument parsing -------------------------------------------------------------------


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text} is negative")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed {text} is not a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modsyntax", description="Syntax with binding from signatures of arities.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", type=_nonnegative, default=None, help="context size (check: largest sampled context)")
    common.add_argument("-d", "--depth", type=_nonnegative, default=None, help="operation depth bound")
    common.add_argument("--samples", type=_nonnegative, default=1000, help="random samples (default 1000)")
    common.add_argument("--seed", type=_seed, default=0, help="64-bit seed (default 0)")
    common.add_argument("--rep", default=None, help="representation: " + ", ".join(REPRESENTATIONS))
    common.add_argument("--format", dest="fmt", choices=("sexpr", "pretty"), default=None)
    common.add_argument("--cap", type=_nonnegative, default=DEFAULT_CAP, help="largest enumeration (default 100000)")
    common.add_argument("--depth-cap", type=_nonnegative, default=DEFAULT_DEPTH_CAP, help="largest depth (default 8)")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="run every law check on a signature")
    p.add_argument("signature")
    p = sub.add_parser("enum", parents=[common], help="list every term of a slice")
    p.add_argument("signature")
    p = sub.add_parser("gen", parents=[common], help="print seeded random terms")
    p.add_argument("signature")
    p = sub.add_parser("eval", parents=[common], help="evaluate terms into a representation")
    p.add_argument("signature")
    p.add_argument("terms", help="file of s-expression terms, or - for standard input")
    p = sub.add_parser("translate", parents=[common], help="carry terms along the inclusion by name")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("terms", help="file of s-expression terms, or - for standard input")
    return parser


def parse_config(argv: Sequence[str] | None = None) -> CliConfig:
    args = build_parser().parse_args(argv)
    if args.command == "translate":
        sigs = (args.source, args.target)
    else:
        sigs = (args.signature,)
    return CliConfig(
        command=args.command,
        signatures=sigs,
        n=args.n,
        depth=args.depth,
        samples=args.samples,
        seed=args.seed,
        rep=args.rep,
        fmt=args.fmt,
        cap=args.cap,
        depth_cap=args.depth_cap,
        term_file=getattr(args, "terms", None),
    )


def main(argv: Sequence[str] | None = None, out=None) -> int:
    cfg = parse_config(argv)
    out = out if out is not None else sys.stdout
    try:
        return COMMANDS[cfg.command](cfg, out)
    except CliError as exc:
        print(f"modsyntax: {exc}", file=sys.stderr)
        return exc.code


def main_exit() -> None:
    sys.exit(main())
