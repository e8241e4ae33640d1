"""Property checks for substitution on the generated syntax.

Each check samples seeded (term, substitution) data, and also runs
exhaustively over small enumeration slices when they fit under the cap.
Every counterexample carries the per-sample seed that regenerates it.
"""

from __future__ import annotations

import dataclasses
import itertools
import random
from typing import Callable, Iterable, Iterator

from .arity import THETA, Arity, Comp, Signature, subarities
from .engine import (
    ContextError,
    Substitution,
    bind,
    bind_arg,
    bind_comp,
    eta_inner,
    eta_outer,
    flatten,
    lift,
)
from .generate import DEFAULT_CAP, EnumerationLimit, Enumerator, Generator, Ungenerable
from .initiality import (
    Counterexample,
    EvalReport,
    TargetRepresentation,
    eval_term,
    random_context,
    random_substitution,
    split_seed,
)
from .terms import (
    AOuter,
    ArgValue,
    AScope,
    ATerm,
    ATuple,
    AUnit,
    AVariant,
    Bound,
    Frame,
    Free,
    MalformedTerm,
    Nested,
    Op,
    Term,
    Var,
)

LAW_IDS = (
    "monad.left-unit",
    "monad.right-unit",
    "monad.assoc",
    "strength.unit",
    "strength.comp",
    "linear.mu",
    "linear.eta-inner",
    "linear.eta-outer",
    "sigma.naturality",
)

THETA_THETA = Comp(THETA, THETA)


@dataclasses.dataclass(frozen=True)
class Bounds:
    samples: int = 1000
    max_ctx: int = 3
    depth: int = 5
    # exhaustive slices: every context <= exhaustive_ctx and depth <= exhaustive_depth
    exhaustive_ctx: int = 2
    exhaustive_depth: int = 3
    cap: int = DEFAULT_CAP

    @property
    def subst_depth(self) -> int:
        return max(self.depth - 2, 1)


@dataclasses.dataclass(frozen=True)
class LawCheck:
    law_id: str
    bounds: Bounds
    seed: int
    result: EvalReport


BindFn = Callable[[Term, Substitution], Term]


def _attempt(report: EvalReport, lhs_fn, rhs_fn, term, subst, seed, note="") -> None:
    report.samples += 1
    try:
        lhs, rhs = lhs_fn(), rhs_fn()
    except (MalformedTerm, ContextError, IndexError, KeyError) as exc:
        report.failures.append(Counterexample(term, subst, repr(exc), None, seed, note or "raised"))
        return
    if lhs != rhs:
        report.failures.append(Counterexample(term, subst, lhs, rhs, seed, note))


def _slices(sig: Signature, bounds: Bounds, shape: Arity | None = None) -> Iterator[tuple[int, list]]:
    """(context, values) for every small context, at the deepest depth that fits under the cap.

    A slice of depth d contains every value of smaller depth, so falling
    back to a shallower depth still covers a complete, smaller slice.
    """
    en = Enumerator(sig, bounds.cap)
    for n in range(bounds.exhaustive_ctx + 1):
        for d in range(bounds.exhaustive_depth, -1, -1):
            try:
                if shape is None:
                    values = en.terms(Frame(n), d)
                else:
                    values = en.args(shape, Frame(n), d)
            except EnumerationLimit:
                continue
            yield n, values
            break


# -- monad laws -------------------------------------------------------------------------


def monad_sample(sig: Signature, seed: int, bounds: Bounds):
    """Regenerate (t, f, g) for one sample seed: t over n, f: n -> m, g: m -> k."""
    rng = random.Random(seed)
    gen = Generator(sig, rng)
    n = random_context(gen, rng, bounds.max_ctx, bounds.depth)
    t = gen.term(Frame(n), bounds.depth)
    f = random_substitution(gen, rng, n, bounds.max_ctx, bounds.subst_depth)
    g = random_substitution(gen, rng, f.dst, bounds.max_ctx, bounds.subst_depth)
    return t, f, g


def compose(f: Substitution, g: Substitution, bind_fn: BindFn = bind) -> Substitution:
    plain = True if f.plain and g.plain else None
    return Substitution(f.src, g.dst, tuple(bind_fn(u, g) for u in f.terms), plain=plain)


def _monad_one(reports, t, f, g, seed, bind_fn: BindFn) -> None:
    left, right, assoc = reports
    n = f.src
    if n:
        i = seed % n if seed is not None else 0
        _attempt(left, lambda: bind_fn(Var(Free(i)), f), lambda: f.terms[i], Var(Free(i)), f, seed)
    _attempt(right, lambda: bind_fn(t, Substitution.identity(n)), lambda: t, t, None, seed)
    _attempt(
        assoc,
        lambda: bind_fn(bind_fn(t, f), g),
        lambda: bind_fn(t, compose(f, g, bind_fn)),
        t,
        (f, g),
        seed,
    )


def check_monad_laws(
    sig: Signature, bounds: Bounds = Bounds(), seed: int = 0, bind_fn: BindFn = bind, exhaustive: bool = True
) -> list[EvalReport]:
    """Left unit, right unit and associativity of bind, in that order."""
    reports = [EvalReport(law) for law in LAW_IDS[:3]]
    if exhaustive:
        for n, terms in _slices(sig, bounds):
            for idx, t in enumerate(terms):
                s = split_seed(seed, idx, f"monad-exhaustive-{n}")
                rng = random.Random(s)
                gen = Generator(sig, rng)
                f = random_substitution(gen, rng, n, bounds.max_ctx, bounds.subst_depth)
                g = random_substitution(gen, rng, f.dst, bounds.max_ctx, bounds.subst_depth)
                _monad_one(reports, t, f, g, s, bind_fn)
                # every slice term is also used as the assigned term of a unit substitution
                sub = Substitution(n + 1, n, tuple(Var(Free(j)) for j in range(n)) + (t,))
                _attempt(reports[0], lambda: bind_fn(Var(Free(n)), sub), lambda: t, t, sub, s)
    for k in range(bounds.samples):
        s = split_seed(seed, k, "monad")
        t, f, g = monad_sample(sig, s, bounds)
        _monad_one(reports, t, f, g, s, bind_fn)
    return reports


def broken_bind(t: Term, s: Substitution) -> Term:
    """Negative control: bind that does not lift under binders.

    Bound levels are looked up in the substitution as if they were free
    indices, the classic capture bug of an unlifted substitution.
    """

    def go_term(t: Term, outer: int) -> Term:
        match t:
            case Var(Free(i)) if outer == 0:
                return s.terms[i]
            case Var(Bound(k)) if outer == 0:
                return s.terms[k] if k < s.src else t
            case Var(Nested(v)) if outer > 0:
                return Var(Nested(go_arg(v, outer - 1)))
            case Var():
                return t
            case Op(name, args):
                return Op(name, go_arg(args, outer))
        raise TypeError(t)

    def go_arg(v: ArgValue, outer: int) -> ArgValue:
        match v:
            case ATerm(t):
                return ATerm(go_term(t, outer))
            case AUnit():
                return v
            case ATuple(items):
                return ATuple(tuple(go_arg(x, outer) for x in items))
            case AScope(body):
                return AScope(go_arg(body, outer))
            case AOuter(w):
                return AOuter(go_arg(w, outer + 1))
            case AVariant(tag, x):
                return AVariant(tag, go_arg(x, outer))
        raise TypeError(v)

    return go_term(t, 0)


# -- strength laws, shape by shape ---------------------------------------------------------


def signature_shapes(sig: Signature) -> list[Arity]:
    """Theta and every sub-expression of the signature's arities, first occurrence order."""
    out = [THETA]
    for _, a in sig.ops:
        for x in subarities(a):
            if x not in out:
                out.append(x)
    return out


def _shape_samples(sig: Signature, shape: Arity, bounds: Bounds, seed: int, label: str, exhaustive: bool = True):
    """Exhaustive slice values then seeded random ones, each with its context and seed."""
    for n, values in _slices(sig, bounds, shape) if exhaustive else ():
        for idx, v in enumerate(values):
            yield n, v, split_seed(seed, idx, f"{label}-exhaustive-{n}")
    for k in range(bounds.samples):
        s = split_seed(seed, k, label)
        rng = random.Random(s)
        gen = Generator(sig, rng)
        n = random_context(gen, rng, bounds.max_ctx, bounds.depth)
        try:
            v = gen.arg(shape, Frame(n), bounds.depth)
        except Ungenerable:
            continue
        yield n, v, s


def check_strength_unit(
    sig: Signature, bounds: Bounds = Bounds(), seed: int = 0, shapes: Iterable[Arity] | None = None
) -> EvalReport:
    report = EvalReport("strength.unit")
    for shape in shapes if shapes is not None else signature_shapes(sig):
        label = f"strength.unit/{shape}"
        for n, v, s in _shape_samples(sig, shape, bounds, seed, label):
            ident = Substitution.identity(n)
            _attempt(report, lambda: bind_arg(v, ident), lambda: v, v, ident, s, str(shape))
    for n in range(bounds.max_ctx + 1):
        ident, lifted = Substitution.identity(n), lift(Substitution.identity(n))
        for p in [*map(Free, range(n)), Bound(0)]:
            _attempt(report, lambda: lifted(p), lambda: Var(p), Var(p), lifted, None, "lift")
    return report


def check_strength_composition(
    sig: Signature, bounds: Bounds = Bounds(), seed: int = 0, shapes: Iterable[Arity] | None = None
) -> EvalReport:
    report = EvalReport("strength.comp")
    for shape in shapes if shapes is not None else signature_shapes(sig):
        label = f"strength.comp/{shape}"
        for n, v, s in _shape_samples(sig, shape, bounds, seed, label):
            rng = random.Random(s ^ 0x5BD1E995)
            gen = Generator(sig, rng)
            f = random_substitution(gen, rng, n, bounds.max_ctx, bounds.subst_depth)
            g = random_substitution(gen, rng, f.dst, bounds.max_ctx, bounds.subst_depth)
            _attempt(
                report,
                lambda: bind_arg(bind_arg(v, f), g),
                lambda: bind_arg(v, compose(f, g)),
                v,
                (f, g),
                s,
                str(shape),
            )
    return report


# -- linearity of the structural morphisms between T and T . T --------------------------------

LINEAR_MORPHISMS = ("mu", "eta_inner", "eta_outer")


def _linear_square(which: str, x: Term, s: Substitution):
    """(lhs, rhs) thunks of the module-morphism square for one morphism."""
    if which == "mu":
        return lambda: flatten(bind_comp(x, s)), lambda: bind(flatten(x), s)
    wrap = {"eta_inner": eta_inner, "eta_outer": eta_outer}[which]
    return lambda: wrap(bind(x, s)), lambda: bind_comp(wrap(x), s)


def check_linearity(
    sig: Signature, which: str, bounds: Bounds = Bounds(), seed: int = 0, exhaustive: bool = True
) -> EvalReport:
    """mu: T.T -> T, and the two unit whiskerings T -> T.T, commute with substitution.

    mu is checked on T.T values (outer terms with nested term payloads),
    the unit whiskerings on plain terms.
    """
    if which not in LINEAR_MORPHISMS:
        raise ValueError(f"unknown morphism {which!r}")
    report = EvalReport("linear." + which.replace("_", "-"))
    shape = THETA_THETA if which == "mu" else THETA
    for n, v, s in _shape_samples(sig, shape, bounds, seed, report.law, exhaustive):
        x = v.value.t if which == "mu" else v.t
        rng = random.Random(s ^ 0x2545F491)
        sub = random_substitution(Generator(sig, rng), rng, n, bounds.max_ctx, bounds.subst_depth)
        lhs, rhs = _linear_square(which, x, sub)
        _attempt(report, lhs, rhs, x, sub, s)
    return report


# -- explicit substitution family ------------------------------------------------------------


def reindexings(max_size: int) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    """Every function u: m -> n with m, n <= max_size, as (m, n, images)."""
    for m in range(max_size + 1):
        for n in range(max_size + 1):
            for u in itertools.product(range(n), repeat=m):
                yield m, n, u


def check_subst_family(
    sig: Signature,
    bound: int,
    rep: TargetRepresentation,
    bounds: Bounds = Bounds(),
    seed: int = 0,
    samples_per_square: int | None = None,
) -> EvalReport:
    """Naturality of the sigma family in the reindexing of formal arguments.

    For u: m -> n, a body t over c + m and arguments a_0..a_{n-1} over c:
    sigma_n(t with slot c+j renamed to c+u(j), a) = sigma_m(t, a . u).
    Bodies and arguments are random terms of sig evaluated into rep.
    """
    report = EvalReport("sigma.naturality")
    missing = [f"sigma{k}" for k in range(bound + 1) if f"sigma{k}" not in sig]
    if missing:
        raise ValueError(f"signature lacks {missing}")
    per_square = samples_per_square if samples_per_square is not None else bounds.samples
    monad = rep.monad
    for m, n, u in reindexings(bound):
        label = f"sigma/{m}->{n}/{u}"
        for k in range(per_square):
            s = split_seed(seed, k, label)
            rng = random.Random(s)
            gen = Generator(sig, rng)
            c = rng.randrange(bounds.max_ctx + 1)
            if not gen.has_term(Frame(c), bounds.subst_depth):
                c = 1
            body = eval_term(gen.term(Frame(c + m), bounds.depth), sig, rep, c + m)
            args = [eval_term(gen.term(Frame(c), bounds.subst_depth), sig, rep, c) for _ in range(n)]
            slots = [*range(c), *(c + j for j in u)]
            report.samples += 1
            moved = monad.bind(body, c + m, [monad.unit(c + n, j) for j in slots], c + n)
            lhs = rep.interpret(f"sigma{n}", (moved, *args), c)
            rhs = rep.interpret(f"sigma{m}", (body, *(args[j] for j in u)), c)
            if not monad.equal(lhs, rhs):
                report.failures.append(Counterexample(body, (u, args), lhs, rhs, s, label))
    return report


def has_sigma_family(sig: Signature, bound: int) -> bool:
    return all(f"sigma{k}" in sig for k in range(bound + 1))


def sigma_bound(sig: Signature) -> int:
    """Largest N with sigma0..sigmaN all in sig, or -1."""
    k = 0
    while f"sigma{k}" in sig:
        k += 1
    return k - 1


def run_all(
    sig: Signature,
    bounds: Bounds = Bounds(),
    seed: int = 0,
    sigma_rep: TargetRepresentation | None = None,
    sigma_samples: int | None = None,
) -> list[EvalReport]:
    """Every law check in LAW_IDS order; sigma.naturality is empty unless sig has the family."""
    reports = check_monad_laws(sig, bounds, seed)
    reports.append(check_strength_unit(sig, bounds, seed))
    reports.append(check_strength_composition(sig, bounds, seed))
    for which in LINEAR_MORPHISMS:
        reports.append(check_linearity(sig, which, bounds, seed))
    n = sigma_bound(sig)
    if n >= 0 and "app" in sig and "abs" in sig:
        if sigma_rep is None:
            from .examples import reference_lambda_rep

            sigma_rep = reference_lambda_rep(join="join" in sig)
        reports.append(check_subst_family(sig, n, sigma_rep, bounds, seed, sigma_samples))
    else:
        reports.append(EvalReport("sigma.naturality"))
    return reports
