"""Folding terms into other representations of a signature.

A target is a monad given first-order, over finite contexts, plus one
interpretation per operation.  An interpretation receives the argument
translated shape by shape:

* ``T``      -> a target value over the current context ``c``
* ``1``      -> ``()``
* ``a * b``  -> a tuple
* ``a'``     -> the translation of the body over ``c + 1``; the binder is variable ``c``
* ``a . b``  -> ``Outer(value, payloads)``: the a-translation over ``len(payloads)``
  variables, variable ``j`` standing for the b-translation ``payloads[j]``
* sums       -> ``Variant(tag, value)``

and is called as ``interp(translated, c)``.
"""

from __future__ import annotations

import dataclasses
import hashlib
import random
from typing import Any, Callable, Mapping, Sequence

from .arity import Arity, Comp, Deriv, Prod, Signature, SignatureInclusion, Sum, Terminal, Theta
from .engine import Substitution, abstract, bind, close_outer, instantiate, open_outer, outer_payloads
from .generate import Enumerator, Generator
from .sexpr import show_term
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
    UNIT,
    Var,
    map_ops,
)


class MissingInterpretation(KeyError):
    pass


@dataclasses.dataclass(frozen=True)
class Outer:
    value: Any
    payloads: tuple


@dataclasses.dataclass(frozen=True)
class Variant:
    tag: str
    value: Any


@dataclasses.dataclass(frozen=True)
class TargetMonad:
    name: str
    unit: Callable[[int, int], Any]
    # bind(value over n, n, assigned values over m, m)
    bind: Callable[[Any, int, Sequence[Any], int], Any]
    equal: Callable[[Any, Any], bool] = lambda x, y: x == y
    show: Callable[[Any], str] = repr


@dataclasses.dataclass(frozen=True)
class TargetRepresentation:
    monad: TargetMonad
    interp: Mapping[str, Callable[[Any, int], Any]]
    name: str = ""

    def interpret(self, op: str, arg: Any, ctx: int) -> Any:
        try:
            fn = self.interp[op]
        except KeyError:
            raise MissingInterpretation(f"representation {self.name!r} has no interpretation for {op!r}") from None
        return fn(arg, ctx)

    def missing(self, sig: Signature) -> list[str]:
        return [o for o in sig if o not in self.interp]


def restrict(rep: TargetRepresentation, inc: SignatureInclusion) -> TargetRepresentation:
    """The representation of inc.source obtained by reading each op through inc."""
    interp = {o: rep.interp[inc(o)] for o in inc.source if inc(o) in rep.interp}
    return TargetRepresentation(rep.monad, interp, f"{rep.name}|{inc.source.name}")


def _dedupe(values: list, equal) -> tuple[list, list[int]]:
    distinct: list = []
    where = []
    for v in values:
        for j, u in enumerate(distinct):
            if equal(u, v):
                where.append(j)
                break
        else:
            where.append(len(distinct))
            distinct.append(v)
    return distinct, where


# -- primary evaluator: one recursion carrying an environment -------------------


@dataclasses.dataclass(frozen=True)
class _Env:
    ctx: int
    bound: tuple[int, ...] = ()
    nested: dict | None = None

    def scoped(self) -> _Env:
        return _Env(self.ctx + 1, (self.ctx,) + self.bound, self.nested)


class _Evaluator:
    def __init__(self, sig: Signature, rep: TargetRepresentation, memo: bool = False):
        self.sig = sig
        self.rep = rep
        self.unit = rep.monad.unit
        # keyed by object identity: enumerated slices share their subterms
        self.memo: dict | None = {} if memo else None

    def term(self, t: Term, env: _Env) -> Any:
        if self.memo is None or env.nested is not None or type(t) is not Op:
            return self._term(t, env)
        key = (id(t), env.ctx, env.bound)
        hit = self.memo.get(key)
        if hit is None:
            # the term is stored alongside so its id cannot be reused
            hit = self.memo[key] = (t, self._term(t, env))
        return hit[1]

    def _term(self, t: Term, env: _Env) -> Any:
        match t:
            case Var(Free(i)):
                if env.nested is not None or not 0 <= i < env.ctx:
                    raise MalformedTerm(f"free variable {i} not in scope")
                return self.unit(env.ctx, i)
            case Var(Bound(k)):
                if not 0 <= k < len(env.bound):
                    raise MalformedTerm(f"bound level {k} not in scope")
                return self.unit(env.ctx, env.bound[k])
            case Var(Nested(v)):
                if env.nested is None:
                    raise MalformedTerm("nested payload outside a composite argument")
                return self.unit(env.ctx, env.nested[v])
            case Op(name, args):
                if name not in self.sig:
                    raise MalformedTerm(f"unknown operation {name!r}")
                return self.rep.interpret(name, self.arg(self.sig.arity(name), args, env), env.ctx)
        raise TypeError(t)

    def arg(self, a: Arity, v: ArgValue, env: _Env) -> Any:
        match a, v:
            case Theta(), ATerm(t):
                return self.term(t, env)
            case Terminal(), AUnit():
                return ()
            case Prod(factors), ATuple(items) if len(items) == len(factors):
                return tuple(self.arg(f, x, env) for f, x in zip(factors, items))
            case Deriv(inner), AScope(body):
                return self.arg(inner, body, env.scoped())
            case Comp(outer, inner), AOuter(w):
                sources = list(dict.fromkeys(outer_payloads(w)))
                values = [self.arg(inner, x, env) for x in sources]
                distinct, where = _dedupe(values, self.rep.monad.equal)
                local = _Env(len(distinct), (), dict(zip(sources, where)))
                return Outer(self.arg(outer, w, local), tuple(distinct))
            case Sum(variants), AVariant(tag, x):
                return Variant(tag, self.arg(dict(variants)[tag], x, env))
        raise MalformedTerm(f"value {v!r} does not have shape {a}")


def eval_term(t: Term, sig: Signature, rep: TargetRepresentation, n: int) -> Any:
    """The unique morphism from the syntax of sig to rep, applied to t over n variables."""
    return _Evaluator(sig, rep).term(t, _Env(n))


def eval_many(terms: Sequence[Term], sig: Signature, rep: TargetRepresentation, n: int) -> list:
    """eval_term on each term, sharing work between common subterms."""
    ev = _Evaluator(sig, rep, memo=True)
    env = _Env(n)
    return [ev.term(t, env) for t in terms]


def eval_arg(v: ArgValue, a: Arity, sig: Signature, rep: TargetRepresentation, n: int) -> Any:
    return _Evaluator(sig, rep).arg(a, v, _Env(n))


# -- second evaluator: arguments first, binders opened by substitution -----------


def eval_args_first(t: Term, sig: Signature, rep: TargetRepresentation, n: int) -> Any:
    """Evaluate the arguments of the root, then apply its interpretation.

    Binders are opened by instantiating the bound variable with a fresh
    free one and composite payloads are closed into free variables, so the
    recursion only ever sees plain terms.
    """
    match t:
        case Var(Free(i)) if 0 <= i < n:
            return rep.monad.unit(n, i)
        case Op(name, args) if name in sig:
            return rep.interpret(name, translate_args(sig.arity(name), args, sig, rep, n), n)
    raise MalformedTerm(f"cannot evaluate {t!r} over {n} variables")


def translate_args(a: Arity, v: ArgValue, sig: Signature, rep: TargetRepresentation, n: int) -> Any:
    match a, v:
        case Theta(), ATerm(t):
            return eval_args_first(t, sig, rep, n)
        case Terminal(), AUnit():
            return ()
        case Prod(factors), ATuple(items) if len(items) == len(factors):
            return tuple(translate_args(f, x, sig, rep, n) for f, x in zip(factors, items))
        case Deriv(inner), AScope(body):
            return translate_args(inner, instantiate(body, n), sig, rep, n + 1)
        case Comp(outer, inner), AOuter(w):
            sources = list(dict.fromkeys(outer_payloads(w)))
            values = [translate_args(inner, x, sig, rep, n) for x in sources]
            distinct, where = _dedupe(values, rep.monad.equal)
            index = dict(zip(sources, where))
            closed = close_outer(w, index.__getitem__)
            return Outer(translate_args(outer, closed, sig, rep, len(distinct)), tuple(distinct))
        case Sum(variants), AVariant(tag, x):
            return Variant(tag, translate_args(dict(variants)[tag], x, sig, rep, n))
    raise MalformedTerm(f"value {v!r} does not have shape {a}")


# -- the syntax itself as a representation -----------------------------------------


def term_monad(name: str = "terms") -> TargetMonad:
    return TargetMonad(
        name,
        unit=lambda n, i: Var(Free(i)),
        bind=lambda t, n, assigned, m: bind(t, Substitution(n, m, tuple(assigned))),
        show=show_term,
    )


def reify(a: Arity, x: Any, ctx: int) -> ArgValue:
    """Turn a translated argument over the syntax back into an argument value."""
    match a:
        case Theta():
            return ATerm(x)
        case Terminal():
            return UNIT
        case Prod(factors):
            return ATuple(tuple(reify(f, y, ctx) for f, y in zip(factors, x)))
        case Deriv(inner):
            return AScope(abstract(reify(inner, x, ctx + 1), ctx))
        case Comp(outer, inner):
            body = reify(outer, x.value, len(x.payloads))
            return AOuter(open_outer(body, [reify(inner, p, ctx) for p in x.payloads]))
        case Sum(variants):
            return AVariant(x.tag, reify(dict(variants)[x.tag], x.value, ctx))
    raise TypeError(a)


def self_representation(sig: Signature) -> TargetRepresentation:
    """The syntax of sig, with each operation interpreted by its own node."""

    def node(op: str, a: Arity):
        return lambda x, ctx: Op(op, reify(a, x, ctx))

    return TargetRepresentation(term_monad(sig.name), {o: node(o, a) for o, a in sig.ops}, "self")


# -- translation along inclusions --------------------------------------------------


def translate(t: Term, inc: SignatureInclusion) -> Term:
    return map_ops(t, inc.mapping.__getitem__)


def translate_by_eval(t: Term, inc: SignatureInclusion, n: int) -> Term:
    """translate, computed as the fold into the target syntax read back along inc."""
    return eval_term(t, inc.source, restrict(self_representation(inc.target), inc), n)


# -- sampled and exhaustive checks ---------------------------------------------------


@dataclasses.dataclass
class Counterexample:
    term: Any
    subst: Any
    lhs: Any
    rhs: Any
    seed: int | None = None
    note: str = ""


@dataclasses.dataclass
class EvalReport:
    law: str
    samples: int = 0
    failures: list[Counterexample] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        return f"{self.law} {self.samples} {len(self.failures)}"

    def first(self) -> Counterexample | None:
        return self.failures[0] if self.failures else None


def split_seed(seed: int, index: int, label: str = "") -> int:
    """Deterministic per-sample seed, independent of process hashing."""
    digest = hashlib.blake2b(f"{seed}/{label}/{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def random_context(gen: Generator, rng: random.Random, max_n: int, depth: int) -> int:
    """A context size in 0..max_n over which the signature has terms of the given depth."""
    n = rng.randrange(max_n + 1)
    while not gen.has_term(Frame(n), depth):
        n += 1
    return n


def random_substitution(gen: Generator, rng: random.Random, n: int, max_m: int, depth: int) -> Substitution:
    m = random_context(gen, rng, max_m, depth) if n else rng.randrange(max_m + 1)
    # terms generated in a base frame never mention bound levels outside their own scopes
    return Substitution(n, m, tuple(gen.term(Frame(m), depth) for _ in range(n)), plain=True)


def morphism_sample(sig: Signature, seed: int, max_ctx: int = 3, depth: int = 4) -> tuple[int, Term, Substitution]:
    """Regenerate (n, t, s) of one check_monad_morphism sample from its seed."""
    rng = random.Random(seed)
    gen = Generator(sig, rng)
    n = random_context(gen, rng, max_ctx, depth)
    t = gen.term(Frame(n), depth)
    return n, t, random_substitution(gen, rng, n, max_ctx, max(depth - 1, 0))


def check_monad_morphism(
    sig: Signature,
    rep: TargetRepresentation,
    samples: int = 1000,
    seed: int = 0,
    max_ctx: int = 3,
    depth: int = 4,
) -> EvalReport:
    """Sampled check that eval commutes with substitution and with each operation.

    Per sample: eval(bind(t, s)) equals the target bind of eval(t) by the
    evaluated s, and the primary evaluator agrees with the arguments-first
    one on t.
    """
    report = EvalReport("initial.morphism")
    equal = rep.monad.equal
    for k in range(samples):
        sub_seed = split_seed(seed, k, "morphism")
        n, t, s = morphism_sample(sig, sub_seed, max_ctx, depth)
        report.samples += 1
        lhs = eval_term(bind(t, s), sig, rep, s.dst)
        rhs = rep.monad.bind(
            eval_term(t, sig, rep, n), n, [eval_term(u, sig, rep, s.dst) for u in s.terms], s.dst
        )
        if not equal(lhs, rhs):
            report.failures.append(Counterexample(t, s, lhs, rhs, sub_seed, "substitution square"))
            continue
        direct = eval_term(t, sig, rep, n)
        again = eval_args_first(t, sig, rep, n)
        if not equal(direct, again):
            report.failures.append(Counterexample(t, None, direct, again, sub_seed, "operation square"))
    return report


@dataclasses.dataclass(frozen=True)
class PushoutSquare:
    """Two extensions of a common core and their amalgamation."""

    core: Signature
    left: Signature
    right: Signature
    merged: Signature
    core_left: SignatureInclusion
    core_right: SignatureInclusion
    left_merged: SignatureInclusion
    right_merged: SignatureInclusion


def check_pushout(
    square: PushoutSquare,
    rep: TargetRepresentation,
    terms_by_side: Mapping[str, Sequence[tuple[Term, int]]],
) -> EvalReport:
    """Mediating-morphism checks on given (term, context) lists per side.

    ``terms_by_side`` has keys among "left", "right", "core".  Left and right
    terms must evaluate the same through the merged syntax as through the
    restricted representation; core terms must reach the same term and the
    same value along both sides of the square.
    """
    report = EvalReport("modularity.pushout")
    equal = rep.monad.equal
    for side in ("left", "right"):
        sig = getattr(square, side)
        inc = getattr(square, f"{side}_merged")
        restricted = restrict(rep, inc)
        for t, n in terms_by_side.get(side, ()):
            report.samples += 1
            lhs = eval_term(translate(t, inc), square.merged, rep, n)
            rhs = eval_term(t, sig, restricted, n)
            if not equal(lhs, rhs):
                report.failures.append(Counterexample(t, None, lhs, rhs, None, side))
    via_left = restrict(rep, square.core_left.then(square.left_merged))
    via_right = restrict(rep, square.core_right.then(square.right_merged))
    left_rep = restrict(rep, square.left_merged)
    right_rep = restrict(rep, square.right_merged)
    for t, n in terms_by_side.get("core", ()):
        report.samples += 1
        tl = translate(t, square.core_left)
        tr = translate(t, square.core_right)
        if translate(tl, square.left_merged) != translate(tr, square.right_merged):
            report.failures.append(Counterexample(t, None, tl, tr, None, "core syntax"))
            continue
        lhs = eval_term(tl, square.left, left_rep, n)
        rhs = eval_term(tr, square.right, right_rep, n)
        if not (equal(lhs, rhs) and equal(lhs, eval_term(t, square.core, via_left, n))
                and equal(rhs, eval_term(t, square.core, via_right, n))):
            report.failures.append(Counterexample(t, None, lhs, rhs, None, "core value"))
    return report


def enumerate_sides(square: PushoutSquare, max_ctx: int, depth: int) -> dict[str, list[tuple[Term, int]]]:
    """Every term of each side with at most max_ctx free variables and the given depth."""
    out = {}
    for side in ("core", "left", "right"):
        en = Enumerator(getattr(square, side))
        out[side] = [(t, n) for n in range(max_ctx + 1) for t in en.terms(Frame(n), depth)]
    return out


def sample_sides(
    square: PushoutSquare, samples: int, seed: int, max_ctx: int = 3, depth: int = 4
) -> dict[str, list[tuple[Term, int]]]:
    out = {}
    for side in ("core", "left", "right"):
        sig = getattr(square, side)
        terms = []
        for k in range(samples):
            rng = random.Random(split_seed(seed, k, side))
            gen = Generator(sig, rng)
            n = random_context(gen, rng, max_ctx, depth)
            terms.append((gen.term(Frame(n), depth), n))
        out[side] = terms
    return out
