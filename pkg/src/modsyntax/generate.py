"""Exhaustive enumeration and seeded random generation of well-formed terms.

Cost model for enumeration: results are memoized per (frame, depth) and
per (arity, frame, depth); the work is linear in the total size of those
lists, and every list is checked against ``cap`` before it is built.
"""

from __future__ import annotations

import functools
import itertools
import math
import random

from .arity import Arity, Comp, Deriv, Prod, Signature, Sum, Terminal, Theta
from .terms import (
    AOuter,
    ArgValue,
    AScope,
    ATerm,
    ATuple,
    AVariant,
    Bound,
    Frame,
    Free,
    Nested,
    Op,
    Term,
    UNIT,
    Var,
)

DEFAULT_CAP = 100_000


class EnumerationLimit(RuntimeError):
    pass


class Ungenerable(ValueError):
    pass


class Enumerator:
    def __init__(self, sig: Signature, cap: int = DEFAULT_CAP):
        self.sig = sig
        self.cap = cap
        self._terms: dict[tuple[Frame, int], list[Term]] = {}
        self._args: dict[tuple[Arity, Frame, int], list[ArgValue]] = {}

    def _check(self, size: int) -> None:
        if size > self.cap:
            raise EnumerationLimit(f"enumeration needs {size} values, cap is {self.cap}")

    def variables(self, frame: Frame, depth: int) -> list[Term]:
        out: list[Term] = [Var(Free(i)) for i in range(frame.free)]
        out.extend(Var(Bound(k)) for k in range(frame.depth))
        if frame.inner is not None:
            out.extend(Var(Nested(v)) for v in self.args(frame.inner, frame.parent, depth))
        return out

    def terms(self, frame: Frame, depth: int) -> list[Term]:
        key = (frame, depth)
        if key in self._terms:
            return self._terms[key]
        out = self.variables(frame, depth)
        if depth > 0:
            for name, a in self.sig.ops:
                args = self.args(a, frame, depth - 1)
                self._check(len(out) + len(args))
                out.extend(Op(name, v) for v in args)
        self._check(len(out))
        self._terms[key] = out
        return out

    def args(self, a: Arity, frame: Frame, depth: int) -> list[ArgValue]:
        key = (a, frame, depth)
        if key in self._args:
            return self._args[key]
        match a:
            case Theta():
                out = [ATerm(t) for t in self.terms(frame, depth)]
            case Terminal():
                out = [UNIT]
            case Prod(factors):
                parts = [self.args(f, frame, depth) for f in factors]
                self._check(math.prod(map(len, parts)))
                out = [ATuple(items) for items in itertools.product(*parts)]
            case Deriv(inner):
                out = [AScope(v) for v in self.args(inner, frame.scoped(), depth)]
            case Comp(outer, inner):
                out = [AOuter(v) for v in self.args(outer, frame.outer(inner), depth)]
            case Sum(variants):
                out = [AVariant(tag, v) for tag, b in variants for v in self.args(b, frame, depth)]
            case _:
                raise TypeError(a)
        self._check(len(out))
        self._args[key] = out
        return out


def enumerate_terms(sig: Signature, n: int, depth: int, cap: int = DEFAULT_CAP) -> list[Term]:
    """All well-formed terms over n free variables with operation depth <= depth."""
    if n < 0 or depth < 0:
        raise ValueError("context size and depth must be nonnegative")
    return Enumerator(sig, cap).terms(Frame(n), depth)


class Counter:
    """Sizes of the enumeration slices, computed without building them.

    Follows the same recursion as Enumerator, so it is an independent count
    only with respect to materialization, not to the term grammar.
    """

    def __init__(self, sig: Signature):
        self.sig = sig
        self._memo: dict = {}

    def terms(self, frame: Frame, depth: int) -> int:
        key = (frame, depth)
        if key not in self._memo:
            self._memo[key] = self._terms(frame, depth)
        return self._memo[key]

    def args(self, a: Arity, frame: Frame, depth: int) -> int:
        key = (a, frame, depth)
        if key not in self._memo:
            self._memo[key] = self._args(a, frame, depth)
        return self._memo[key]

    def _terms(self, frame: Frame, depth: int) -> int:
        k = frame.free + frame.depth
        if frame.inner is not None:
            k += self.args(frame.inner, frame.parent, depth)
        if depth > 0:
            k += sum(self.args(a, frame, depth - 1) for _, a in self.sig.ops)
        return k

    def _args(self, a: Arity, frame: Frame, depth: int) -> int:
        match a:
            case Theta():
                return self.terms(frame, depth)
            case Terminal():
                return 1
            case Prod(factors):
                return math.prod(self.args(f, frame, depth) for f in factors)
            case Deriv(inner):
                return self.args(inner, frame.scoped(), depth)
            case Comp(outer, inner):
                return self.args(outer, frame.outer(inner), depth)
            case Sum(variants):
                return sum(self.args(b, frame, depth) for _, b in variants)
        raise TypeError(a)


def count_terms(sig: Signature, n: int, depth: int) -> int:
    """Number of terms enumerate_terms would return; no cap applies."""
    if n < 0 or depth < 0:
        raise ValueError("context size and depth must be nonnegative")
    return Counter(sig).terms(Frame(n), depth)


@functools.lru_cache(maxsize=64)
def _inhabitation_cache(sig: Signature) -> dict:
    # inhabitation depends only on the signature; shared by all generators
    return {}


class Generator:
    """Seeded random terms; every term within the depth bound has positive probability."""

    def __init__(self, sig: Signature, rng: random.Random):
        self.sig = sig
        self.rng = rng
        self._inhabited = _inhabitation_cache(sig)

    def has_term(self, frame: Frame, depth: int) -> bool:
        key = ("t", frame, depth)
        if key not in self._inhabited:
            ok = self._has_var(frame, depth) or (
                depth > 0 and any(self.has_arg(a, frame, depth - 1) for _, a in self.sig.ops)
            )
            self._inhabited[key] = ok
        return self._inhabited[key]

    def _has_var(self, frame: Frame, depth: int) -> bool:
        if frame.free > 0 or frame.depth > 0:
            return True
        return frame.inner is not None and self.has_arg(frame.inner, frame.parent, depth)

    def has_arg(self, a: Arity, frame: Frame, depth: int) -> bool:
        key = ("a", a, frame, depth)
        if key in self._inhabited:
            return self._inhabited[key]
        match a:
            case Theta():
                ok = self.has_term(frame, depth)
            case Terminal():
                ok = True
            case Prod(factors):
                ok = all(self.has_arg(f, frame, depth) for f in factors)
            case Deriv(inner):
                ok = self.has_arg(inner, frame.scoped(), depth)
            case Comp(outer, inner):
                ok = self.has_arg(outer, frame.outer(inner), depth)
            case Sum(variants):
                ok = any(self.has_arg(b, frame, depth) for _, b in variants)
            case _:
                raise TypeError(a)
        self._inhabited[key] = ok
        return ok

    def term(self, frame: Frame, depth: int) -> Term:
        rng = self.rng
        key = ("ops", frame, depth)
        ops = self._inhabited.get(key)
        if ops is None:
            ops = []
            if depth > 0:
                ops = [(name, a) for name, a in self.sig.ops if self.has_arg(a, frame, depth - 1)]
            self._inhabited[key] = ops
        nvars = frame.free + frame.depth
        nested_ok = frame.inner is not None and self.has_arg(frame.inner, frame.parent, depth)
        if nvars == 0 and not nested_ok and not ops:
            raise Ungenerable("no term fits the remaining depth")
        if ops and (nvars == 0 and not nested_ok or rng.random() < 0.5):
            name, a = ops[rng.randrange(len(ops))]
            return Op(name, self.arg(a, frame, depth - 1))
        k = rng.randrange(nvars + nested_ok)
        if k < frame.free:
            return Var(Free(k))
        if k < nvars:
            return Var(Bound(k - frame.free))
        return Var(Nested(self.arg(frame.inner, frame.parent, depth)))

    def arg(self, a: Arity, frame: Frame, depth: int) -> ArgValue:
        match a:
            case Theta():
                return ATerm(self.term(frame, depth))
            case Terminal():
                return UNIT
            case Prod(factors):
                return ATuple(tuple(self.arg(f, frame, depth) for f in factors))
            case Deriv(inner):
                return AScope(self.arg(inner, frame.scoped(), depth))
            case Comp(outer, inner):
                return AOuter(self.arg(outer, frame.outer(inner), depth))
            case Sum(variants):
                live = [(tag, b) for tag, b in variants if self.has_arg(b, frame, depth)]
                if not live:
                    raise Ungenerable("no variant fits the remaining depth")
                tag, b = live[self.rng.randrange(len(live))]
                return AVariant(tag, self.arg(b, frame, depth))
        raise TypeError(a)


def random_term(sig: Signature, n: int, depth: int, seed: int) -> Term:
    return Generator(sig, random.Random(seed)).term(Frame(n), depth)


def random_arg(sig: Signature, a: Arity, n: int, depth: int, seed: int) -> ArgValue:
    return Generator(sig, random.Random(seed)).arg(a, Frame(n), depth)
