"""Renaming, substitution and flattening on terms.

``bind`` pushes a substitution through an argument value one constructor at
a time: componentwise through tuples and variants, lifted under scopes,
and for composite values only into the nested payloads, leaving the outer
structure untouched.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Sequence

from .terms import (
    AOuter,
    ArgValue,
    AScope,
    ATerm,
    ATuple,
    AUnit,
    AVariant,
    Bound,
    Free,
    MalformedTerm,
    Nested,
    Op,
    Payload,
    Term,
    Var,
    map_arg_vars,
    map_vars,
)


class ContextError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class Substitution:
    """Assigns to each of ``src`` free variables a term over ``dst`` free variables.

    ``scopes`` counts the binders the substitution has been lifted under;
    bound levels below it are kept as they are.
    """

    src: int
    dst: int
    terms: tuple[Term, ...]
    scopes: int = 0
    # true when no assigned term has escaping bound levels, so weakening is a no-op
    plain: bool = dataclasses.field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.terms) != self.src:
            raise ContextError(f"substitution for {self.src} variables has {len(self.terms)} terms")

    def _is_plain(self) -> bool:
        # computed on first use under a binder, then cached
        if self.plain is None:
            object.__setattr__(self, "plain", not any(map(_escapes, self.terms)))
        return self.plain

    @classmethod
    def identity(cls, n: int) -> Substitution:
        return cls(n, n, tuple(Var(Free(i)) for i in range(n)))

    @classmethod
    def of(cls, terms: Sequence[Term], dst: int) -> Substitution:
        return cls(len(terms), dst, tuple(terms))

    @classmethod
    def renaming(cls, f: Sequence[int], dst: int) -> Substitution:
        return cls(len(f), dst, tuple(Var(Free(j)) for j in f))

    def __call__(self, p: Payload) -> Term:
        if type(p) is Free:
            i = p.index
            if not 0 <= i < self.src:
                raise ContextError(f"free variable {i} outside substitution domain {self.src}")
            t = self.terms[i]
            return t if not self.scopes or self._is_plain() else weaken(t, self.scopes)
        if type(p) is Bound:
            if not 0 <= p.level < self.scopes:
                raise ContextError(f"bound level {p.level} escapes its scopes")
            return Var(p)
        raise MalformedTerm(f"nested payload {p!r} where a term variable was expected")


def lift(s: Substitution, times: int = 1) -> Substitution:
    """The substitution pushed under ``times`` more binders."""
    return Substitution(s.src, s.dst, s.terms, s.scopes + times, s.plain)


def _escapes(t: Term) -> bool:
    found = False

    def fn(p: Payload, scopes: int) -> Term:
        nonlocal found
        if isinstance(p, Bound) and p.level >= scopes:
            found = True
        return Var(p)

    map_vars(t, fn)
    return found


def shift_bound(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to bound levels that escape t's own scopes by at least ``cutoff``."""
    if by == 0:
        return t

    def fn(p: Payload, scopes: int) -> Term:
        if isinstance(p, Bound) and p.level >= scopes + cutoff:
            return Var(Bound(p.level + by))
        return Var(p)

    return map_vars(t, fn)


def weaken(t: Term, scopes: int) -> Term:
    # assigned terms have no escaping bound levels, so this is normally a no-op
    return shift_bound(t, scopes)


# -- bind ---------------------------------------------------------------------

# One substitution per frame, innermost last; None marks an outer frame,
# whose own variables are nested payloads and local binders.
_Subs = tuple["Substitution | None", ...]


def bind(t: Term, s: Substitution) -> Term:
    return _bind_term(t, (s,))


def bind_arg(v: ArgValue, s: Substitution) -> ArgValue:
    return _bind_arg(v, (s,))


def _bind_term(t: Term, ss: _Subs) -> Term:
    # type dispatch rather than match: this is the hot loop of every law check
    if type(t) is Op:
        return Op(t.name, _bind_arg(t.args, ss))
    if type(t) is not Var:
        raise TypeError(t)
    s = ss[-1]
    p = t.p
    if s is not None:
        return s(p)
    if type(p) is Nested:
        return Var(Nested(_bind_arg(p.value, ss[:-1])))
    if type(p) is Bound:
        return t
    raise MalformedTerm(f"{p!r} inside a composite argument")


def _bind_arg(v: ArgValue, ss: _Subs) -> ArgValue:
    kind = type(v)
    if kind is ATerm:
        return ATerm(_bind_term(v.t, ss))
    if kind is ATuple:
        return ATuple(tuple([_bind_arg(x, ss) for x in v.items]))
    if kind is AScope:
        s = ss[-1]
        return AScope(_bind_arg(v.body, ss if s is None else ss[:-1] + (lift(s),)))
    if kind is AUnit:
        return v
    if kind is AOuter:
        return AOuter(_bind_arg(v.value, ss + (None,)))
    if kind is AVariant:
        return AVariant(v.tag, _bind_arg(v.v, ss))
    raise TypeError(v)


# -- renaming -----------------------------------------------------------------


def _renamer(f: Sequence[int] | Callable[[int], int], n: int, m: int):
    get = f.__getitem__ if not callable(f) else f

    def fn(p: Payload, _scopes: int) -> Term:
        match p:
            case Free(i):
                if not 0 <= i < n:
                    raise ContextError(f"free variable {i} outside context {n}")
                j = get(i)
                if not 0 <= j < m:
                    raise ContextError(f"renaming sends {i} to {j}, outside context {m}")
                return Var(Free(j))
            case Bound():
                return Var(p)
        raise MalformedTerm(f"nested payload {p!r} where a term variable was expected")

    return fn


def rename(t: Term, f: Sequence[int] | Callable[[int], int], n: int, m: int) -> Term:
    """Relabel free variables through f: n -> m; binders and nested shapes are kept."""
    return map_vars(t, _renamer(f, n, m))


def rename_arg(v: ArgValue, f: Sequence[int] | Callable[[int], int], n: int, m: int) -> ArgValue:
    return map_arg_vars(v, _renamer(f, n, m))


# -- composite values ---------------------------------------------------------


def flatten(t: Term) -> Term:
    """Multiplication: splice each nested term payload of t in place of its variable."""

    def fn(p: Payload, scopes: int) -> Term:
        match p:
            case Nested(ATerm(u)):
                return shift_bound(u, scopes)
            case Bound():
                return Var(p)
        raise MalformedTerm(f"payload {p!r} is not a nested term")

    return map_vars(t, fn)


def eta_outer(t: Term) -> Term:
    """t as a single variable of the outer layer."""
    return Var(Nested(ATerm(t)))


def eta_inner(t: Term) -> Term:
    """Every free variable of t wrapped as a nested one-variable term."""

    def fn(p: Payload, _scopes: int) -> Term:
        if isinstance(p, Free):
            return Var(Nested(ATerm(Var(p))))
        if isinstance(p, Bound):
            return Var(p)
        raise MalformedTerm(f"nested payload {p!r} in a plain term")

    return map_vars(t, fn)


def bind_comp(t: Term, s: Substitution) -> Term:
    """Substitution on a T . T value given by its outer term t."""
    out = bind_arg(AOuter(ATerm(t)), s)
    return out.value.t


def outer_payloads(w: ArgValue) -> list[ArgValue]:
    """Nested payloads of the outermost frame of w, depth-first, left to right."""
    found: list[ArgValue] = []

    def fn(p: Payload, _scopes: int) -> Term:
        if isinstance(p, Nested):
            found.append(p.value)
        return Var(p)

    map_arg_vars(w, fn)
    return found


def close_outer(w: ArgValue, index: Callable[[ArgValue], int]) -> ArgValue:
    """Replace each outermost nested payload x of w by the free variable index(x)."""

    def fn(p: Payload, _scopes: int) -> Term:
        match p:
            case Nested(x):
                return Var(Free(index(x)))
            case Bound():
                return Var(p)
        raise MalformedTerm(f"free variable {p!r} inside a composite argument")

    return map_arg_vars(w, fn)


def open_outer(w: ArgValue, payloads: Sequence[ArgValue]) -> ArgValue:
    """Inverse of close_outer: free variable j becomes the nested payload payloads[j]."""

    def fn(p: Payload, _scopes: int) -> Term:
        match p:
            case Free(j):
                return Var(Nested(payloads[j]))
            case Bound():
                return Var(p)
        raise MalformedTerm(f"unexpected payload {p!r}")

    return map_arg_vars(w, fn)


def instantiate(body: ArgValue, index: int) -> ArgValue:
    """Open one scope: the variable bound by it becomes Free(index)."""

    def fn(p: Payload, scopes: int) -> Term:
        if isinstance(p, Bound):
            if p.level == scopes:
                return Var(Free(index))
            if p.level > scopes:
                return Var(Bound(p.level - 1))
        return Var(p)

    return map_arg_vars(body, fn)


def abstract(body: ArgValue, index: int) -> ArgValue:
    """Close one scope over Free(index); inverse of instantiate."""

    def fn(p: Payload, scopes: int) -> Term:
        match p:
            case Free(i) if i == index:
                return Var(Bound(scopes))
            case Bound(k) if k >= scopes:
                return Var(Bound(k + 1))
        return Var(p)

    return map_arg_vars(body, fn)
