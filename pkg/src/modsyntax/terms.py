"""Well-scoped terms over a signature.

A term lives in a context of ``n`` free variables ``Free(0..n-1)``.  Binders
do not shift free indices: under ``k`` enclosing scopes, ``Bound(j)`` with
``j < k`` names the ``j``-th scope counted from the innermost one.

Composite arities ``a . b`` store an a-shaped value (``AOuter``) whose
variables are ``Nested`` b-values.  Inside an ``AOuter`` the ambient free
and bound variables are not visible directly, only through the nested
payloads, which are read back in the frame where the ``AOuter`` sits.
"""

from __future__ import annotations

import dataclasses
from typing import Callable

from .arity import Arity, Comp, Deriv, Prod, Signature, Sum, Terminal, Theta


class Payload:
    __slots__ = ()


@dataclasses.dataclass(frozen=True, slots=True)
class Free(Payload):
    index: int


@dataclasses.dataclass(frozen=True, slots=True)
class Bound(Payload):
    level: int


@dataclasses.dataclass(frozen=True, slots=True)
class Nested(Payload):
    value: ArgValue


class Term:
    __slots__ = ()


@dataclasses.dataclass(frozen=True, slots=True)
class Var(Term):
    p: Payload


@dataclasses.dataclass(frozen=True, slots=True)
class Op(Term):
    name: str
    args: ArgValue


class ArgValue:
    __slots__ = ()


@dataclasses.dataclass(frozen=True, slots=True)
class ATerm(ArgValue):
    t: Term


@dataclasses.dataclass(frozen=True, slots=True)
class AUnit(ArgValue):
    pass


@dataclasses.dataclass(frozen=True, slots=True)
class ATuple(ArgValue):
    items: tuple[ArgValue, ...]


@dataclasses.dataclass(frozen=True, slots=True)
class AScope(ArgValue):
    body: ArgValue


@dataclasses.dataclass(frozen=True, slots=True)
class AOuter(ArgValue):
    value: ArgValue


@dataclasses.dataclass(frozen=True, slots=True)
class AVariant(ArgValue):
    tag: str
    v: ArgValue


UNIT = AUnit()


def var(i: int) -> Var:
    return Var(Free(i))


def bnd(k: int) -> Var:
    return Var(Bound(k))


def nested(v: ArgValue | Term) -> Var:
    return Var(Nested(ATerm(v) if isinstance(v, Term) else v))


# -- frames -------------------------------------------------------------------


@dataclasses.dataclass(frozen=True, slots=True)
class Frame:
    """Variables visible at a position.

    The base frame has ``free`` context variables; an outer frame (inside
    AOuter) has none and instead accepts Nested payloads of shape ``inner``,
    checked in ``parent``.
    """

    free: int
    depth: int = 0
    inner: Arity | None = None
    parent: Frame | None = None

    def scoped(self) -> Frame:
        return Frame(self.free, self.depth + 1, self.inner, self.parent)

    def outer(self, inner: Arity) -> Frame:
        return Frame(0, 0, inner, self)


class MalformedTerm(ValueError):
    pass


def well_formed(t: Term, sig: Signature, n: int) -> bool:
    try:
        check_term(t, sig, Frame(n))
    except MalformedTerm:
        return False
    return True


def check_term(t: Term, sig: Signature, frame: Frame) -> None:
    match t:
        case Var(Free(i)):
            if frame.inner is not None or not 0 <= i < frame.free:
                raise MalformedTerm(f"free variable {i} out of context")
        case Var(Bound(k)):
            if not 0 <= k < frame.depth:
                raise MalformedTerm(f"bound level {k} with {frame.depth} open scopes")
        case Var(Nested(v)):
            if frame.inner is None:
                raise MalformedTerm("nested payload outside a composite argument")
            check_arg(v, frame.inner, sig, frame.parent)
        case Op(name, args):
            if name not in sig:
                raise MalformedTerm(f"unknown operation {name!r}")
            check_arg(args, sig.arity(name), sig, frame)
        case _:
            raise MalformedTerm(f"not a term: {t!r}")


def check_arg(v: ArgValue, a: Arity, sig: Signature, frame: Frame) -> None:
    match a, v:
        case Theta(), ATerm(t):
            check_term(t, sig, frame)
        case Terminal(), AUnit():
            pass
        case Prod(factors), ATuple(items) if len(factors) == len(items):
            for f, x in zip(factors, items):
                check_arg(x, f, sig, frame)
        case Deriv(inner), AScope(body):
            check_arg(body, inner, sig, frame.scoped())
        case Comp(outer, inner), AOuter(w):
            check_arg(w, outer, sig, frame.outer(inner))
        case Sum(variants), AVariant(tag, x):
            shapes = dict(variants)
            if tag not in shapes:
                raise MalformedTerm(f"unknown variant tag {tag!r}")
            check_arg(x, shapes[tag], sig, frame)
        case _:
            raise MalformedTerm(f"value {v!r} does not have shape {a}")


# -- depth --------------------------------------------------------------------


def depth(t: Term) -> int:
    """Operation nesting depth; variables are 0, nested payloads count their terms."""
    match t:
        case Var(Nested(v)):
            return arg_depth(v)
        case Var():
            return 0
        case Op(_, args):
            return 1 + arg_depth(args)
    raise TypeError(t)


def arg_depth(v: ArgValue) -> int:
    match v:
        case ATerm(t):
            return depth(t)
        case AUnit():
            return 0
        case ATuple(items):
            return max(map(arg_depth, items), default=0)
        case AScope(body) | AOuter(body) | AVariant(_, body):
            return arg_depth(body)
    raise TypeError(v)


# -- frame-aware traversal ----------------------------------------------------

VarFn = Callable[[Payload, int], Term]


def map_vars(t: Term, fn: VarFn) -> Term:
    """Rebuild t, replacing every variable of its base frame by ``fn(payload, scopes)``.

    ``scopes`` counts the binders between the variable and the root of t in
    the base frame.  Variables of outer frames are left alone except that
    nested payloads are traversed back in the base frame.
    """
    return _map_term(t, fn, (0,))


def map_arg_vars(v: ArgValue, fn: VarFn) -> ArgValue:
    return _map_arg(v, fn, (0,))


def _map_term(t: Term, fn: VarFn, depths: tuple[int, ...]) -> Term:
    match t:
        case Var(p):
            if len(depths) == 1:
                return fn(p, depths[0])
            match p:
                case Nested(v):
                    return Var(Nested(_map_arg(v, fn, depths[:-1])))
                case Bound():
                    return t
            raise MalformedTerm(f"{p!r} inside a composite argument")
        case Op(name, args):
            return Op(name, _map_arg(args, fn, depths))
    raise TypeError(t)


def _map_arg(v: ArgValue, fn: VarFn, depths: tuple[int, ...]) -> ArgValue:
    match v:
        case ATerm(t):
            return ATerm(_map_term(t, fn, depths))
        case AUnit():
            return v
        case ATuple(items):
            return ATuple(tuple(_map_arg(x, fn, depths) for x in items))
        case AScope(body):
            return AScope(_map_arg(body, fn, depths[:-1] + (depths[-1] + 1,)))
        case AOuter(w):
            return AOuter(_map_arg(w, fn, depths + (0,)))
        case AVariant(tag, x):
            return AVariant(tag, _map_arg(x, fn, depths))
    raise TypeError(v)


def map_ops(t: Term, fn: Callable[[str], str]) -> Term:
    """Rename every operation node, including those inside nested payloads."""
    match t:
        case Var(Nested(v)):
            return Var(Nested(map_ops_arg(v, fn)))
        case Var():
            return t
        case Op(name, args):
            return Op(fn(name), map_ops_arg(args, fn))
    raise TypeError(t)


def map_ops_arg(v: ArgValue, fn: Callable[[str], str]) -> ArgValue:
    match v:
        case ATerm(t):
            return ATerm(map_ops(t, fn))
        case AUnit():
            return v
        case ATuple(items):
            return ATuple(tuple(map_ops_arg(x, fn) for x in items))
        case AScope(body):
            return AScope(map_ops_arg(body, fn))
        case AOuter(w):
            return AOuter(map_ops_arg(w, fn))
        case AVariant(tag, x):
            return AVariant(tag, map_ops_arg(x, fn))
    raise TypeError(v)


def free_vars(t: Term) -> set[int]:
    seen: set[int] = set()

    def visit(p: Payload, _scopes: int) -> Term:
        if isinstance(p, Free):
            seen.add(p.index)
        return Var(p)

    map_vars(t, visit)
    return seen


def is_closed(t: Term) -> bool:
    return not free_vars(t)
