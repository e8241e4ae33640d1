"""Arity expressions, signatures, and their surface syntax.

An arity describes the argument shape of one operation.  The grammar::

    T          the term module itself
    1          the terminal (unit) shape
    a * b      product (n-ary, flattened within one parenthesis level)
    a'         derivative: the argument binds one fresh variable
    a . b      composition: a-shaped structure whose variables carry b-values
    t:a + u:b  tagged sum (untagged summands get positional tags "0", "1", ...)
    T^(1,0)    sugar for the algebraic product T' * T

Postfix ``'`` binds tightest, then ``.`` (right associative), then ``*``,
then ``+``.  ``prod(a)`` writes a one-factor product that is not algebraic.
"""

from __future__ import annotations

import dataclasses
import re
from typing import Iterable, Iterator, Mapping


class ArityParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class MergeError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class Arity:
    def __str__(self) -> str:
        return print_arity(self)


@dataclasses.dataclass(frozen=True)
class Theta(Arity):
    pass


@dataclasses.dataclass(frozen=True)
class Terminal(Arity):
    pass


@dataclasses.dataclass(frozen=True)
class Prod(Arity):
    factors: tuple[Arity, ...]


@dataclasses.dataclass(frozen=True)
class Deriv(Arity):
    inner: Arity


@dataclasses.dataclass(frozen=True)
class Comp(Arity):
    outer: Arity
    inner: Arity


@dataclasses.dataclass(frozen=True)
class Sum(Arity):
    variants: tuple[tuple[str, Arity], ...]


THETA = Theta()
TERMINAL = Terminal()


def canon(a: Arity) -> Arity:
    """Canonical form: empty products become Terminal, recursively."""
    match a:
        case Theta() | Terminal():
            return a
        case Prod(factors):
            if not factors:
                return TERMINAL
            return Prod(tuple(canon(f) for f in factors))
        case Deriv(inner):
            return Deriv(canon(inner))
        case Comp(outer, inner):
            return Comp(canon(outer), canon(inner))
        case Sum(variants):
            return Sum(tuple((tag, canon(v)) for tag, v in variants))
    raise TypeError(f"not an arity: {a!r}")


def derive_n(a: Arity, n: int) -> Arity:
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    for _ in range(n):
        a = Deriv(a)
    return a


def algebraic(s: Iterable[int]) -> Arity:
    """The algebraic arity T^(s): one factor per entry, each an iterated derivative of T."""
    s = list(s)
    if any(k < 0 for k in s):
        raise ValueError("algebraic arity indices must be nonnegative")
    if not s:
        return TERMINAL
    return Prod(tuple(derive_n(THETA, k) for k in s))


def _deriv_order(a: Arity) -> int | None:
    k = 0
    while isinstance(a, Deriv):
        a = a.inner
        k += 1
    return k if isinstance(a, Theta) else None


def algebraic_indices(a: Arity) -> list[int] | None:
    """Return s with a == algebraic(s), or None when a is not algebraic."""
    a = canon(a)
    if isinstance(a, Terminal):
        return []
    if not isinstance(a, Prod):
        return None
    out = []
    for f in a.factors:
        k = _deriv_order(f)
        if k is None:
            return None
        out.append(k)
    return out


def is_algebraic(a: Arity) -> bool:
    return algebraic_indices(a) is not None


def subarities(a: Arity) -> Iterator[Arity]:
    """All sub-expressions of a (a itself first), pre-order, without repeats."""
    seen: set[Arity] = set()
    stack = [a]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        yield x
        match x:
            case Prod(factors):
                stack.extend(reversed(factors))
            case Deriv(inner):
                stack.append(inner)
            case Comp(outer, inner):
                stack.extend([inner, outer])
            case Sum(variants):
                stack.extend(v for _, v in reversed(variants))


def arity_problems(a: Arity) -> list[str]:
    problems = []
    for x in subarities(a):
        if isinstance(x, Sum):
            tags = [t for t, _ in x.variants]
            if not tags:
                problems.append("empty sum")
            dup = sorted({t for t in tags if tags.count(t) > 1})
            if dup:
                problems.append(f"duplicate sum tags {dup}")
        elif not isinstance(x, (Theta, Terminal, Prod, Deriv, Comp)):
            problems.append(f"unknown arity node {x!r}")
    return problems


# -- printing -----------------------------------------------------------------

_SUM, _PROD, _COMP, _POSTFIX = range(4)


def print_arity(a: Arity) -> str:
    return _show(a, _SUM)


def _paren(text: str, level: int, ctx: int) -> str:
    return f"({text})" if level < ctx else text


def _show(a: Arity, ctx: int) -> str:
    match a:
        case Theta():
            return "T"
        case Terminal():
            return "1"
        case Deriv(inner):
            return _show(inner, _POSTFIX) + "'"
        case Comp(outer, inner):
            # right associative: a . (b . c) prints bare, (a . b) . c keeps parens
            text = f"{_show(outer, _COMP + 1)} . {_show(inner, _COMP)}"
            return _paren(text, _COMP, ctx)
        case Prod(factors):
            if len(factors) == 1:
                k = _deriv_order(factors[0])
                return f"T^({k})" if k is not None else f"prod({_show(factors[0], _SUM)})"
            text = " * ".join(_show(f, _PROD + 1) for f in factors)
            return _paren(text, _PROD, ctx)
        case Sum(variants):
            text = " + ".join(f"{tag}:{_show(v, _PROD)}" for tag, v in variants)
            return _paren(text, _SUM, ctx) if len(variants) > 1 else f"({text})"
    raise TypeError(f"not an arity: {a!r}")


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_\-]*)|(?P<sym>\^|[()*.+',:]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ArityParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> tuple[str, str, int]:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, value: str | None = None, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            raise ArityParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Arity:
        a = self.sum()
        if self.peek()[0] != "end":
            tok = self.peek()
            raise ArityParseError(f"unexpected {tok[1]!r}", tok[2])
        return a

    def _is_tag(self) -> bool:
        kind, _, _ = self.peek()
        return kind in ("name", "num") and self.peek(1)[1] == ":"

    def sum(self) -> Arity:
        start = self.peek()[2]
        items = [self.summand()]
        while self.peek()[1] == "+":
            self.take("+")
            items.append(self.summand())
        if len(items) == 1 and items[0][0] is None:
            return items[0][1]
        tags = [tag if tag is not None else str(i) for i, (tag, _) in enumerate(items)]
        if len(set(tags)) != len(tags):
            raise ArityParseError("duplicate sum tag", start)
        return Sum(tuple(zip(tags, (a for _, a in items))))

    def summand(self) -> tuple[str | None, Arity]:
        tag = None
        if self._is_tag():
            tag = self.take()[1]
            self.take(":")
        return tag, self.product()

    def product(self) -> Arity:
        factors = [self.comp()]
        while self.peek()[1] == "*":
            self.take("*")
            factors.append(self.comp())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def comp(self) -> Arity:
        outer = self.postfix()
        if self.peek()[1] == ".":
            self.take(".")
            return Comp(outer, self.comp())
        return outer

    def postfix(self) -> Arity:
        a = self.atom()
        while self.peek()[1] == "'":
            self.take("'")
            a = Deriv(a)
        return a

    def atom(self) -> Arity:
        kind, value, pos = self.peek()
        if value == "(":
            self.take("(")
            a = self.sum()
            self.take(")")
            return a
        if kind == "num":
            self.take()
            if value != "1":
                raise ArityParseError(f"only 1 is a numeric arity, found {value}", pos)
            return TERMINAL
        if kind == "name" and value == "T":
            self.take()
            if self.peek()[1] == "^":
                self.take("^")
                self.take("(")
                idx = []
                if self.peek()[1] != ")":
                    idx.append(int(self.take(kind="num")[1]))
                    while self.peek()[1] == ",":
                        self.take(",")
                        idx.append(int(self.take(kind="num")[1]))
                self.take(")")
                return algebraic(idx)
            return THETA
        if kind == "name" and value == "prod":
            self.take()
            self.take("(")
            inner = self.sum()
            self.take(")")
            return Prod((inner,))
        raise ArityParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse_arity(text: str) -> Arity:
    return canon(_Parser(text).parse())


# -- signatures ---------------------------------------------------------------


class Signature:
    """A named family of operations with their arities.

    Equality and hashing look only at the set of (op, arity) pairs; the name
    is a label and the declaration order is kept for deterministic output.
    """

    __slots__ = ("name", "ops", "_index")

    def __init__(self, name: str, ops: Iterable[tuple[str, Arity]] = ()):
        self.name = name
        self.ops = tuple((o, canon(a)) for o, a in ops)
        self._index = dict(self.ops)

    def arity(self, op: str) -> Arity:
        try:
            return self._index[op]
        except KeyError:
            raise KeyError(f"operation {op!r} not in signature {self.name!r}") from None

    def __contains__(self, op: str) -> bool:
        return op in self._index

    def __iter__(self) -> Iterator[str]:
        return (o for o, _ in self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return frozenset(self.ops) == frozenset(other.ops)

    def __hash__(self) -> int:
        return hash(frozenset(self.ops))

    def __repr__(self) -> str:
        body = ", ".join(f"{o}: {print_arity(a)}" for o, a in self.ops)
        return f"Signature({self.name!r}, {{{body}}})"

    def extend(self, name: str, ops: Iterable[tuple[str, Arity]]) -> Signature:
        return Signature(name, [*self.ops, *ops])


@dataclasses.dataclass(frozen=True)
class SignatureInclusion:
    source: Signature
    target: Signature
    mapping: Mapping[str, str]

    def __call__(self, op: str) -> str:
        return self.mapping[op]

    @classmethod
    def identity(cls, sig: Signature) -> SignatureInclusion:
        return cls(sig, sig, {o: o for o in sig})

    @classmethod
    def by_name(cls, source: Signature, target: Signature) -> SignatureInclusion:
        return cls(source, target, {o: o for o in source})

    def then(self, other: SignatureInclusion) -> SignatureInclusion:
        return SignatureInclusion(self.source, other.target, {o: other(self(o)) for o in self.source})

    def problems(self) -> list[str]:
        out = []
        for o in self.source:
            if o not in self.mapping:
                out.append(f"operation {o!r} is not mapped")
            elif self.mapping[o] not in self.target:
                out.append(f"{o!r} maps to {self.mapping[o]!r}, missing from target")
            elif self.target.arity(self.mapping[o]) != self.source.arity(o):
                out.append(f"{o!r} changes arity under the inclusion")
        images = [self.mapping[o] for o in self.source if o in self.mapping]
        if len(set(images)) != len(images):
            out.append("mapping is not injective")
        return out


def validate_signature(sig: Signature) -> list[str]:
    """Problems with sig as human-readable strings; empty when valid."""
    report = []
    names = [o for o, _ in sig.ops]
    for o in sorted({o for o in names if names.count(o) > 1}):
        report.append(f"duplicate operation {o!r}")
    for o, a in sig.ops:
        report.extend(f"operation {o!r}: {p}" for p in arity_problems(a))
    return report


def merge_signatures(
    s1: Signature,
    s2: Signature,
    shared1: SignatureInclusion,
    shared2: SignatureInclusion,
    name: str | None = None,
) -> tuple[Signature, SignatureInclusion, SignatureInclusion]:
    """Amalgamated sum of s1 and s2 over the common part shared1.source.

    Operations of s2 outside the shared part whose name is already taken are
    renamed to ``<s2.name>.<op>``.
    """
    if shared1.source != shared2.source:
        raise MergeError("shared inclusions have different sources")
    for inc in (shared1, shared2):
        bad = inc.problems()
        if bad:
            raise MergeError("; ".join(bad))
    glue = {}
    for o in shared1.source:
        a1 = s1.arity(shared1(o))
        if a1 != s2.arity(shared2(o)):
            raise MergeError(f"arity mismatch on shared operation {o!r}")
        glue[shared2(o)] = shared1(o)

    ops = list(s1.ops)
    taken = {o for o, _ in ops}
    to_merged = {}
    for p, a in s2.ops:
        if p in glue:
            to_merged[p] = glue[p]
            continue
        q = p if p not in taken else f"{s2.name}.{p}"
        if q in taken:
            raise MergeError(f"cannot disambiguate {p!r}: {q!r} is taken")
        taken.add(q)
        ops.append((q, a))
        to_merged[p] = q
    merged = Signature(name or f"{s1.name}+{s2.name}", ops)
    inc1 = SignatureInclusion(s1, merged, {o: o for o in s1})
    inc2 = SignatureInclusion(s2, merged, to_merged)
    return merged, inc1, inc2


class SignatureFileError(ValueError):
    pass


def parse_signature(text: str) -> Signature:
    """Read the line-oriented signature file format.

    Duplicate operation names are kept so validate_signature can report them.
    """
    name = None
    ops: list[tuple[str, Arity]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if name is None:
            head = line.split()
            if len(head) != 2 or head[0] != "signature":
                raise SignatureFileError(f"line {lineno}: expected 'signature <name>'")
            name = head[1]
            continue
        if ":" not in line:
            raise SignatureFileError(f"line {lineno}: expected '<op> : <arity>'")
        op, expr = line.split(":", 1)
        op = op.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_.\-]*", op):
            raise SignatureFileError(f"line {lineno}: bad operation name {op!r}")
        try:
            ops.append((op, parse_arity(expr)))
        except ArityParseError as exc:
            raise SignatureFileError(f"line {lineno}: {exc}") from None
    if name is None:
        raise SignatureFileError("missing 'signature <name>' header")
    sig = Signature.__new__(Signature)
    sig.name = name
    sig.ops = tuple(ops)
    sig._index = dict(ops)
    return sig


def print_signature(sig: Signature) -> str:
    lines = [f"signature {sig.name}"]
    lines.extend(f"{o} : {print_arity(a)}" for o, a in sig.ops)
    return "\n".join(lines) + "\n"
