"""S-expression reading and writing for terms and argument values."""

from __future__ import annotations

import itertools
import operator
import re

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
    Nested,
    Op,
    Term,
    UNIT,
    Var,
)


class SexprError(ValueError):
    pass


def show_term(t: Term) -> str:
    match t:
        case Var(Free(i)):
            return f"(var {i})"
        case Var(Bound(k)):
            return f"(bnd {k})"
        case Var(Nested(v)):
            return f"(nested {show_arg(v)})"
        case Op(name, args):
            return f"(op {name} {show_arg(args)})"
    raise TypeError(t)


def show_arg(v: ArgValue) -> str:
    match v:
        case ATerm(t):
            return show_term(t)
        case AUnit():
            return "()"
        case ATuple(items):
            return "(tuple" + "".join(" " + show_arg(x) for x in items) + ")"
        case AScope(body):
            return f"(scope {show_arg(body)})"
        case AOuter(w):
            return f"(outer {show_arg(w)})"
        case AVariant(tag, x):
            return f"(variant {tag} {show_arg(x)})"
    raise TypeError(v)


class _Printer:
    """show_term over many terms, printing each shared subterm object once."""

    def __init__(self):
        # keyed by id; the values keep the objects alive, so ids stay unique
        self.memo: dict[int, tuple[object, str]] = {}

    def term(self, t: Term) -> str:
        hit = self.memo.get(id(t))
        if hit is not None:
            return hit[1]
        tt = type(t)
        if tt is Op:
            text = f"(op {t.name} {self.arg(t.args)})"
        elif tt is Var and type(t.p) is Nested:
            text = f"(nested {self.arg(t.p.value)})"
        else:
            return show_term(t)
        self.memo[id(t)] = (t, text)
        return text

    def arg(self, v: ArgValue) -> str:
        hit = self.memo.get(id(v))
        if hit is not None:
            return hit[1]
        match v:
            case ATerm(t):
                return self.term(t)
            case ATuple(items):
                text = "(tuple" + "".join(" " + self.arg(x) for x in items) + ")"
            case AScope(body):
                text = f"(scope {self.arg(body)})"
            case AOuter(w):
                text = f"(outer {self.arg(w)})"
            case AVariant(tag, x):
                text = f"(variant {tag} {self.arg(x)})"
            case _:
                return show_arg(v)
        self.memo[id(v)] = (v, text)
        return text


def show_terms(terms) -> str:
    """One term per line, each line exactly show_term of the term."""
    p = _Printer()
    return "".join(p.term(t) + "\n" for t in terms)


_TOKEN = re.compile(r"[()]|[^\s()]+")


def read_forms(text: str) -> list:
    """Parse a sequence of s-expressions into nested lists of atom strings."""
    stack: list[list] = [[]]
    for tok in _TOKEN.findall(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise SexprError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise SexprError("unbalanced '('")
    return stack[0]


def read_sexpr(text: str):
    """Parse exactly one s-expression."""
    forms = read_forms(text)
    if not forms:
        raise SexprError("empty input")
    if len(forms) != 1:
        raise SexprError("expected exactly one expression")
    return forms[0]


_DELTA = {"(": 1, ")": -1}
_MEMO_LIMIT = 1 << 18


class _Reader:
    """Recursive descent from tokens straight to terms.

    Parentheses are matched up front, so every subexpression has a known
    extent; repeated subexpressions (common in enumerated slices) are
    parsed once and shared. Top-level forms are not memoized.
    """

    def __init__(self, text: str, memo: dict | None = None):
        toks = _TOKEN.findall(text)
        depth = list(itertools.accumulate(map(_DELTA.get, toks, itertools.repeat(0))))
        if depth and min(depth) < 0:
            raise SexprError("unbalanced ')'")
        if depth and depth[-1] != 0:
            raise SexprError("unbalanced '('")
        self.toks = toks
        self.depth = depth
        # the canonical text of toks[i:j] is self.flat[off[i]:off[j] - 1]
        self.flat = " ".join(toks)
        self.off = list(map(operator.add, itertools.accumulate(map(len, toks), initial=0), itertools.count()))
        self.memo: dict[tuple[bool, str], object] = {} if memo is None else memo

    def _end(self, i: int) -> int:
        """Index just past the form opening at i."""
        if self.toks[i] != "(":
            raise SexprError(f"expected '(' at token {i}, got {self.toks[i]!r}")
        return self.depth.index(self.depth[i] - 1, i) + 1

    def _shared(self, i: int, is_term: bool, top: bool):
        j = self._end(i)
        if top:
            return (self._term if is_term else self._arg)(i, j), j
        key = (is_term, self.flat[self.off[i] : self.off[j] - 1])
        x = self.memo.get(key)
        if x is None:
            x = (self._term if is_term else self._arg)(i, j)
            if len(self.memo) >= _MEMO_LIMIT:
                self.memo.clear()
            self.memo[key] = x
        return x, j

    def term(self, i: int, top: bool = False) -> tuple[Term, int]:
        return self._shared(i, True, top)

    def arg(self, i: int) -> tuple[ArgValue, int]:
        return self._shared(i, False, False)

    def _atom(self, i: int, j: int) -> str:
        tok = self.toks[i] if i < j - 1 else ")"
        if tok == "(" or tok == ")":
            raise SexprError(f"expected an atom at token {i}, got {tok!r}")
        return tok

    def _nat(self, i: int, j: int) -> int:
        tok = self._atom(i, j)
        if not tok.isdigit():
            raise SexprError(f"expected a natural number at token {i}, got {tok!r}")
        return int(tok)

    def _last(self, k: int, j: int, x):
        """x, provided the form ending at j has nothing left after token k."""
        if k != j - 1:
            raise SexprError(f"unexpected {self.toks[k]!r} at token {k}")
        return x

    def _term(self, i: int, j: int) -> Term:
        head = self._atom(i + 1, j)
        if head == "var":
            return self._last(i + 3, j, Var(Free(self._nat(i + 2, j))))
        if head == "bnd":
            return self._last(i + 3, j, Var(Bound(self._nat(i + 2, j))))
        if head == "op":
            name = self._atom(i + 2, j)
            v, k = self.arg(i + 3)
            return self._last(k, j, Op(name, v))
        if head == "nested":
            v, k = self.arg(i + 2)
            return self._last(k, j, Var(Nested(v)))
        raise SexprError(f"malformed term with head {head!r} at token {i}")

    def _arg(self, i: int, j: int) -> ArgValue:
        head = self.toks[i + 1]
        if head == ")":
            return UNIT
        if head == "tuple":
            items, k = [], i + 2
            while k < j - 1:
                v, k = self.arg(k)
                items.append(v)
            return ATuple(tuple(items))
        if head == "scope":
            v, k = self.arg(i + 2)
            return self._last(k, j, AScope(v))
        if head == "outer":
            v, k = self.arg(i + 2)
            return self._last(k, j, AOuter(v))
        if head == "variant":
            tag = self._atom(i + 2, j)
            v, k = self.arg(i + 3)
            return self._last(k, j, AVariant(tag, v))
        return ATerm(self._term(i, j))

    def forms(self, is_term: bool) -> list:
        out, i = [], 0
        while i < len(self.toks):
            x, i = self._shared(i, is_term, True)
            out.append(x)
        return out

    def one(self, is_term: bool):
        forms = self.forms(is_term)
        if len(forms) != 1:
            raise SexprError("empty input" if not forms else "expected exactly one expression")
        return forms[0]


def parse_term(text: str) -> Term:
    return _Reader(text).one(True)


_CHUNK = 1 << 16


def _chunks(text: str):
    """Pieces of text cut at line ends where parentheses balance."""
    buf, size, balance = [], 0, 0
    for line in text.splitlines(keepends=True):
        buf.append(line)
        size += len(line)
        balance += line.count("(") - line.count(")")
        if size >= _CHUNK and balance == 0:
            yield "".join(buf)
            buf, size = [], 0
    if buf:
        yield "".join(buf)


def parse_terms(text: str) -> list[Term]:
    """Every term in text, in order; blank input gives an empty list.

    Long inputs are read in balanced chunks that share one memo, so memory
    stays proportional to a chunk plus the distinct subterms.
    """
    memo: dict = {}
    out: list[Term] = []
    for chunk in _chunks(text):
        out.extend(_Reader(chunk, memo).forms(True))
    return out


def parse_arg(text: str) -> ArgValue:
    return _Reader(text).one(False)


def pretty_term(t: Term) -> str:
    """Compact human-oriented notation: x3 free, #0 bound, <...> nested, \\. scope."""
    match t:
        case Var(Free(i)):
            return f"x{i}"
        case Var(Bound(k)):
            return f"#{k}"
        case Var(Nested(v)):
            return f"<{pretty_arg(v)}>"
        case Op(name, AUnit()):
            return name
        case Op(name, ATuple(items)):
            return f"{name}(" + ", ".join(pretty_arg(i) for i in items) + ")"
        case Op(name, args):
            return f"{name}({pretty_arg(args)})"
    raise TypeError(t)


def pretty_arg(v: ArgValue) -> str:
    match v:
        case ATerm(t):
            return pretty_term(t)
        case AUnit():
            return "()"
        case ATuple(items):
            return "(" + ", ".join(pretty_arg(i) for i in items) + ")"
        case AScope(body):
            return "\\." + pretty_arg(body)
        case AOuter(w):
            return "[" + pretty_arg(w) + "]"
        case AVariant(tag, x):
            return f"{tag}:{pretty_arg(x)}"
    raise TypeError(v)
