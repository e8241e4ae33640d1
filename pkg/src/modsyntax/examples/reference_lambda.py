"""Hand-written untyped lambda terms with simultaneous substitution.

Written without the generic engine, to serve as an independent oracle.
A term over context n uses variables 0..n-1; the body of ``LLam`` lives
over n+1 and its bound variable is the last one, n.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence


@dataclasses.dataclass(frozen=True, slots=True)
class LVar:
    i: int


@dataclasses.dataclass(frozen=True, slots=True)
class LApp:
    f: "Lam"
    a: "Lam"


@dataclasses.dataclass(frozen=True, slots=True)
class LLam:
    body: "Lam"


Lam = LVar | LApp | LLam


def scoped(t: Lam, n: int) -> bool:
    if isinstance(t, LVar):
        return 0 <= t.i < n
    if isinstance(t, LApp):
        return scoped(t.f, n) and scoped(t.a, n)
    return scoped(t.body, n + 1)


def shift(t: Lam, m: int) -> Lam:
    """t over m, moved under one more binder: variables from m up are t's own binders."""
    if isinstance(t, LVar):
        return LVar(t.i + 1) if t.i >= m else t
    if isinstance(t, LApp):
        return LApp(shift(t.f, m), shift(t.a, m))
    return LLam(shift(t.body, m))


def subst(t: Lam, n: int, sub: Sequence[Lam], m: int) -> Lam:
    """Replace variable i (< n) of t by sub[i], a term over m."""
    if isinstance(t, LVar):
        return sub[t.i]
    if isinstance(t, LApp):
        return LApp(subst(t.f, n, sub, m), subst(t.a, n, sub, m))
    # under the binder the target context gains variable m; the assigned
    # terms keep their free variables but their own binders move up by one
    return LLam(subst(t.body, n + 1, [*(shift(u, m) for u in sub), LVar(m)], m + 1))


def rename_into(t: Lam, n: int, f: Sequence[int], m: int) -> Lam:
    """Relabel the free variables of t through f: n -> m."""
    return subst(t, n, [LVar(j) for j in f], m)


def enumerate_lambda(n: int, depth: int) -> list[Lam]:
    """All terms over n variables with constructor depth <= depth, by brute force."""
    if depth == 0:
        return [LVar(i) for i in range(n)]
    smaller = enumerate_lambda(n, depth - 1)
    out: list[Lam] = [LVar(i) for i in range(n)]
    out.extend(LApp(f, a) for f in smaller for a in smaller)
    out.extend(LLam(b) for b in enumerate_lambda(n + 1, depth - 1))
    return out


def count_lambda(n: int, depth: int) -> int:
    """Same count as len(enumerate_lambda(n, depth)) via the recurrence."""
    if depth == 0:
        return n
    c = count_lambda(n, depth - 1)
    return n + c * c + count_lambda(n + 1, depth - 1)


def show(t: Lam) -> str:
    if isinstance(t, LVar):
        return f"(var {t.i})"
    if isinstance(t, LApp):
        return f"(app {show(t.f)} {show(t.a)})"
    return f"(lam {show(t.body)})"
