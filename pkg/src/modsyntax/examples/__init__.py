"""The lambda calculus, its explicit-join extension and explicit substitutions."""

from __future__ import annotations

import dataclasses
from importlib import resources

from ..arity import (
    THETA,
    Comp,
    Deriv,
    Prod,
    Signature,
    SignatureInclusion,
    derive_n,
    merge_signatures,
    parse_signature,
)
from ..generate import DEFAULT_CAP, count_terms, enumerate_terms
from ..initiality import PushoutSquare, TargetMonad, TargetRepresentation, eval_many, self_representation
from . import reference_lambda as rl

DEFAULT_SIGMA_BOUND = 3
SIGMA_PREFIX = "sigma"


def lambda_signature() -> Signature:
    return Signature("lambda", [("app", Prod((THETA, THETA))), ("abs", Deriv(THETA))])


def join_signature() -> Signature:
    return lambda_signature().extend("lambda-join", [("join", Comp(THETA, THETA))])


def sigma_arity(n: int):
    return Prod((derive_n(THETA, n),) + (THETA,) * n)


def explicit_subst_signature(bound: int = DEFAULT_SIGMA_BOUND) -> Signature:
    ops = [(f"{SIGMA_PREFIX}{n}", sigma_arity(n)) for n in range(bound + 1)]
    return lambda_signature().extend(f"lambda-xsubst-{bound}", ops)


def lambda_join_square() -> PushoutSquare:
    """lambda and lambda+join amalgamated over lambda."""
    core, left, right = lambda_signature(), lambda_signature(), join_signature()
    cl = SignatureInclusion.identity(core)
    cr = SignatureInclusion.by_name(core, right)
    merged, lm, rm = merge_signatures(left, right, cl, cr, name="lambda-join")
    return PushoutSquare(core, left, right, merged, cl, cr, lm, rm)


def full_signature(bound: int = DEFAULT_SIGMA_BOUND) -> Signature:
    """lambda + join + sigma family, amalgamated over lambda."""
    core = lambda_signature()
    left, right = join_signature(), explicit_subst_signature(bound)
    merged, _, _ = merge_signatures(
        left,
        right,
        SignatureInclusion.by_name(core, left),
        SignatureInclusion.by_name(core, right),
        name=f"lambda-join-xsubst-{bound}",
    )
    return merged


def sigma_order(op: str) -> int | None:
    tail = op[len(SIGMA_PREFIX):]
    if op.startswith(SIGMA_PREFIX) and tail.isdigit():
        return int(tail)
    return None


# -- reference representation ------------------------------------------------------


def reference_monad() -> TargetMonad:
    return TargetMonad(
        "lambda-ref",
        unit=lambda n, i: rl.LVar(i),
        bind=lambda t, n, assigned, m: rl.subst(t, n, assigned, m),
        show=rl.show,
    )


def _app(x, ctx):
    return rl.LApp(x[0], x[1])


def _abs(body, ctx):
    return rl.LLam(body)


def _join(outer, ctx):
    return rl.subst(outer.value, len(outer.payloads), outer.payloads, ctx)


def _sigma(n: int):
    # the n formal arguments are the last n variables of the body's context
    def interp(x, ctx):
        body, args = x[0], x[1:]
        return rl.subst(body, ctx + n, [*map(rl.LVar, range(ctx)), *args], ctx)

    return interp


class _LambdaInterp(dict):
    """Interpretations keyed by op name; sigma<n> is supplied on demand for any n."""

    def __missing__(self, op):
        n = sigma_order(op)
        if n is None:
            raise KeyError(op)
        return _sigma(n)

    def __contains__(self, op):
        return dict.__contains__(self, op) or sigma_order(op) is not None


def reference_lambda_rep(join: bool = False) -> TargetRepresentation:
    """Lambda terms with genuine substitution; join as multiplication when asked."""
    interp = _LambdaInterp(app=_app, abs=_abs)
    if join:
        interp["join"] = _join
    return TargetRepresentation(reference_monad(), interp, "lambda-join-ref" if join else "lambda-ref")


def _broken_app(x, ctx):
    # looks at which variable the argument is, which no substitution-respecting map may do
    f, a = x
    return rl.LApp(f, f) if a == rl.LVar(0) else rl.LApp(f, a)


def broken_lambda_rep() -> TargetRepresentation:
    """Negative control: app drops its argument when that argument is variable 0."""
    interp = _LambdaInterp(app=_broken_app, abs=_abs)
    return TargetRepresentation(reference_monad(), interp, "lambda-broken")


@dataclasses.dataclass(frozen=True)
class SliceReport:
    """eval on one enumeration slice of the lambda syntax, against the reference enumerator."""

    n: int
    depth: int
    syntax_count: int
    reference_count: int
    images: int
    onto: bool

    @property
    def bijective(self) -> bool:
        return self.syntax_count == self.reference_count == self.images and self.onto


def check_eval_slice(n: int, depth: int, cap: int = DEFAULT_CAP) -> SliceReport:
    """Evaluate every lambda term of the slice into the reference terms.

    Counts come from both brute-force enumerators; images are compared as
    a set with the reference slice. Raises EnumerationLimit past cap.
    """
    sig = lambda_signature()
    rep = reference_lambda_rep()
    terms = enumerate_terms(sig, n, depth, cap)
    reference = rl.enumerate_lambda(n, depth)
    images = set(eval_many(terms, sig, rep, n))
    return SliceReport(n, depth, len(terms), len(reference), len(images), images == set(reference))


def slice_counts(n: int, depth: int) -> tuple[int, int]:
    """(syntax count, reference count) without materializing either slice."""
    return count_terms(lambda_signature(), n, depth), rl.count_lambda(n, depth)


REPRESENTATIONS = ("lambda-ref", "lambda-join-ref", "self")


def representation(name: str, sig: Signature) -> TargetRepresentation:
    if name == "self":
        return self_representation(sig)
    if name == "lambda-ref":
        return reference_lambda_rep(join=False)
    if name == "lambda-join-ref":
        return reference_lambda_rep(join=True)
    raise KeyError(name)


SHIPPED = ("lambda", "lambda-join", "lambda-xsubst-3", "empty")


def shipped_signature_text(name: str) -> str:
    return resources.files(__package__).joinpath("sigs", f"{name}.sig").read_text(encoding="utf-8")


def load_shipped(name: str) -> Signature:
    return parse_signature(shipped_signature_text(name))
