import pytest

from modsyntax.arity import THETA, Comp, Deriv, Prod, Signature
from modsyntax.engine import bind
from modsyntax.examples import (
    explicit_subst_signature,
    full_signature,
    join_signature,
    lambda_signature,
    reference_lambda_rep,
    sigma_arity,
)
from modsyntax.examples import reference_lambda as rl
from modsyntax.initiality import TargetRepresentation
from modsyntax.laws import (
    LAW_IDS,
    Bounds,
    broken_bind,
    check_linearity,
    check_monad_laws,
    check_strength_composition,
    check_strength_unit,
    check_subst_family,
    monad_sample,
    reindexings,
    run_all,
    sigma_bound,
    signature_shapes,
)
from modsyntax.terms import AScope, ATuple, Op

SMALL = Bounds(samples=150, exhaustive_ctx=1, exhaustive_depth=2)


@pytest.mark.parametrize("sig", [lambda_signature(), join_signature(), full_signature(), Signature("empty")])
def test_monad_laws_pass(sig):
    reports = check_monad_laws(sig, SMALL, seed=1)
    assert [r.law for r in reports] == list(LAW_IDS[:3])
    assert all(r.passed and r.samples > 0 for r in reports[1:])


def test_broken_bind_fails_with_a_binder_in_the_counterexample():
    sig = lambda_signature()
    reports = check_monad_laws(sig, Bounds(samples=300), seed=0, bind_fn=broken_bind, exhaustive=False)
    failing = [r for r in reports if not r.passed]
    assert failing
    c = failing[0].first()

    def has_scope(v):
        return isinstance(v, AScope) or (isinstance(v, ATuple) and any(map(has_scope, v.items)))

    def has_binder(t):
        return isinstance(t, Op) and (has_scope(t.args) or any(has_binder(x.t) for x in getattr(t.args, "items", ())))

    assert has_binder(c.term)
    # the seed replays the exact sample
    t, f, g = monad_sample(sig, c.seed, Bounds(samples=300))
    assert t == c.term
    assert bind(bind(t, f), g) != broken_bind(broken_bind(t, f), g) or bind(t, f) != broken_bind(t, f)


def test_signature_shapes():
    shapes = signature_shapes(full_signature())
    for a in [THETA, Prod((THETA, THETA)), Deriv(THETA), Deriv(Deriv(THETA)), Comp(THETA, THETA), sigma_arity(3)]:
        assert a in shapes


@pytest.mark.parametrize("shape", [THETA, Prod((THETA, THETA)), Deriv(THETA), Deriv(Deriv(THETA)), Comp(THETA, THETA)])
def test_strength_per_shape(shape):
    sig = full_signature()
    assert check_strength_unit(sig, SMALL, 2, shapes=[shape]).passed
    assert check_strength_composition(sig, SMALL, 2, shapes=[shape]).passed


def test_strength_on_all_shapes_of_join():
    sig = join_signature()
    unit = check_strength_unit(sig, SMALL, 5)
    comp = check_strength_composition(sig, SMALL, 5)
    assert unit.passed and comp.passed and comp.samples > SMALL.samples


@pytest.mark.parametrize("which", ["mu", "eta_outer"])
def test_linear_morphisms(which):
    report = check_linearity(full_signature(), which, SMALL, 4)
    assert report.passed and report.samples >= SMALL.samples


def test_eta_inner_is_reported_non_linear():
    report = check_linearity(lambda_signature(), "eta_inner", SMALL, 4)
    assert not report.passed
    assert report.law == "linear.eta-inner"


def test_unknown_morphism():
    with pytest.raises(ValueError):
        check_linearity(lambda_signature(), "delta")


def test_reindexings_count():
    # sum over m, n <= 3 of n**m
    assert sum(1 for _ in reindexings(3)) == sum(n**m for m in range(4) for n in range(4))


def test_sigma_naturality():
    sig = explicit_subst_signature(3)
    report = check_subst_family(sig, 3, reference_lambda_rep(), Bounds(), 0, samples_per_square=20)
    assert report.samples == 20 * sum(1 for _ in reindexings(3)) and report.passed


def test_sigma_naturality_detects_a_wrong_slot_convention():
    rep = reference_lambda_rep()
    interp = dict(rep.interp)

    def reversed_slots(n):
        # lawful substitution, but formal argument j receives argument n-1-j
        def interp_n(x, ctx):
            body, args = x[0], x[1:]
            return rl.subst(body, ctx + n, [*map(rl.LVar, range(ctx)), *reversed(args)], ctx)

        return interp_n

    for n in range(4):
        interp[f"sigma{n}"] = reversed_slots(n)
    wrong = TargetRepresentation(rep.monad, interp, "wrong")
    report = check_subst_family(explicit_subst_signature(3), 3, wrong, Bounds(), 0, samples_per_square=20)
    assert not report.passed


def test_sigma_bound():
    assert sigma_bound(explicit_subst_signature(3)) == 3
    assert sigma_bound(lambda_signature()) == -1


def test_run_all_reports_every_law_in_order():
    reports = run_all(lambda_signature(), Bounds(samples=20, exhaustive_ctx=0, exhaustive_depth=1), seed=0)
    assert [r.law for r in reports] == list(LAW_IDS)
    assert reports[-1].samples == 0


def test_checks_are_deterministic():
    sig = join_signature()
    a = check_strength_composition(sig, SMALL, 9)
    b = check_strength_composition(sig, SMALL, 9)
    assert a.line() == b.line()
    x = check_linearity(sig, "eta_inner", SMALL, 9)
    y = check_linearity(sig, "eta_inner", SMALL, 9)
    assert [c.seed for c in x.failures] == [c.seed for c in y.failures]
