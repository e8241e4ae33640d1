import pytest

from modsyntax.arity import THETA, Comp, Deriv, Prod, derive_n, is_algebraic, merge_signatures, SignatureInclusion
from modsyntax.examples import (
    SHIPPED,
    check_eval_slice,
    explicit_subst_signature,
    full_signature,
    join_signature,
    lambda_signature,
    load_shipped,
    reference_lambda_rep,
    representation,
    sigma_order,
    slice_counts,
)
from modsyntax.examples import reference_lambda as rl


def test_lambda_signature():
    sig = lambda_signature()
    assert sig.arity("app") == Prod((THETA, THETA))
    assert sig.arity("abs") == Deriv(THETA)
    assert is_algebraic(sig.arity("app"))
    assert len(sig) == 2


def test_join_signature():
    sig = join_signature()
    assert sig.arity("join") == Comp(THETA, THETA)
    assert not is_algebraic(sig.arity("join"))
    lam = lambda_signature()
    merged, _, _ = merge_signatures(lam, sig, SignatureInclusion.identity(lam), SignatureInclusion.by_name(lam, sig))
    assert merged == sig


def test_sigma_arities():
    sig = explicit_subst_signature(3)
    assert sig.arity("sigma0") == Prod((THETA,))
    assert sig.arity("sigma1") == Prod((Deriv(THETA), THETA))
    assert sig.arity("sigma2") == Prod((Deriv(Deriv(THETA)), THETA, THETA))
    assert sig.arity("sigma3") == Prod((derive_n(THETA, 3), THETA, THETA, THETA))
    assert "sigma4" not in sig
    assert sigma_order("sigma12") == 12 and sigma_order("sig") is None


def test_full_signature_contains_everything():
    sig = full_signature()
    assert set(sig) == {"app", "abs", "join", "sigma0", "sigma1", "sigma2", "sigma3"}


@pytest.mark.parametrize(
    "name, build",
    [
        ("lambda", lambda_signature),
        ("lambda-join", join_signature),
        ("lambda-xsubst-3", lambda: explicit_subst_signature(3)),
    ],
)
def test_shipped_files_match_builders(name, build):
    assert name in SHIPPED
    assert load_shipped(name) == build()


def test_reference_enumerator_and_recurrence_agree():
    for n in range(3):
        for d in range(4):
            assert len(rl.enumerate_lambda(n, d)) == rl.count_lambda(n, d)
            assert all(rl.scoped(t, n) for t in rl.enumerate_lambda(n, d))


def test_reference_substitution_moves_inner_binders():
    # substituting the identity for x0 under a binder: its own binder moves up one level
    t = rl.LLam(rl.LVar(0))
    u = rl.LLam(rl.LVar(1))
    assert rl.subst(t, 1, [u], 1) == rl.LLam(rl.LLam(rl.LVar(2)))


@pytest.mark.parametrize("n, d", [(0, 0), (0, 1), (0, 2), (0, 3), (1, 2), (2, 2), (2, 3), (0, 4)])
def test_eval_is_a_bijection_on_slices(n, d):
    report = check_eval_slice(n, d)
    assert report.bijective


def test_slice_counts_without_enumeration():
    assert slice_counts(2, 4) == (rl.count_lambda(2, 4), rl.count_lambda(2, 4))


def test_representation_registry():
    sig = join_signature()
    assert representation("lambda-join-ref", sig).missing(sig) == []
    assert representation("lambda-ref", sig).missing(sig) == ["join"]
    assert representation("self", sig).missing(sig) == []
    assert reference_lambda_rep().missing(explicit_subst_signature(3)) == []
    with pytest.raises(KeyError):
        representation("nope", sig)
