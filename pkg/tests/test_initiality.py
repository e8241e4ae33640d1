from modsyntax.arity import Signature, SignatureInclusion
from modsyntax.engine import flatten
from modsyntax.examples import (
    broken_lambda_rep,
    full_signature,
    join_signature,
    lambda_join_square,
    lambda_signature,
    reference_lambda_rep,
)
from modsyntax.examples import reference_lambda as rl
from modsyntax.generate import enumerate_terms
from modsyntax.initiality import (
    PushoutSquare,
    TargetRepresentation,
    check_monad_morphism,
    check_pushout,
    enumerate_sides,
    eval_args_first,
    eval_many,
    eval_term,
    random_substitution,
    restrict,
    sample_sides,
    self_representation,
    term_monad,
    translate,
    translate_by_eval,
)
from modsyntax.terms import AOuter, AScope, ATerm, Op, bnd, var

LAM = lambda_signature()
JOIN = join_signature()


def test_eval_of_identity_function():
    t = Op("abs", AScope(ATerm(bnd(0))))
    assert eval_term(t, LAM, reference_lambda_rep(), 0) == rl.LLam(rl.LVar(0))


def test_eval_of_variable_is_unit():
    assert eval_term(var(1), LAM, reference_lambda_rep(), 3) == rl.LVar(1)


def test_binders_become_appended_variables():
    # lam. lam. x0 #1 #0 over one variable
    from modsyntax.sexpr import parse_term

    t = parse_term("(op abs (scope (op abs (scope (op app (tuple (op app (tuple (var 0) (bnd 1))) (bnd 0)))))))")
    expected = rl.LLam(rl.LLam(rl.LApp(rl.LApp(rl.LVar(0), rl.LVar(1)), rl.LVar(2))))
    assert eval_term(t, LAM, reference_lambda_rep(), 1) == expected


def test_self_representation_is_identity():
    sig = full_signature()
    rep = self_representation(sig)
    for n, d in [(0, 2), (1, 1), (2, 1), (3, 1)]:
        for t in enumerate_terms(sig, n, d):
            assert eval_term(t, sig, rep, n) == t


def test_self_representation_on_join_terms():
    rep = self_representation(JOIN)
    for n in range(3):
        for t in enumerate_terms(JOIN, n, 3):
            assert eval_term(t, JOIN, rep, n) == t


def test_two_evaluators_agree():
    rep = reference_lambda_rep(join=True)
    for n in range(3):
        for t in enumerate_terms(JOIN, n, 3):
            assert eval_term(t, JOIN, rep, n) == eval_args_first(t, JOIN, rep, n)


def test_eval_many_agrees_with_eval_term():
    rep = reference_lambda_rep()
    terms = enumerate_terms(LAM, 1, 3)
    assert eval_many(terms, LAM, rep, 1) == [eval_term(t, LAM, rep, 1) for t in terms]


def test_join_evaluates_as_flattening():
    rep = reference_lambda_rep(join=True)
    for n in range(3):
        for t in enumerate_terms(JOIN, n, 3):
            if isinstance(t, Op) and isinstance(t.args, AOuter):
                flat = flatten(t.args.value.t)
                assert eval_term(t, JOIN, rep, n) == eval_term(flat, JOIN, rep, n)


def test_monad_morphism_into_reference():
    report = check_monad_morphism(LAM, reference_lambda_rep(), samples=300, seed=3)
    assert report.samples == 300 and report.passed
    report = check_monad_morphism(JOIN, reference_lambda_rep(join=True), samples=300, seed=3)
    assert report.passed


def test_monad_morphism_for_empty_signature():
    report = check_monad_morphism(Signature("empty"), reference_lambda_rep(), samples=50)
    assert report.passed


def test_broken_interpretation_is_caught():
    report = check_monad_morphism(LAM, broken_lambda_rep(), samples=300, seed=0)
    assert not report.passed
    c = report.first()
    # the stored seed regenerates the failing sample
    again = check_monad_morphism(LAM, broken_lambda_rep(), samples=300, seed=0).first()
    assert (c.term, c.seed) == (again.term, again.seed)


def test_reference_monad_laws_exhaustively():
    import random

    from modsyntax.generate import Generator

    monad = reference_lambda_rep().monad
    for n in range(3):
        for k, t in enumerate(rl.enumerate_lambda(n, 3)):
            rng = random.Random(k)
            gen = Generator(LAM, rng)
            f = random_substitution(gen, rng, n, 3, 2)
            g = random_substitution(gen, rng, f.dst, 3, 2)
            fv = [eval_term(u, LAM, reference_lambda_rep(), f.dst) for u in f.terms]
            gv = [eval_term(u, LAM, reference_lambda_rep(), g.dst) for u in g.terms]
            assert monad.bind(t, n, [rl.LVar(i) for i in range(n)], n) == t
            for i in range(n):
                assert monad.bind(rl.LVar(i), n, fv, f.dst) == fv[i]
            fg = [monad.bind(u, f.dst, gv, g.dst) for u in fv]
            assert monad.bind(monad.bind(t, n, fv, f.dst), f.dst, gv, g.dst) == monad.bind(t, n, fg, g.dst)


# -- translation --------------------------------------------------------------------


def test_translate_identity_and_by_eval():
    inc = SignatureInclusion.by_name(LAM, JOIN)
    for n in range(3):
        for t in enumerate_terms(LAM, n, 3):
            assert translate(t, SignatureInclusion.identity(LAM)) == t
            assert translate(t, inc) == t
            assert translate_by_eval(t, inc, n) == translate(t, inc)


def test_translate_is_functorial():
    core = Signature("core", [("app", LAM.arity("app"))])
    a = SignatureInclusion.by_name(core, LAM)
    b = SignatureInclusion.by_name(LAM, full_signature())
    for n in range(3):
        for t in enumerate_terms(core, n, 3):
            assert translate(translate(t, a), b) == translate(t, a.then(b))
            assert translate_by_eval(t, a.then(b), n) == translate(t, a.then(b))


def test_translate_renames_qualified_ops():
    square = lambda_join_square()
    t = Op("abs", AScope(ATerm(bnd(0))))
    assert translate(t, square.right_merged) == t


# -- pushout --------------------------------------------------------------------------


def test_pushout_lambda_join():
    square = lambda_join_square()
    rep = reference_lambda_rep(join=True)
    report = check_pushout(square, rep, enumerate_sides(square, 2, 2))
    assert report.samples > 0 and report.passed
    assert check_pushout(square, rep, sample_sides(square, 200, 1)).passed


def test_degenerate_square():
    ident = SignatureInclusion.identity(LAM)
    square = PushoutSquare(LAM, LAM, LAM, LAM, ident, ident, ident, ident)
    assert check_pushout(square, reference_lambda_rep(), enumerate_sides(square, 1, 2)).passed


def test_locality_of_right_only_changes():
    square = lambda_join_square()
    rep = reference_lambda_rep(join=True)
    # join now ignores its payloads: a different model, but left-side checks cannot see it
    interp = dict(rep.interp)
    interp["join"] = lambda outer, ctx: rl.LVar(0) if ctx else rl.LLam(rl.LVar(0))
    altered = TargetRepresentation(rep.monad, interp, "altered")
    sides = enumerate_sides(square, 2, 2)
    assert check_pushout(square, altered, {"left": sides["left"], "core": sides["core"]}).passed
    assert check_pushout(square, altered, {"right": sides["right"]}).passed
    assert not check_monad_morphism(JOIN, altered, samples=300).passed


def test_restrict_reads_through_inclusion():
    square = lambda_join_square()
    rep = reference_lambda_rep(join=True)
    r = restrict(rep, square.left_merged)
    assert set(r.interp) == {"app", "abs"}
    assert term_monad().unit(2, 1) == var(1)
