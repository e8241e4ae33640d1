import pytest
from hypothesis import given
from hypothesis import strategies as st

from modsyntax.arity import (
    TERMINAL,
    THETA,
    ArityParseError,
    Comp,
    Deriv,
    MergeError,
    Prod,
    Signature,
    SignatureFileError,
    SignatureInclusion,
    Sum,
    algebraic,
    canon,
    derive_n,
    is_algebraic,
    merge_signatures,
    parse_arity,
    parse_signature,
    print_arity,
    print_signature,
    validate_signature,
)
from modsyntax.examples import join_signature, lambda_signature


def arities(max_leaves=8):
    leaves = st.sampled_from([THETA, TERMINAL])

    def extend(children):
        tags = st.lists(st.sampled_from("abcxyz"), min_size=1, max_size=3, unique=True)
        return st.one_of(
            st.lists(children, min_size=1, max_size=3).map(lambda fs: Prod(tuple(fs))),
            children.map(Deriv),
            st.tuples(children, children).map(lambda p: Comp(*p)),
            tags.flatmap(
                lambda ts: st.lists(children, min_size=len(ts), max_size=len(ts)).map(
                    lambda vs: Sum(tuple(zip(ts, vs)))
                )
            ),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


# -- parsing ---------------------------------------------------------------


@pytest.mark.parametrize(
    "text, expected",
    [
        ("T * T", Prod((THETA, THETA))),
        ("T^(1)", Prod((Deriv(THETA),))),
        ("T . T", Comp(THETA, THETA)),
        ("T'", Deriv(THETA)),
        ("1", TERMINAL),
        ("T^()", TERMINAL),
        ("T^(0,2)", Prod((THETA, Deriv(Deriv(THETA))))),
        ("T * T * T", Prod((THETA, THETA, THETA))),
        ("(T * T) * T", Prod((Prod((THETA, THETA)), THETA))),
        ("T . T . T", Comp(THETA, Comp(THETA, THETA))),
        ("T . T * T", Prod((Comp(THETA, THETA), THETA))),
        ("(T . T)'", Deriv(Comp(THETA, THETA))),
        ("T + 1", Sum((("0", THETA), ("1", TERMINAL)))),
        ("var:T + lam:T'", Sum((("var", THETA), ("lam", Deriv(THETA))))),
        ("prod(T')", Prod((Deriv(THETA),))),
    ],
)
def test_parse_arity(text, expected):
    assert parse_arity(text) == expected


@pytest.mark.parametrize("text, pos", [("T *", 3), ("T T", 2), ("(T", 2), ("T^(x)", 3), ("", 0), ("a:T + a:1", None)])
def test_parse_errors_carry_a_position(text, pos):
    with pytest.raises(ArityParseError) as info:
        parse_arity(text)
    if pos is not None:
        assert info.value.pos == pos


@given(arities())
def test_print_parse_round_trip(a):
    a = canon(a)
    assert parse_arity(print_arity(a)) == a


@given(arities())
def test_canon_is_idempotent(a):
    assert canon(canon(a)) == canon(a)


def test_empty_product_is_terminal():
    assert canon(Prod(())) == TERMINAL
    assert canon(Deriv(Prod(()))) == Deriv(TERMINAL)


# -- algebraic arities -------------------------------------------------------------


def test_algebraic():
    assert algebraic([0, 0]) == Prod((THETA, THETA))
    assert algebraic([1]) == Prod((Deriv(THETA),))
    assert algebraic([]) == TERMINAL


def test_derive_n():
    assert derive_n(THETA, 2) == Deriv(Deriv(THETA))
    assert derive_n(THETA, 0) == THETA
    assert derive_n(TERMINAL, 1) == Deriv(TERMINAL)


def test_is_algebraic():
    assert is_algebraic(Prod((THETA, Deriv(THETA))))
    assert not is_algebraic(Comp(THETA, THETA))
    assert is_algebraic(TERMINAL)
    assert not is_algebraic(Deriv(TERMINAL))


@given(st.lists(st.integers(0, 5), max_size=5))
def test_algebraic_is_algebraic(s):
    assert is_algebraic(algebraic(s))
    assert parse_arity(print_arity(algebraic(s))) == algebraic(s)


# -- signatures -------------------------------------------------------------------------


def test_signature_equality_ignores_order_and_name():
    a = Signature("a", [("f", THETA), ("g", TERMINAL)])
    b = Signature("b", [("g", TERMINAL), ("f", THETA)])
    assert a == b and hash(a) == hash(b)
    assert a != Signature("a", [("f", THETA)])


def test_validate_signature():
    assert validate_signature(lambda_signature()) == []
    assert validate_signature(Signature("empty")) == []
    dup = parse_signature("signature d\nf : T\nf : T\n")
    assert validate_signature(dup) == ["duplicate operation 'f'"]


def test_signature_file_round_trip():
    sig = join_signature()
    text = print_signature(sig)
    again = parse_signature(text)
    assert again == sig and again.name == sig.name and again.ops == sig.ops


def test_signature_file_comments_and_blanks():
    sig = parse_signature("# lambda\n\nsignature l   # header\napp : T * T\n\nabs : T'  # binder\n")
    assert sig == lambda_signature()


@pytest.mark.parametrize(
    "text",
    ["app : T * T\n", "signature\n", "signature l\napp T\n", "signature l\napp : T *\n", "signature l\n2x : T\n"],
)
def test_signature_file_errors(text):
    with pytest.raises(SignatureFileError):
        parse_signature(text)


# -- merging ----------------------------------------------------------------------


def test_merge_lambda_with_join_over_lambda():
    core = lambda_signature()
    merged, i1, i2 = merge_signatures(
        core, join_signature(), SignatureInclusion.identity(core), SignatureInclusion.by_name(core, join_signature())
    )
    assert merged == join_signature()
    assert dict(i1.mapping) == {"app": "app", "abs": "abs"}
    assert dict(i2.mapping) == {"app": "app", "abs": "abs", "join": "join"}
    assert i1.problems() == [] and i2.problems() == []


def test_merge_over_empty_is_disjoint_union():
    empty = Signature("e")
    s1, s2 = Signature("s1", [("c", TERMINAL)]), Signature("s2", [("d", TERMINAL)])
    merged, _, _ = merge_signatures(s1, s2, SignatureInclusion.by_name(empty, s1), SignatureInclusion.by_name(empty, s2))
    assert merged == Signature("x", [("c", TERMINAL), ("d", TERMINAL)])


def test_merge_is_idempotent_along_identity():
    s = lambda_signature()
    ident = SignatureInclusion.identity(s)
    merged, _, _ = merge_signatures(s, s, ident, ident)
    assert merged == s


def test_merge_qualifies_colliding_names():
    empty = Signature("e")
    s1, s2 = Signature("s1", [("f", THETA)]), Signature("s2", [("f", TERMINAL)])
    merged, i1, i2 = merge_signatures(s1, s2, SignatureInclusion.by_name(empty, s1), SignatureInclusion.by_name(empty, s2))
    assert merged.arity("f") == THETA and merged.arity("s2.f") == TERMINAL
    assert i2("f") == "s2.f"
    assert len(merged) == len(s1) + len(s2) - len(empty)


def test_merge_rejects_arity_mismatch_on_shared_op():
    core = Signature("c", [("f", THETA)])
    other = Signature("o", [("f", TERMINAL)])
    bad = SignatureInclusion(core, other, {"f": "f"})
    with pytest.raises(MergeError):
        merge_signatures(core, other, SignatureInclusion.identity(core), bad)


@given(st.sets(st.sampled_from("abcdef")), st.sets(st.sampled_from("abcdef")), st.sets(st.sampled_from("abcdef")))
def test_merge_cardinality(shared, extra1, extra2):
    core = Signature("c", [(o, THETA) for o in sorted(shared)])
    s1 = Signature("s1", [(o, THETA) for o in sorted(shared | extra1)])
    s2 = Signature("s2", [(o, THETA) for o in sorted(shared | extra2)])
    merged, i1, i2 = merge_signatures(s1, s2, SignatureInclusion.by_name(core, s1), SignatureInclusion.by_name(core, s2))
    assert len(merged) == len(s1) + len(s2) - len(core)
    assert i1.problems() == [] and i2.problems() == []
    for o in core:
        assert i1(o) == i2(o)
