import pytest

from inlr_kit import gen
from inlr_kit.rng import derive_rng
from inlr_kit.syntax import parse_prop, parse_term, print_term
from inlr_kit.typecheck import (TypingError, infer, infer_cc, infer_iplus,
                                infer_linear)


def P(s, c="iplus"):
    return parse_prop(s, c)


def T(s, c="iplus"):
    return parse_term(s, c)


# ---------------------------------------------------------------------------
# intuitionistic checker

def test_inlr_types_as_disjunction():
    assert infer_iplus({}, T("inlr(star, star)")) == P("Top \\/ Top")


def test_case_swap_derivation():
    t = T("lam x:A\\/B. case(x, y. inr(y), z. inl(z))")
    assert infer_iplus({}, t) == P("(A \\/ B) => (B \\/ A)")


def test_sum_premises_must_match():
    with pytest.raises(TypingError) as exc:
        infer_iplus({}, T("sum(star, lam x:Top. x)"))
    assert exc.value.kind == "mismatch"


def test_weakening_holds_for_iplus():
    t = T("inlr(star, star)")
    assert infer_iplus({"extra": P("Q")}, t) == infer_iplus({}, t)


def test_not_a_function():
    with pytest.raises(TypingError) as exc:
        infer_iplus({}, T("star star"))
    assert exc.value.kind == "not-a-function"


def test_unbound_variable():
    with pytest.raises(TypingError) as exc:
        infer_iplus({}, T("nope"))
    assert exc.value.kind == "unbound-var"


def test_annotation_required_for_bare_inl():
    with pytest.raises(TypingError) as exc:
        infer_iplus({}, T("inl(star)"))
    assert exc.value.kind == "annotation-required"
    assert infer_iplus({}, T("inl(star)"),
                       expected=P("Top \\/ Bot")) == P("Top \\/ Bot")


# ---------------------------------------------------------------------------
# linear checker

def test_linear_identity():
    assert infer_linear({}, T("lam x:One. x", "quantum")) \
        == P("One -o One", "quantum")


def test_scalar_axiom():
    assert infer_linear({}, T("2.0 . star", "quantum")) == P("One", "quantum")


def test_linear_unused():
    with pytest.raises(TypingError) as exc:
        infer_linear({}, T("lam x:One. 1.0 . star", "quantum"))
    assert exc.value.kind == "linear-unused"
    assert exc.value.names == ("x",)


def test_linear_reused():
    with pytest.raises(TypingError) as exc:
        infer_linear({}, T("lam x:One. one_elim(x, x)", "quantum"))
    assert exc.value.kind == "linear-reused"


def test_weakening_fails_for_linear():
    t = T("2.0 . star", "quantum")
    infer_linear({}, t)
    with pytest.raises(TypingError):
        infer_linear({"leftover": P("One", "quantum")}, t)


def test_additive_sum_shares_context():
    ctx = {"x": P("One", "quantum")}
    assert infer_linear(ctx, T("sum(x, x)", "quantum")) == P("One", "quantum")
    with pytest.raises(TypingError):
        infer_linear(ctx, T("sum(x, 1.0 . star)", "quantum"))


def test_multiplicative_split_threads_consumption():
    ctx = {"x": P("One", "quantum"), "y": P("One", "quantum")}
    assert infer_linear(ctx, T("one_elim(x, y)", "quantum")) \
        == P("One", "quantum")
    with pytest.raises(TypingError):
        infer_linear(ctx, T("one_elim(x, x)", "quantum"))


def test_case_branches_share_remainder():
    ctx = {"s": P("One (+) One", "quantum"), "k": P("One", "quantum")}
    t = T("case(s, a. one_elim(a, k), b. one_elim(b, k))", "quantum")
    assert infer_linear(ctx, t) == P("One", "quantum")


# ---------------------------------------------------------------------------
# cc checker

def test_binder_inlr_rule():
    ctx = {"t": P("A \\/ B")}
    t = parse_term("inlr(t, x. x, y. y)", "cc")
    assert infer_cc(ctx, t) == P("A \\/ B")


def test_cc_rejects_sum():
    with pytest.raises(TypingError) as exc:
        infer_cc({}, parse_term("sum(star, star)", "iplus"))
    assert exc.value.kind == "constructor-outside-calculus"


def test_cc_projection_under_lambda():
    ctx = {"w": P("A /\\ B")}
    t = parse_term("and1(w, x. lam y:C. x)", "cc")
    assert infer_cc(ctx, t) == P("C => A")


# ---------------------------------------------------------------------------
# substitution preserves typing

@pytest.mark.parametrize("calculus", ["iplus", "cc"])
def test_substitution_preserves_typing(calculus):
    # a proof of B under x:A composed with a proof of A stays a proof of B
    from inlr_kit.syntax import subst

    for i in range(150):
        rng = derive_rng(66, hash(calculus) % 83, i)
        a = gen.random_provable_prop(rng)
        b = gen.random_provable_prop(rng, (a,))
        t = gen._gen_i(b, {"x": a}, rng, gen._Budget(10), calculus)
        u = gen._gen_i(a, {}, rng, gen._Budget(10), calculus)
        assert infer(calculus, {"x": a}, t, expected=b) == b
        assert infer(calculus, {}, subst(u, "x", t), expected=b) == b


def test_substitution_preserves_typing_linear():
    from inlr_kit.syntax import fresh_name, subst

    for i in range(150):
        rng = derive_rng(67, i)
        a = gen.random_quantum_prop(rng, 1)
        b = gen.random_quantum_prop(rng, 1)
        x = fresh_name("x")
        t = gen._gen_q(b, [(x, a)], rng, gen._Budget(10), allow_nd=False)
        u = gen._gen_q(a, [], rng, gen._Budget(10), allow_nd=False)
        assert infer_linear({x: a}, t, expected=b) == b
        assert infer_linear({}, subst(u, x, t), expected=b) == b


# ---------------------------------------------------------------------------
# shared behaviour

@pytest.mark.parametrize("calculus", ["iplus", "quantum", "cc"])
def test_determinism_on_alpha_variants(calculus):
    for i in range(100):
        rng = derive_rng(55, hash(calculus) % 89, i)
        ctx, t, goal = gen.random_term_in_context(
            calculus, rng, allow_nd=(calculus == "quantum"))
        variant = parse_term(print_term(t), calculus)
        assert infer(calculus, ctx, t, expected=goal) \
            == infer(calculus, ctx, variant, expected=goal)


def test_error_rendering_and_json():
    try:
        infer_iplus({}, T("top_elim(missing, star)"))
    except TypingError as e:
        assert e.render().startswith("0:")
        data = e.to_json()
        assert data["kind"] == "unbound-var"
        assert data["path"] == [0]
    else:
        pytest.fail("expected a typing error")


def test_mismatch_reports_expected_and_found():
    try:
        infer_iplus({"f": P("Top => Top")}, T("f (lam x:Top. x)"))
    except TypingError as e:
        data = e.to_json()
        assert data["expected"] == "Top"
        assert data["found"] == "Top => Top"
    else:
        pytest.fail("expected a typing error")
