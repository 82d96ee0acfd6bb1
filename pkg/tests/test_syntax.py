import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inlr_kit import gen
from inlr_kit.rng import derive_rng
from inlr_kit.syntax import (CalculusError, ParseError, Star, Var, alpha_eq,
                             free_names, pair_subst, parse_prop, parse_term,
                             print_prop, print_term, subst, term_size)


def ip(s):
    return parse_term(s, "iplus")


def q(s):
    return parse_term(s, "quantum")


def cc(s):
    return parse_term(s, "cc")


# ---------------------------------------------------------------------------
# parse_term / print_term

def test_parse_constructors():
    t = ip("inlr(star, star)")
    assert print_term(t) == "inlr(star, star)"
    t = ip("case(inl(star), x. x, y. y)")
    assert print_term(t) == "case(inl(star), x. x, y. y)"


def test_sum_not_in_cc():
    with pytest.raises(CalculusError):
        parse_term("sum(1.0 . star, 2.0 . star)", "cc")


def test_plain_inlr_not_in_cc():
    with pytest.raises(CalculusError):
        cc("inlr(star, star)")


def test_scalar_syntax():
    assert print_term(q("2.0 . star")) == "2.0 . star"
    assert print_term(q("(0.0, 1.0) . star")) == "(0.0, 1.0) . star"
    assert q("(0.0, 1.0) . star").value == 1j


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as exc:
        ip("case(inl(star),\n x. ,)")
    assert exc.value.line == 2


def test_comments_ignored():
    assert ip("star -- trailing words\n") == Star()


def test_bot_elim_annotation():
    t = cc("bot_elim[A => B](x)")
    assert print_term(t) == "bot_elim[A => B](x)"


def test_application_associativity():
    t = ip("f x y")
    assert print_term(t) == "f x y"
    u = ip("f (x y)")
    assert print_term(u) == "f (x y)"
    assert not alpha_eq(t, u)


@pytest.mark.parametrize("calculus", ["iplus", "quantum", "cc"])
def test_roundtrip_random_terms(calculus):
    # parse . print is the identity up to alpha on 1000 generated terms
    for i in range(1000):
        rng = derive_rng(101, hash(calculus) % 97, i)
        _ctx, t, _goal = gen.random_term_in_context(calculus, rng)
        assert alpha_eq(parse_term(print_term(t), calculus), t), print_term(t)


# ---------------------------------------------------------------------------
# alpha equivalence

def test_alpha_eq_examples():
    assert alpha_eq(ip("lam x:A. x"), ip("lam y:A. y"))
    assert not alpha_eq(ip("lam x:A. x"), ip("lam x:A. star"))
    assert alpha_eq(ip("case(z, x. x, y. y)"), ip("case(z, a. a, b. b)"))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_alpha_eq_is_equivalence(seed):
    rng = derive_rng(seed, 0)
    _ctx, t, _goal = gen.random_term_in_context("iplus", rng)
    u = parse_term(print_term(t), "iplus")  # alpha-variant via reprint
    assert alpha_eq(t, t)
    assert alpha_eq(t, u) == alpha_eq(u, t)
    assert alpha_eq(t, u)


# ---------------------------------------------------------------------------
# substitution

def test_subst_examples():
    assert subst(Star(), "x", Var("x")) == Star()
    out = subst(Var("y"), "x", ip("lam y:A. x"))
    assert alpha_eq(out, ip("lam z:A. y"))
    # the bound y was renamed, not captured
    assert "lam y" not in print_term(out) or print_term(out).endswith(". y")
    got = subst(Star(), "x", ip("sum(x, x)"))
    assert alpha_eq(got, ip("sum(star, star)"))


def test_subst_free_variable_bound():
    # FV((u/x)t) is contained in (FV(t) - x) plus FV(u)
    for i in range(300):
        rng = derive_rng(77, i)
        ctx, t, _goal = gen.random_term_in_context("iplus", rng)
        u = Var("fresh_u")
        got = free_names(subst(u, "h0", t))
        assert got <= (free_names(t) - {"h0"}) | {"fresh_u"}


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_subst_respects_alpha(seed):
    rng = derive_rng(seed, 1)
    _ctx, t, _goal = gen.random_term_in_context("iplus", rng)
    t2 = parse_term(print_term(t), "iplus")
    a = subst(Star(), "h0", t)
    b = subst(Star(), "h0", t2)
    assert alpha_eq(a, b)


# ---------------------------------------------------------------------------
# pair substitution

def test_pair_subst_examples():
    w = Var("w")
    got = pair_subst(w, "x", "y", cc("pair(x, y)"))
    assert alpha_eq(got, cc("pair(and1(w, z. z), and2(w, z. z))"))
    assert pair_subst(w, "x", "y", Star()) == Star()
    assert alpha_eq(pair_subst(w, "x", "y", Var("x")), cc("and1(w, z. z)"))


def test_pair_subst_is_simultaneous():
    # occurrences of x inside w itself must not be rewritten again
    t = cc("pair(x, y)")
    got = pair_subst(Var("x"), "x", "y", t)
    assert alpha_eq(got, cc("pair(and1(x, z. z), and2(x, z. z))"))


# ---------------------------------------------------------------------------
# propositions

@pytest.mark.parametrize("text,calculus", [
    ("Top", "iplus"), ("A => B => C", "iplus"), ("(A => B) => C", "iplus"),
    ("A /\\ B \\/ C", "iplus"), ("One (+) One (+) One", "quantum"),
    ("(One -o One) -o One", "quantum"), ("Bot \\/ (P => Q)", "cc"),
])
def test_prop_roundtrip(text, calculus):
    p = parse_prop(text, calculus)
    assert parse_prop(print_prop(p), calculus) == p


def test_prop_calculus_gate():
    with pytest.raises(CalculusError):
        parse_prop("A => B", "quantum")
    with pytest.raises(CalculusError):
        parse_prop("One (+) One", "iplus")


def test_term_size():
    assert term_size(ip("sum(star, star)")) == 3
