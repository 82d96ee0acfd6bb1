import pytest

from inlr_kit import gen
from inlr_kit.cc import (RULES_CC, RULES_CC_DET, demo_optimization, explore,
                         normalize_cc, pi_term)
from inlr_kit.rewrite import RuleId, find_redexes, step_at
from inlr_kit.rng import derive_rng
from inlr_kit.selftest import cc_pi_terms, cc_rule_soundness
from inlr_kit.syntax import (Star, Var, alpha_eq, parse_prop, parse_term,
                             print_term)
from inlr_kit.typecheck import TypingError, infer_cc


def cc(s):
    return parse_term(s, "cc")


def P(s):
    return parse_prop(s, "cc")


def test_table_is_complete():
    assert [r.rid.number for r in RULES_CC.rules] == list(range(1, 43))
    assert len(RULES_CC_DET.rules) == 40


# ---------------------------------------------------------------------------
# individual rules

def test_projection_commutes_past_lambda():
    out = step_at(cc("and1(t, x. lam y:C. u)"), (), RuleId("cc", 20))
    assert alpha_eq(out, cc("lam y:C. and1(t, x. u)"))


def test_bot_elim_to_top():
    assert step_at(cc("bot_elim[Top](t)"), (), RuleId("cc", 8)) == Star()


def test_bot_elim_nd_alternatives():
    t = cc("bot_elim[A \\/ B](b)")
    rules = [rid.number for pos, rid in find_redexes(t, RULES_CC)
             if pos == ()]
    assert rules == [11, 12]
    assert alpha_eq(step_at(t, (), RuleId("cc", 11)),
                    cc("inl(bot_elim[A](b))"))
    assert alpha_eq(step_at(t, (), RuleId("cc", 12)),
                    cc("inr(bot_elim[B](b))"))


def test_binder_inlr_cut():
    t = cc("case(inlr(t, x1. u1 x1, x2. u2 x2), y1. v1 y1, y2. v2 y2)")
    out = step_at(t, (), RuleId("cc", 7))
    assert alpha_eq(out, cc("case(t, x1. v1 (u1 x1), x2. v2 (u2 x2))"))


def test_and_inlr_needs_escape_condition():
    # the inner scrutinee mentions the projection binder: no rule applies
    blocked = cc("and1(w, x. inlr(x, y. y, z. z))")
    assert all(rid.number != 24 for _pos, rid in
               find_redexes(blocked, RULES_CC))
    # once the scrutinee is independent of x the commutation fires
    free = cc("and1(w, x. inlr(s, y. x, z. x))")
    assert any(rid.number == 24 and pos == () for pos, rid in
               find_redexes(free, RULES_CC))
    out = step_at(free, (), RuleId("cc", 24))
    assert alpha_eq(out, cc("inlr(s, y. and1(w, x. x), z. and1(w, x. x))"))


def test_case_lam_merges_binders():
    t = cc("case(s, x1. lam y:C. x1, x2. lam y:C. x2)")
    out = step_at(t, (), RuleId("cc", 32))
    assert alpha_eq(out, cc("lam y:C. case(s, x1. x1, x2. x2)"))


def test_case_inl_inr_uses_outer_scrutinee():
    t = cc("case(s, x1. inl(x1), x2. inr(x2))")
    out = step_at(t, (), RuleId("cc", 35))
    assert alpha_eq(out, cc("inlr(s, x1. x1, x2. x2)"))


def test_case_inr_inl_builds_pi():
    t = cc("case(s, x1. inr(x1), x2. inl(x2))")
    out = step_at(t, (), RuleId("cc", 37))
    want = cc("inlr(case(s, x1. inr(x1), x2. inl(x2)), x2. x2, x1. x1)")
    assert alpha_eq(out, want)


# ---------------------------------------------------------------------------
# pi witnesses

def test_pi_inr_inl_shape():
    pi = pi_term(37, Var("t"))
    assert alpha_eq(pi, cc("case(t, x1. inr(x1), x2. inl(x2))"))


def test_pi_terms_typecheck_at_stated_propositions():
    result = cc_pi_terms(seed=0)
    assert result.ok, result.detail


def test_pi_inlr_inlr_proposition():
    ctx = {"t": P("A1 \\/ A2"), "t1": P("B1 \\/ B2"), "t2": P("B3 \\/ B4")}
    got = infer_cc(ctx, pi_term(42, Var("t"), Var("t1"), Var("t2")))
    assert got == P("((A1 /\\ B1) \\/ (A2 /\\ B3)) "
                    "\\/ ((A1 /\\ B2) \\/ (A2 /\\ B4))")


def test_pi_term_wrong_rule_id():
    with pytest.raises(ValueError):
        pi_term(35, Var("t"))
    with pytest.raises(ValueError):
        pi_term(42, Var("t"))  # missing inner scrutinees


# ---------------------------------------------------------------------------
# per-rule type preservation

def test_rule_soundness_sample():
    result = cc_rule_soundness(84, seed=19)
    assert result.ok, result.detail


def test_rhs_of_every_rule_typechecks():
    for number in range(1, 43):
        rng = derive_rng(321, number)
        ctx, t, expected = gen.cc_rule_instance(number, rng)
        u = step_at(t, (), RuleId("cc", number))
        try:
            infer_cc(ctx, u, expected=expected)
        except TypingError as e:
            pytest.fail(f"rule {number}: {print_term(u)}: {e}")


# ---------------------------------------------------------------------------
# normalization and exploration

def test_normal_forms_are_redex_free():
    reached = 0
    for i in range(120):
        rng = derive_rng(77, i)
        _ctx, t, _goal = gen.random_term_in_context("cc", rng)
        trace = normalize_cc(t)
        if trace.outcome.kind == "normal-form":
            reached += 1
            assert find_redexes(trace.final, RULES_CC) == []
    assert reached > 100  # fuel exhaustion should be rare on small terms


def test_first_policy_takes_inl_for_bot_choice():
    trace = normalize_cc(cc("bot_elim[A \\/ B](b)"))
    assert alpha_eq(trace.final, cc("inl(bot_elim[A](b))"))


def test_enumerate_policy_reaches_both_bot_choices():
    graph = normalize_cc(cc("bot_elim[A \\/ B](b)"), policy="enumerate")
    nfs = {print_term(graph.terms[i]) for i in graph.normal_forms}
    assert nfs == {"inl(bot_elim[A](b))", "inr(bot_elim[B](b))"}


def test_enumerate_emits_dot():
    graph = explore(cc("case(s, x1. inl(x1), x2. inr(x2))"))
    dot = graph.to_dot()
    assert dot.startswith("digraph") and "cc:35" in dot


def test_deterministic_fragment_graphs_single_normal_form():
    multi = 0
    for i in range(100):
        rng = derive_rng(31, i)
        _ctx, t, _goal = gen.random_term_in_context("cc", rng, max_size=25)
        graph = explore(t, node_budget=300, ruleset=RULES_CC_DET)
        if graph.budget_hit:
            continue
        nfs = {graph.terms[j] for j in graph.normal_forms}
        if len(nfs) > 1:
            multi += 1
    # divergence counterexamples are logged, not asserted absent
    assert multi <= 2, f"{multi} graphs with several normal forms"


# ---------------------------------------------------------------------------
# the optimization demonstration

def test_demo_routes_agree():
    demo = demo_optimization()
    assert demo.agree
    want = cc("and1(x, y. pair(u, y))")
    assert alpha_eq(demo.applied.final, want)
    assert alpha_eq(demo.unapplied.final, want)


def test_demo_unapplied_body_commutes_alone():
    demo = demo_optimization()
    commuted = parse_term(dict(demo.unapplied.stages)["commute"], "cc")
    assert alpha_eq(commuted, cc("lam z:C. and1(x, y. pair(z, y))"))


def test_demo_terms_typecheck():
    # the projection binds the first conjunct, so the pair is C /\ A
    ctx = {"x": P("A /\\ B"), "u": P("C")}
    demo = demo_optimization()
    for _label, text in demo.applied.stages:
        infer_cc(ctx, parse_term(text, "cc"), expected=P("C /\\ A"))
