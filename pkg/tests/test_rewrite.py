import json

import pytest

from inlr_kit.iplus import RULES_IPLUS
from inlr_kit.quantum import RULES_QUANTUM, RULES_QUANTUM_DET
from inlr_kit.rewrite import (RuleId, ZeroNormStuck, find_redexes, join_peak,
                              normalize, replay, step_at, NoMatchError)
from inlr_kit.rng import derive_rng
from inlr_kit.syntax import Star, alpha_eq, parse_term


def ip(s):
    return parse_term(s, "iplus")


def q(s):
    return parse_term(s, "quantum")


# ---------------------------------------------------------------------------
# redex discovery

def test_find_redexes_examples():
    assert find_redexes(ip("top_elim(star, star)"), RULES_IPLUS) \
        == [((), RuleId("iplus", 1))]
    assert find_redexes(Star(), RULES_IPLUS) == []
    assert find_redexes(ip("sum(inl(star), inr(star))"), RULES_IPLUS) \
        == [((), RuleId("iplus", 12))]


def test_find_redexes_leftmost_outermost_order():
    t = ip("pair(top_elim(star, star), sum(star, star))")
    positions = [pos for pos, _ in find_redexes(t, RULES_IPLUS)]
    assert positions == [(0,), (1,)]
    # outer before inner
    t = ip("top_elim(star, top_elim(star, star))")
    positions = [pos for pos, _ in find_redexes(t, RULES_IPLUS)]
    assert positions == [(), (1,)]


def test_find_redexes_lists_nd_alternatives():
    t = q("case_nd(inlr(1.0 . star, 2.0 . star), x. x, y. y)")
    rules = [rid.number for pos, rid in find_redexes(t, RULES_QUANTUM)
             if pos == ()]
    assert rules == [26, 27]


# ---------------------------------------------------------------------------
# stepping

def test_step_case_inlr():
    t = ip("case(inlr(t, u), x. v x, y. w y)")
    out = step_at(t, (), RuleId("iplus", 7))
    assert alpha_eq(out, ip("sum(v t, w u)"))


def test_step_one_elim():
    out = step_at(q("one_elim(2.0 . star, t)"), (), RuleId("quantum", 19))
    assert alpha_eq(out, q("prod(2.0, t)"))


def test_step_no_match():
    with pytest.raises(NoMatchError):
        step_at(Star(), (), RuleId("iplus", 1))


def test_zero_norm_stuck():
    t = q("case_nd(inlr(0.0 . star, 0.0 . star), x. x, y. y)")
    with pytest.raises(ZeroNormStuck):
        step_at(t, (), RuleId("quantum", 26))


def test_forced_choice_beats_rng():
    t = q("case_nd(inlr(1.0 . star, 1.0 . star), x. x, y. y)")
    left = step_at(t, (), RuleId("quantum", 26), choice="left")
    right = step_at(t, (), RuleId("quantum", 26), choice="right")
    assert alpha_eq(left, q("1.0 . star"))
    assert alpha_eq(right, q("1.0 . star"))
    # same normal forms here, but the branches differ on asymmetric input
    t = q("case_nd(inlr(1.0 . star, 2.0 . star), x. x, y. y)")
    assert alpha_eq(step_at(t, (), RuleId("quantum", 26), choice="right"),
                    q("2.0 . star"))


# ---------------------------------------------------------------------------
# normalization and traces

def test_normalize_beta():
    tr = normalize(ip("(lam x:Top. x) star"), RULES_IPLUS)
    assert tr.outcome.kind == "normal-form"
    assert tr.final == Star()
    assert len(tr.steps) == 1


def test_normalize_sum_of_pairs():
    tr = normalize(ip("sum(pair(star, star), pair(star, star))"), RULES_IPLUS)
    assert alpha_eq(tr.final, ip("pair(star, star)"))
    assert [s.rule.number for s in tr.steps] == [10, 8, 8]


def test_normalize_scalar_sum():
    tr = normalize(q("sum(1.0 . star, 2.0 . star)"), RULES_QUANTUM)
    assert alpha_eq(tr.final, q("3.0 . star"))


def test_fuel_exhaustion_outcome():
    t = ip("sum(pair(star, star), pair(star, star))")
    tr = normalize(t, RULES_IPLUS, fuel=1)
    assert tr.outcome.kind == "fuel-exhausted"
    assert len(tr.steps) == 1


def test_fuel_bounds_steps_not_checks():
    tr = normalize(Star(), RULES_IPLUS, fuel=0)
    assert tr.outcome.kind == "normal-form"
    tr = normalize(ip("top_elim(star, star)"), RULES_IPLUS, fuel=0)
    assert tr.outcome.kind == "fuel-exhausted"
    assert tr.steps == []


def test_zero_norm_normalize_outcome():
    t = q("case_nd(inlr(0.0 . star, 0.0 . star), x. x, y. y)")
    tr = normalize(t, RULES_QUANTUM, rng=derive_rng(1, 2))
    assert tr.outcome.kind == "stuck"
    assert tr.outcome.reason == "zero-norm"


def test_trace_replay_reproduces_exactly():
    for i, src in enumerate([
        "sum(case(inl(star), x. x, y. y), top_elim(star, star))",
        "(lam x:Top\\/Top. case(x, a. inr(a), b. inl(b))) inlr(star, star)",
    ]):
        tr = normalize(ip(src), RULES_IPLUS)
        assert replay(tr) == tr.final


def test_trace_replay_probabilistic():
    t = q("case_nd(inlr(1.0 . star, 1.0 . star), "
          "x. one_elim(x, inl(1.0 . star)), "
          "y. one_elim(y, inr(1.0 . star)))")
    for seed in range(6):
        tr = normalize(t, RULES_QUANTUM, rng=derive_rng(seed, 0))
        assert replay(tr) == tr.final


def test_trace_serialization():
    tr = normalize(ip("top_elim(star, star)"), RULES_IPLUS)
    lines = tr.step_lines()
    assert len(lines) == 1
    data = json.loads(lines[0])
    assert data == {"pos": [], "rule": "iplus:1", "weight": None}


def test_probabilistic_weights_sum_to_one():
    # squared norms 1 and 4 give branch weights 1/5 and 4/5
    t = q("case_nd(inlr(1.0 . star, 2.0 . star), x. x, y. y)")
    weights = set()
    for seed in range(20):
        tr = normalize(t, RULES_QUANTUM, rng=derive_rng(seed, 7))
        weights.add(round(tr.steps[0].weight, 12))
    assert weights <= {0.2, 0.8}
    assert len(weights) == 2  # both branches observed over 20 seeds


# ---------------------------------------------------------------------------
# peaks

def test_join_peak_examples():
    assert join_peak(ip("sum(top_elim(star, star), star)"), RULES_IPLUS)
    assert join_peak(Star(), RULES_IPLUS)


def test_join_peak_quantum_det():
    t = q("sum(prod(2.0, inlr(1.0 . star, 0.0 . star)), "
          "inlr(1.0 . star, 1.0 . star))")
    assert join_peak(t, RULES_QUANTUM_DET)


def test_deterministic_given_seed():
    t = q("case_nd(inlr(1.0 . star, 1.0 . star), x. x, y. y)")
    a = normalize(t, RULES_QUANTUM, rng=derive_rng(42, 0)).final
    b = normalize(t, RULES_QUANTUM, rng=derive_rng(42, 0)).final
    assert a == b
