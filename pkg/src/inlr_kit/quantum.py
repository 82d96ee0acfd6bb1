"""Rule table, measures, norm, and measurement for the quantum calculus.

Rules 19-43.  The deterministic sub-table (everything except the four
``case_nd`` rules 24-27) is left-linear with no critical pairs.  Rules 26
and 27 are the probabilistic pair: on an ``inlr`` scrutinee the branch is
drawn with the norm-proportional weights.

The two integer measures make the termination argument executable: cut
rules (19-27) strictly decrease mu at the root, the commutation rules
(28-43) never increase mu and strictly decrease nu, so every root step
strictly decreases the lexicographic pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .rewrite import (ND_PAIR, ND_SINGLE, Rule, RuleId, RuleSet,
                      find_redexes, normalize, register_default_ruleset,
                      step_at)
from .rng import derive_rng
from .syntax import (App, Bound, Case, CaseNd, Inl, Inlr2, Inr, Lam, OneElim,
                     OPlus, One, Prod, Proposition, ScalarStar, Sum, Term,
                     Var, close_term, fresh_name, is_closed, open_abs,
                     print_term, subst, subst_abs)


def _rule(n, name, match, build, **kw):
    return Rule(RuleId("quantum", n), name, match, build, **kw)


def _is(node, *inner):
    if not inner:
        return lambda t: isinstance(t, node)
    first, second = (inner + (None,))[:2]

    def match(t):
        if not isinstance(t, node):
            return False
        slots = [getattr(t, f) for f, k in t._shape if k == "term"]
        if not isinstance(slots[0], first):
            return False
        return second is None or isinstance(slots[1], second)

    return match


def _beta(t):
    return subst_abs(t.fn.abs, t.arg)


def _sum_lam(t):
    a, b = t.left, t.right
    x = fresh_name(a.abs.hint or "x")
    body = Sum(open_abs(a.abs, x), open_abs(b.abs, x))
    ann = a.ann if a.ann is not None else b.ann
    return Lam(ann, close_term(body, x, hint=a.abs.hint))


def _prod_lam(t):
    inner = t.body
    x = fresh_name(inner.abs.hint or "x")
    body = Prod(t.value, open_abs(inner.abs, x))
    return Lam(inner.ann, close_term(body, x, hint=inner.abs.hint))


_DETERMINISTIC = (
    _rule(19, "one-elim", _is(OneElim, ScalarStar),
          lambda t: Prod(t.scrut.value, t.body)),
    _rule(20, "beta", _is(App, Lam), _beta),
    _rule(21, "case-inl", _is(Case, Inl),
          lambda t: subst_abs(t.left, t.scrut.body)),
    _rule(22, "case-inr", _is(Case, Inr),
          lambda t: subst_abs(t.right, t.scrut.body)),
    _rule(23, "case-inlr", _is(Case, Inlr2),
          lambda t: Sum(subst_abs(t.left, t.scrut.left),
                        subst_abs(t.right, t.scrut.right))),
)

_ND = (
    _rule(24, "case-nd-inl", _is(CaseNd, Inl),
          lambda t: subst_abs(t.left, t.scrut.body), group=ND_SINGLE),
    _rule(25, "case-nd-inr", _is(CaseNd, Inr),
          lambda t: subst_abs(t.right, t.scrut.body), group=ND_SINGLE),
    _rule(26, "case-nd-inlr-left", _is(CaseNd, Inlr2),
          lambda t: subst_abs(t.left, t.scrut.left),
          group=ND_PAIR, role="left"),
    _rule(27, "case-nd-inlr-right", _is(CaseNd, Inlr2),
          lambda t: subst_abs(t.right, t.scrut.right),
          group=ND_PAIR, role="right"),
)

_COMMUTATIONS = (
    _rule(28, "sum-scalar", _is(Sum, ScalarStar, ScalarStar),
          lambda t: ScalarStar(t.left.value + t.right.value)),
    _rule(29, "sum-lam", _is(Sum, Lam, Lam), _sum_lam),
    _rule(30, "sum-inl-inl", _is(Sum, Inl, Inl),
          lambda t: Inl(Sum(t.left.body, t.right.body))),
    _rule(31, "sum-inl-inr", _is(Sum, Inl, Inr),
          lambda t: Inlr2(t.left.body, t.right.body)),
    _rule(32, "sum-inl-inlr", _is(Sum, Inl, Inlr2),
          lambda t: Inlr2(Sum(t.left.body, t.right.left), t.right.right)),
    _rule(33, "sum-inr-inl", _is(Sum, Inr, Inl),
          lambda t: Inlr2(t.right.body, t.left.body)),
    _rule(34, "sum-inr-inr", _is(Sum, Inr, Inr),
          lambda t: Inr(Sum(t.left.body, t.right.body))),
    _rule(35, "sum-inr-inlr", _is(Sum, Inr, Inlr2),
          lambda t: Inlr2(t.right.left, Sum(t.left.body, t.right.right))),
    _rule(36, "sum-inlr-inl", _is(Sum, Inlr2, Inl),
          lambda t: Inlr2(Sum(t.left.left, t.right.body), t.left.right)),
    _rule(37, "sum-inlr-inr", _is(Sum, Inlr2, Inr),
          lambda t: Inlr2(t.left.left, Sum(t.left.right, t.right.body))),
    _rule(38, "sum-inlr-inlr", _is(Sum, Inlr2, Inlr2),
          lambda t: Inlr2(Sum(t.left.left, t.right.left),
                          Sum(t.left.right, t.right.right))),
    _rule(39, "prod-scalar", _is(Prod, ScalarStar),
          lambda t: ScalarStar(t.value * t.body.value)),
    _rule(40, "prod-lam", _is(Prod, Lam), _prod_lam),
    _rule(41, "prod-inl", _is(Prod, Inl),
          lambda t: Inl(Prod(t.value, t.body.body))),
    _rule(42, "prod-inr", _is(Prod, Inr),
          lambda t: Inr(Prod(t.value, t.body.body))),
    _rule(43, "prod-inlr", _is(Prod, Inlr2),
          lambda t: Inlr2(Prod(t.value, t.body.left),
                          Prod(t.value, t.body.right))),
)

RULES_QUANTUM = register_default_ruleset(
    RuleSet("quantum", "quantum", _DETERMINISTIC + _ND + _COMMUTATIONS))

#: rules 19-23 and 28-43; confluent (left-linear, no critical pairs)
RULES_QUANTUM_DET = RuleSet("quantum-det", "quantum",
                            _DETERMINISTIC + _COMMUTATIONS)

_INTROS = (ScalarStar, Lam, Inl, Inr, Inlr2)


def is_introduction(t: Term) -> bool:
    return isinstance(t, _INTROS)


# ---------------------------------------------------------------------------
# Measures

def measure_mu(t: Term) -> int:
    """The size-like measure; cut rules strictly decrease it at the root."""
    if isinstance(t, (Var, Bound)):
        return 0
    if isinstance(t, Sum):
        return 1 + max(measure_mu(t.left), measure_mu(t.right))
    if isinstance(t, Prod):
        return 1 + measure_mu(t.body)
    if isinstance(t, ScalarStar):
        return 1
    if isinstance(t, OneElim):
        return 1 + measure_mu(t.scrut) + measure_mu(t.body)
    if isinstance(t, Lam):
        return 1 + measure_mu(t.abs.body)
    if isinstance(t, App):
        return 1 + measure_mu(t.fn) + measure_mu(t.arg)
    if isinstance(t, (Inl, Inr)):
        return 1 + measure_mu(t.body)
    if isinstance(t, Inlr2):
        return 1 + max(measure_mu(t.left), measure_mu(t.right))
    if isinstance(t, (Case, CaseNd)):
        return 1 + measure_mu(t.scrut) + max(measure_mu(t.left.body),
                                             measure_mu(t.right.body))
    raise ValueError(f"{type(t).__name__} is not a quantum constructor")


def measure_nu(t: Term) -> int:
    """The depth-weighted measure; commutations strictly decrease it."""
    if isinstance(t, (Var, Bound)):
        return 0
    if isinstance(t, Sum):
        return 1 + 2 * max(measure_nu(t.left), measure_nu(t.right))
    if isinstance(t, Prod):
        return 1 + 2 * measure_nu(t.body)
    if isinstance(t, ScalarStar):
        return 1
    if isinstance(t, OneElim):
        return 1
    if isinstance(t, Lam):
        return 1 + measure_nu(t.abs.body)
    if isinstance(t, App):
        return 1
    if isinstance(t, (Inl, Inr)):
        return 1 + measure_nu(t.body)
    if isinstance(t, Inlr2):
        return 1 + max(measure_nu(t.left), measure_nu(t.right))
    if isinstance(t, (Case, CaseNd)):
        return 1
    raise ValueError(f"{type(t).__name__} is not a quantum constructor")


def lex_gt(t: Term, u: Term) -> bool:
    """Strict lexicographic order on (mu, nu)."""
    mt, mu_ = measure_mu(t), measure_mu(u)
    if mt != mu_:
        return mt > mu_
    return measure_nu(t) > measure_nu(u)


def check_lex_decrease(t: Term, u: Term, at_root: bool = True) -> bool:
    """Whether a root step from t to u strictly decreased (mu, nu).

    Only root steps are measured; inner steps go through the monotony
    argument instead and are rejected here.
    """
    if not at_root:
        raise ValueError("check_lex_decrease only accepts root steps")
    return lex_gt(t, u)


def mu_subst_additivity(ctx, t: Term, u: Term, x: str) -> bool:
    """mu((u/x)t) == mu(t) + mu(u).

    Assumes the linear typing preconditions: x occurs in t exactly as a
    linear hypothesis and u proves its proposition (ctx documents the
    split; it is not re-checked here).
    """
    del ctx
    return measure_mu(subst(u, x, t)) == measure_mu(t) + measure_mu(u)


# ---------------------------------------------------------------------------
# Norm

class NotVectorProp(Exception):
    pass


class NotIrreducible(Exception):
    pass


def is_vector_prop(p: Proposition) -> bool:
    if isinstance(p, One):
        return True
    return isinstance(p, OPlus) and is_vector_prop(p.left) and is_vector_prop(p.right)


def norm_sq(t: Term, prop: Proposition) -> float:
    """Squared norm of a closed irreducible proof of a vector proposition."""
    if not is_vector_prop(prop):
        raise NotVectorProp(print_term(t))
    if not is_closed(t) or find_redexes(t, RULES_QUANTUM):
        raise NotIrreducible(print_term(t))

    def go(t, p):
        if isinstance(p, One):
            if isinstance(t, ScalarStar):
                return abs(t.value) ** 2
            raise NotIrreducible(print_term(t))
        if isinstance(t, Inlr2):
            return go(t.left, p.left) + go(t.right, p.right)
        if isinstance(t, Inl):
            return go(t.body, p.left)
        if isinstance(t, Inr):
            return go(t.body, p.right)
        raise NotIrreducible(print_term(t))

    return go(t, prop)


# ---------------------------------------------------------------------------
# Measurement runs

STUCK_BIN = "<stuck:zero-norm>"


@dataclass
class Histogram:
    shots: int
    bins: list = field(default_factory=list)  # [{term, count, frequency, ...}]

    def to_json(self) -> str:
        return json.dumps(self.bins, indent=2, sort_keys=True)


class _Overflow(Exception):
    pass


def run_measure(t: Term, shots: int, seed: int,
                fuel: int = 10 ** 6) -> Histogram:
    """Normalize t repeatedly with independent seeded streams.

    Outcomes are binned by alpha-equivalence of the normal form; zero-norm
    stuck runs land in their own bin.  Exact weights are attached when the
    outcome distribution is small enough to enumerate.
    """
    counts = {}
    for shot in range(shots):
        rng = derive_rng(seed, 0x5407, shot)
        tr = normalize(t, RULES_QUANTUM, fuel=fuel, rng=rng)
        if tr.outcome.kind == "normal-form":
            key = tr.final
        elif tr.outcome.kind == "stuck":
            key = STUCK_BIN
        else:
            key = "<fuel-exhausted>"
        counts[key] = counts.get(key, 0) + 1
    exact = _exact_distribution(t)
    bins = []
    for key, count in counts.items():
        name = key if isinstance(key, str) else print_term(key)
        entry = {"term": name, "count": count, "frequency": count / shots}
        if exact is not None:
            weight = exact.get(key)
            if weight is not None:
                entry["exact_weight"] = weight
        bins.append(entry)
    bins.sort(key=lambda e: (-e["count"], e["term"]))
    return Histogram(shots=shots, bins=bins)


def _exact_distribution(t: Term, max_paths: int = 256,
                        max_steps: int = 10 ** 4):
    """Weighted enumeration of all reduction paths; None if too wide."""
    from .rewrite import _nd_pair_weights
    from .syntax import subterm_at

    out = {}
    paths = [0]

    def explore(term, prob, steps_left):
        while True:
            if steps_left <= 0:
                raise _Overflow
            redexes = find_redexes(term, RULES_QUANTUM)
            if not redexes:
                out[term] = out.get(term, 0.0) + prob
                return
            pos, rid = redexes[0]
            rule = RULES_QUANTUM.by_number(rid.number)
            steps_left -= 1
            if rule.group == ND_PAIR:
                paths[0] += 1
                if paths[0] > max_paths:
                    raise _Overflow
                redex = subterm_at(term, pos)
                weights = _nd_pair_weights(redex, RULES_QUANTUM, rng=None)
                if weights is None:
                    raise _Overflow
                wl, wr = weights
                total = wl + wr
                if total == 0.0:
                    out[STUCK_BIN] = out.get(STUCK_BIN, 0.0) + prob
                    return
                left = step_at(term, pos, rid, choice="left")
                right = step_at(term, pos, rid, choice="right")
                explore(left, prob * wl / total, steps_left)
                term, prob = right, prob * wr / total
                continue
            term = step_at(term, pos, rid)

    try:
        explore(t, 1.0, max_steps)
    except _Overflow:
        return None
    return out
