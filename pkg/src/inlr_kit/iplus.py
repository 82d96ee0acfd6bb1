"""Rule table and predicates for the iplus calculus.

The nineteen reduction rules: seven cut rules (1-7) and twelve rules
commuting the sum with the introductions (8-19).  The table is left-linear
and the left-hand sides are pairwise non-overlapping, which is what makes
the calculus confluent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rewrite import (Rule, RuleId, RuleSet, normalize,
                      register_default_ruleset)
from .syntax import (AndElim1, AndElim2, App, Case, Inl, Inlr2, Inr, Lam,
                     Pair, Star, Sum, Term, TopElim, close_term, fresh_name,
                     open_abs, print_term, subst_abs)


def _rule(n, name, match, build):
    return Rule(RuleId("iplus", n), name, match, build)


def _beta(t):
    return subst_abs(t.fn.abs, t.arg)


def _sum_lam(t):
    a, b = t.left, t.right
    x = fresh_name(a.abs.hint or "x")
    body = Sum(open_abs(a.abs, x), open_abs(b.abs, x))
    ann = a.ann if a.ann is not None else b.ann
    return Lam(ann, close_term(body, x, hint=a.abs.hint))


def _is(node, *inner):
    """Matcher for node(first child constructor, ...)."""
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


RULES_IPLUS = register_default_ruleset(RuleSet(
    "iplus", "iplus", (
        _rule(1, "top-elim", _is(TopElim, Star), lambda t: t.body),
        _rule(2, "beta", _is(App, Lam), _beta),
        _rule(3, "and-elim-1", _is(AndElim1, Pair),
              lambda t: subst_abs(t.abs, t.scrut.left)),
        _rule(4, "and-elim-2", _is(AndElim2, Pair),
              lambda t: subst_abs(t.abs, t.scrut.right)),
        _rule(5, "case-inl", _is(Case, Inl),
              lambda t: subst_abs(t.left, t.scrut.body)),
        _rule(6, "case-inr", _is(Case, Inr),
              lambda t: subst_abs(t.right, t.scrut.body)),
        _rule(7, "case-inlr", _is(Case, Inlr2),
              lambda t: Sum(subst_abs(t.left, t.scrut.left),
                            subst_abs(t.right, t.scrut.right))),
        _rule(8, "sum-star", _is(Sum, Star, Star), lambda t: Star()),
        _rule(9, "sum-lam", _is(Sum, Lam, Lam), _sum_lam),
        _rule(10, "sum-pair", _is(Sum, Pair, Pair),
              lambda t: Pair(Sum(t.left.left, t.right.left),
                             Sum(t.left.right, t.right.right))),
        _rule(11, "sum-inl-inl", _is(Sum, Inl, Inl),
              lambda t: Inl(Sum(t.left.body, t.right.body))),
        _rule(12, "sum-inl-inr", _is(Sum, Inl, Inr),
              lambda t: Inlr2(t.left.body, t.right.body)),
        _rule(13, "sum-inl-inlr", _is(Sum, Inl, Inlr2),
              lambda t: Inlr2(Sum(t.left.body, t.right.left), t.right.right)),
        _rule(14, "sum-inr-inl", _is(Sum, Inr, Inl),
              lambda t: Inlr2(t.right.body, t.left.body)),
        _rule(15, "sum-inr-inr", _is(Sum, Inr, Inr),
              lambda t: Inr(Sum(t.left.body, t.right.body))),
        _rule(16, "sum-inr-inlr", _is(Sum, Inr, Inlr2),
              lambda t: Inlr2(t.right.left, Sum(t.left.body, t.right.right))),
        _rule(17, "sum-inlr-inl", _is(Sum, Inlr2, Inl),
              lambda t: Inlr2(Sum(t.left.left, t.right.body), t.left.right)),
        _rule(18, "sum-inlr-inr", _is(Sum, Inlr2, Inr),
              lambda t: Inlr2(t.left.left, Sum(t.left.right, t.right.body))),
        _rule(19, "sum-inlr-inlr", _is(Sum, Inlr2, Inlr2),
              lambda t: Inlr2(Sum(t.left.left, t.right.left),
                              Sum(t.left.right, t.right.right))),
    )))


_INTROS = (Star, Lam, Pair, Inl, Inr, Inlr2)


def is_introduction(t: Term) -> bool:
    """Whether the head constructor is an introduction form."""
    return isinstance(t, _INTROS)


@dataclass
class PropertyReport:
    samples: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        state = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        return f"{self.samples} samples: {state}"


def check_introduction_property(samples: int, seed: int,
                                fuel: int = 10 ** 6) -> PropertyReport:
    """Closed well-typed terms normalize to introductions.

    Draws random closed well-typed iplus terms, normalizes each, and
    collects any normal form that is not an introduction (none should
    exist) as a counterexample.
    """
    from . import gen
    from .rng import derive_rng

    report = PropertyReport(samples)
    for i in range(samples):
        rng = derive_rng(seed, 0xA11, i)
        term, _prop = gen.random_closed_term("iplus", rng)
        tr = normalize(term, RULES_IPLUS, fuel=fuel)
        if tr.outcome.kind != "normal-form":
            report.failures.append((print_term(term), tr.outcome.kind))
        elif not is_introduction(tr.final):
            report.failures.append((print_term(term), print_term(tr.final)))
    return report
