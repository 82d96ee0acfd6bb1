"""Rule-driven reduction engine.

Rule tables are data: every rule has an id (calculus tag + number), a
left-hand-side matcher, and a contractum builder.  The engine discovers
redexes in leftmost-outermost order, steps with an explicit rng for the
non-deterministic rules, records traces that replay exactly, and joins
one-step peaks for confluence testing.

Builders always receive a locally closed redex: the engine opens every
binder it descends through and closes it again around the contractum, so
builders work with ordinary named variables and capture is impossible.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .syntax import (Inl, Inlr2, Inr, ScalarStar, Term, alpha_eq,
                     child_slots, close_term, fresh_name, open_abs,
                     replace_children)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

# nd-family tags
ND_PAIR = "nd-inlr"      # probabilistic pair (quantum 26/27)
ND_SINGLE = "nd-single"  # non-deterministic in name only (quantum 24/25)
ND_CHOICE = "nd-choice"  # unweighted alternatives (cc bottom-elimination)


@dataclass(frozen=True)
class RuleId:
    calculus: str
    number: int

    def __str__(self):
        return f"{self.calculus}:{self.number}"


@dataclass(frozen=True)
class Rule:
    rid: RuleId
    name: str
    match: object   # Term -> bool
    build: object   # locally closed Term -> Term
    group: str | None = None
    role: str | None = None  # "left" / "right" within an ND_PAIR family


@dataclass(frozen=True)
class RuleSet:
    name: str
    calculus: str
    rules: tuple

    def by_number(self, number: int) -> Rule:
        for r in self.rules:
            if r.rid.number == number:
                return r
        raise KeyError(number)


_REGISTRY: dict[str, RuleSet] = {}


def register_default_ruleset(rs: RuleSet) -> RuleSet:
    _REGISTRY[rs.calculus] = rs
    return rs


def default_ruleset(calculus: str) -> RuleSet:
    return _REGISTRY[calculus]


class NoMatchError(Exception):
    pass


class ZeroNormStuck(Exception):
    """Both branch weights of a measurement step are zero."""


# ---------------------------------------------------------------------------
# Traces


@dataclass(frozen=True)
class Step:
    rule: RuleId
    pos: tuple
    weight: float | None

    def to_json(self):
        out = {"rule": str(self.rule), "pos": list(self.pos)}
        out["weight"] = self.weight
        return out


@dataclass(frozen=True)
class NormalFormOutcome:
    term: Term
    kind = "normal-form"


@dataclass(frozen=True)
class FuelExhaustedOutcome:
    term: Term
    kind = "fuel-exhausted"


@dataclass(frozen=True)
class StuckOutcome:
    term: Term
    reason: str
    kind = "stuck"


@dataclass
class ReductionTrace:
    initial: Term
    steps: list = field(default_factory=list)
    outcome: object = None

    @property
    def final(self) -> Term:
        return self.outcome.term

    def step_lines(self):
        import json

        return [json.dumps(s.to_json(), sort_keys=True) for s in self.steps]


def replay(trace: ReductionTrace, ruleset: RuleSet | None = None) -> Term:
    """Re-run the recorded steps; reproduces the outcome term exactly."""
    t = trace.initial
    for s in trace.steps:
        rs = ruleset or default_ruleset(s.rule.calculus)
        rule = rs.by_number(s.rule.number)
        choice = rule.role if rule.group == ND_PAIR else None
        t = step_at(t, s.pos, s.rule, choice=choice, ruleset=rs)
    return t


# ---------------------------------------------------------------------------
# Norm weights for the probabilistic pair

def structural_norm_sq(t: Term) -> float | None:
    """The squared norm of a closed irreducible vector proof, else None."""
    if isinstance(t, ScalarStar):
        return abs(t.value) ** 2
    if isinstance(t, Inlr2):
        a = structural_norm_sq(t.left)
        b = structural_norm_sq(t.right)
        if a is None or b is None:
            return None
        return a + b
    if isinstance(t, (Inl, Inr)):
        return structural_norm_sq(t.body)
    return None


def _nd_pair_weights(redex, rs, rng, fuel=10 ** 6):
    """Branch weights for a measurement step on an inlr scrutinee.

    The components are normalized first (the norm is only defined on
    closed irreducible proofs); components that do not denote vectors get
    no weights and the branch is drawn uniformly.
    """
    out = []
    for comp in (redex.scrut.left, redex.scrut.right):
        tr = normalize(comp, rs, fuel=fuel, rng=rng)
        if tr.outcome.kind != "normal-form":
            return None
        w = structural_norm_sq(tr.final)
        if w is None:
            return None
        out.append(w)
    return tuple(out)


def _select_nd_pair(rules_here, redex, rs, rng, choice):
    left = next(r for r in rules_here if r.role == "left")
    right = next(r for r in rules_here if r.role == "right")
    weights = _nd_pair_weights(redex, rs, rng)
    if weights is not None:
        wl, wr = weights
        total = wl + wr
        if total == 0.0:
            raise ZeroNormStuck("both branch weights are zero")
        pl, pr = wl / total, wr / total
    else:
        pl = pr = None
    if choice == "left":
        return left, pl
    if choice == "right":
        return right, pr
    if rng is None:
        return left, pl
    u = rng.random()
    threshold = pl if pl is not None else 0.5
    return (left, pl) if u < threshold else (right, pr)


def _select(rules_here, redex, rs, rng, choice=None):
    """Pick the rule to apply among all rules matching at one position."""
    first = rules_here[0]
    if first.group == ND_PAIR:
        return _select_nd_pair(rules_here, redex, rs, rng, choice)
    if first.group == ND_SINGLE:
        return first, 1.0
    # ND_CHOICE and deterministic rules: first-listed alternative
    return first, None


# ---------------------------------------------------------------------------
# Redex discovery

def find_redexes(t: Term, ruleset: RuleSet):
    """All (position, rule id) pairs, leftmost-outermost, all alternatives."""
    out = []

    def walk(t, pos):
        for r in ruleset.rules:
            if r.match(t):
                out.append((pos, r.rid))
        for i, (name, kind) in enumerate(child_slots(t)):
            child = getattr(t, name)
            walk(child.body if kind == "abs" else child, pos + (i,))

    walk(t, ())
    return out


# ---------------------------------------------------------------------------
# Single steps

def _mark_normal(obj, key):
    cache = getattr(obj, "_nf", None)
    if cache is None:
        object.__setattr__(obj, "_nf", {key})
    else:
        cache.add(key)


def _is_normal_cached(obj, key):
    cache = getattr(obj, "_nf", None)
    return cache is not None and key in cache


def _rebuild(t, slot_index, new_child):
    children = []
    for j, (name, kind) in enumerate(child_slots(t)):
        old = getattr(t, name)
        children.append(new_child if j == slot_index
                        else (old.body if kind == "abs" else old))
    return replace_children(t, children)


def _step_once(t, rs, rng):
    """Leftmost-outermost step.  Returns (term, rule id, pos, weight) or None.

    Raises ZeroNormStuck when the chosen redex is a zero-norm measurement.
    """
    if _is_normal_cached(t, rs.name):
        return None
    here = [r for r in rs.rules if r.match(t)]
    if here:
        rule, weight = _select(here, t, rs, rng, None)
        return rule.build(t), rule.rid, (), weight
    for i, (name, kind) in enumerate(child_slots(t)):
        slot = getattr(t, name)
        if kind == "abs":
            if _is_normal_cached(slot, rs.name):
                continue
            x = fresh_name(slot.hint)
            res = _step_once(open_abs(slot, x), rs, rng)
            if res is None:
                _mark_normal(slot, rs.name)
                continue
            new_body, rid, pos, weight = res
            new = replace_children(
                t, [close_term(new_body, x, hint=slot.hint).body
                    if j == i else (getattr(t, nm).body if kd == "abs"
                                    else getattr(t, nm))
                    for j, (nm, kd) in enumerate(child_slots(t))])
            return new, rid, (i,) + pos, weight
        else:
            res = _step_once(slot, rs, rng)
            if res is not None:
                new_child, rid, pos, weight = res
                return _rebuild(t, i, new_child), rid, (i,) + pos, weight
    _mark_normal(t, rs.name)
    return None


def step_at(t: Term, pos, rid: RuleId, choice: str | None = None,
            rng=None, ruleset: RuleSet | None = None) -> Term:
    """Apply one named rule at a position.

    For the probabilistic pair of measurement rules the branch is drawn
    from the rng with the norm-proportional weights unless `choice`
    ("left"/"right") forces it.
    """
    rs = ruleset or default_ruleset(rid.calculus)

    def go(t, pos):
        if not pos:
            here = [r for r in rs.rules if r.match(t)]
            if not here:
                raise NoMatchError(f"no rule matches at the target position")
            named = [r for r in here if r.rid == rid]
            if not named:
                raise NoMatchError(f"rule {rid} does not match here")
            if named[0].group == ND_PAIR:
                forced = choice
                if forced is None and rng is None:
                    forced = named[0].role
                rule, _ = _select_nd_pair(here, t, rs, rng, forced)
                return rule.build(t)
            return named[0].build(t)
        i, rest = pos[0], pos[1:]
        slots = child_slots(t)
        if i >= len(slots):
            raise NoMatchError(f"position {pos} does not exist")
        name, kind = slots[i]
        slot = getattr(t, name)
        if kind == "abs":
            x = fresh_name(slot.hint)
            new_body = go(open_abs(slot, x), rest)
            closed = close_term(new_body, x, hint=slot.hint).body
            return replace_children(
                t, [closed if j == i else
                    (getattr(t, nm).body if kd == "abs" else getattr(t, nm))
                    for j, (nm, kd) in enumerate(child_slots(t))])
        return _rebuild(t, i, go(slot, rest))

    return go(t, tuple(pos))


# ---------------------------------------------------------------------------
# Normalization

def normalize(t: Term, ruleset: RuleSet, fuel: int = 10 ** 6,
              rng=None) -> ReductionTrace:
    """Repeatedly contract the leftmost-outermost redex.

    Deterministic given the rng seed; the outcome encodes normal forms,
    fuel exhaustion, and zero-norm stuck measurements.
    """
    trace = ReductionTrace(initial=t)
    cur = t
    while True:
        try:
            res = _step_once(cur, ruleset, rng)
        except ZeroNormStuck:
            trace.outcome = StuckOutcome(cur, "zero-norm")
            return trace
        if res is None:
            trace.outcome = NormalFormOutcome(cur)
            return trace
        if len(trace.steps) >= fuel:
            trace.outcome = FuelExhaustedOutcome(cur)
            return trace
        cur, rid, pos, weight = res
        trace.steps.append(Step(rid, pos, weight))


def normal_form(t: Term, ruleset: RuleSet, fuel: int = 10 ** 6, rng=None) -> Term:
    tr = normalize(t, ruleset, fuel=fuel, rng=rng)
    if tr.outcome.kind != "normal-form":
        raise RuntimeError(f"normalization did not finish: {tr.outcome.kind}")
    return tr.final


def join_peak(t: Term, ruleset: RuleSet, fuel: int = 10 ** 6) -> bool:
    """Check that all one-step reducts of t share one normal form.

    Only meaningful on a deterministic ruleset (no nd families).
    """
    nfs = []
    for pos, rid in find_redexes(t, ruleset):
        u = step_at(t, pos, rid, ruleset=ruleset)
        tr = normalize(u, ruleset, fuel=fuel)
        if tr.outcome.kind != "normal-form":
            return False
        nfs.append(tr.final)
    return all(alpha_eq(nfs[0], nf) for nf in nfs[1:]) if nfs else True
