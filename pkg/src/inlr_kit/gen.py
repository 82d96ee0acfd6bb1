"""Type-directed random generation of well-typed terms.

Rejection sampling of raw terms almost never typechecks, so generation
runs top-down: pick a goal proposition, then build a derivation for it,
choosing randomly among the rules that keep the goal provable.  The
linear generator additionally threads the hypotheses that still have to
be consumed and always has a deterministic way to discharge them, so it
never backtracks.

The per-rule instance builders at the bottom produce well-typed redexes
for every entry of the three rule tables; the subject-reduction and
rule-soundness suites are driven from them.
"""

from __future__ import annotations

from .syntax import (AndElim1, AndElim2, App, Atom, Bot, BotElim, Case,
                     CaseNd, Conj, Disj, Impl, Inl, Inlr2, Inlr3, Inr, Lam,
                     Lollipop, One, OneElim, OPlus, Pair, Prod, Proposition,
                     ScalarStar, Star, Sum, Top, TopElim, Var,
                     close_term, fresh_name)

_ATOMS = ("P", "Q", "R")


def _pick(rng, xs):
    return xs[int(rng.integers(len(xs)))]


def _coin(rng, p=0.5):
    return rng.random() < p


def _lam(ann, name, body):
    return Lam(ann, close_term(body, name, hint=_hint(name)))


def _hint(name):
    return name.split("?")[-1].rstrip("0123456789") or "x"


def _abs(name, body):
    return close_term(body, name, hint=_hint(name))


# ---------------------------------------------------------------------------
# Propositions

def random_any_prop(rng, depth=2) -> Proposition:
    """An arbitrary intuitionistic proposition (not necessarily provable)."""
    if depth <= 0 or _coin(rng, 0.4):
        return _pick(rng, (Top(), Bot(), Atom(_pick(rng, _ATOMS))))
    node = _pick(rng, (Impl, Conj, Disj))
    return node(random_any_prop(rng, depth - 1),
                random_any_prop(rng, depth - 1))


def random_quantum_prop(rng, depth=2) -> Proposition:
    if depth <= 0 or _coin(rng, 0.4):
        return One()
    node = _pick(rng, (OPlus, OPlus, Lollipop))
    return node(random_quantum_prop(rng, depth - 1),
                random_quantum_prop(rng, depth - 1))


def _provable(goal, hyps) -> bool:
    """Conservative provability: atoms and Bot only directly from a
    hypothesis."""
    if isinstance(goal, Top):
        return True
    if isinstance(goal, (Atom, Bot)):
        return goal in hyps
    if isinstance(goal, Impl):
        return _provable(goal.right, hyps + (goal.left,))
    if isinstance(goal, Conj):
        return _provable(goal.left, hyps) and _provable(goal.right, hyps)
    if isinstance(goal, Disj):
        return _provable(goal.left, hyps) or _provable(goal.right, hyps)
    return False


def random_provable_prop(rng, hyps=(), depth=2) -> Proposition:
    """A proposition that the generator is guaranteed to inhabit."""
    direct = [p for p in hyps if isinstance(p, (Atom, Bot))]
    if depth <= 0:
        return _pick(rng, [Top()] + direct) if direct and _coin(rng) else Top()
    roll = rng.random()
    if roll < 0.25:
        return _pick(rng, [Top()] + direct)
    if roll < 0.45:
        return Conj(random_provable_prop(rng, hyps, depth - 1),
                    random_provable_prop(rng, hyps, depth - 1))
    if roll < 0.65:
        good = random_provable_prop(rng, hyps, depth - 1)
        other = random_any_prop(rng, depth - 1)
        return Disj(good, other) if _coin(rng) else Disj(other, good)
    left = random_any_prop(rng, depth - 1)
    return Impl(left, random_provable_prop(rng, hyps + (left,), depth - 1))


# ---------------------------------------------------------------------------
# iplus and cc terms

class _Budget:
    def __init__(self, n):
        self.n = n

    def spend(self, k=1):
        self.n -= k
        return self.n > 0


def _gen_i(goal, ctx, rng, budget, calculus):
    """A term proving `goal` under ctx; `goal` must satisfy _provable."""
    hyps = tuple(ctx.values())
    candidates = [name for name, p in ctx.items() if p == goal]

    if not budget.spend():
        return _minimal(goal, ctx, calculus)

    moves = []
    if candidates:
        moves += [("var", None)] * 3
    if isinstance(goal, Top):
        moves += [("star", None)] * 3
    elif isinstance(goal, Impl):
        moves += [("lam", None)] * 3
    elif isinstance(goal, Conj):
        moves += [("pair", None)] * 3
    elif isinstance(goal, Disj):
        if _provable(goal.left, hyps):
            moves.append(("inl", None))
        if _provable(goal.right, hyps):
            moves.append(("inr", None))
        if _provable(goal.left, hyps) and _provable(goal.right, hyps):
            if calculus == "iplus":
                moves += [("inlr2", None)] * 2
            else:
                moves += [("inlr3", None)] * 2
    if calculus == "iplus":
        moves.append(("sum", None))
    if budget.n > 4:
        moves += [("top_elim", None), ("app", None),
                  ("and1", None), ("and2", None), ("case", None)]
        if any(isinstance(p, Bot) for p in hyps):
            moves.append(("bot_elim", None))

    move, _ = _pick(rng, moves) if moves else ("minimal", None)

    if move == "var":
        return Var(_pick(rng, candidates))
    if move == "star":
        return Star()
    if move == "lam":
        x = fresh_name("x")
        body = _gen_i(goal.right, {**ctx, x: goal.left}, rng, budget, calculus)
        return _lam(goal.left, x, body)
    if move == "pair":
        return Pair(_gen_i(goal.left, ctx, rng, budget, calculus),
                    _gen_i(goal.right, ctx, rng, budget, calculus))
    if move == "inl":
        return Inl(_gen_i(goal.left, ctx, rng, budget, calculus))
    if move == "inr":
        return Inr(_gen_i(goal.right, ctx, rng, budget, calculus))
    if move == "inlr2":
        return Inlr2(_gen_i(goal.left, ctx, rng, budget, calculus),
                     _gen_i(goal.right, ctx, rng, budget, calculus))
    if move == "inlr3":
        d1 = random_provable_prop(rng, hyps, 1)
        d2 = random_provable_prop(rng, hyps, 1)
        scrut = _gen_i(Disj(d1, d2), ctx, rng, budget, calculus)
        x1, x2 = fresh_name("x"), fresh_name("y")
        u1 = _gen_i(goal.left, {**ctx, x1: d1}, rng, budget, calculus)
        u2 = _gen_i(goal.right, {**ctx, x2: d2}, rng, budget, calculus)
        return Inlr3(scrut, _abs(x1, u1), _abs(x2, u2))
    if move == "sum":
        return Sum(_gen_i(goal, ctx, rng, budget, calculus),
                   _gen_i(goal, ctx, rng, budget, calculus))
    if move == "top_elim":
        return TopElim(_gen_i(Top(), ctx, rng, budget, calculus),
                       _gen_i(goal, ctx, rng, budget, calculus))
    if move == "app":
        a = random_provable_prop(rng, hyps, 1)
        fn = _gen_i(Impl(a, goal), ctx, rng, budget, calculus)
        return App(fn, _gen_i(a, ctx, rng, budget, calculus))
    if move in ("and1", "and2"):
        a = random_provable_prop(rng, hyps, 1)
        b = random_provable_prop(rng, hyps, 1)
        scrut = _gen_i(Conj(a, b), ctx, rng, budget, calculus)
        x = fresh_name("x")
        bound = a if move == "and1" else b
        body = _gen_i(goal, {**ctx, x: bound}, rng, budget, calculus)
        node = AndElim1 if move == "and1" else AndElim2
        return node(scrut, _abs(x, body))
    if move == "case":
        a = random_provable_prop(rng, hyps, 1)
        b = random_provable_prop(rng, hyps, 1)
        scrut = _gen_i(Disj(a, b), ctx, rng, budget, calculus)
        x, y = fresh_name("x"), fresh_name("y")
        u = _gen_i(goal, {**ctx, x: a}, rng, budget, calculus)
        v = _gen_i(goal, {**ctx, y: b}, rng, budget, calculus)
        return Case(scrut, _abs(x, u), _abs(y, v))
    if move == "bot_elim":
        bot_var = next(n for n, p in ctx.items() if isinstance(p, Bot))
        return BotElim(goal, Var(bot_var))
    return _minimal(goal, ctx, calculus)


def _minimal(goal, ctx, calculus):
    """Smallest proof; used when the size budget runs out."""
    for name, p in ctx.items():
        if p == goal:
            return Var(name)
    if isinstance(goal, Top):
        return Star()
    if isinstance(goal, Impl):
        x = fresh_name("x")
        return _lam(goal.left, x,
                    _minimal(goal.right, {**ctx, x: goal.left}, calculus))
    if isinstance(goal, Conj):
        return Pair(_minimal(goal.left, ctx, calculus),
                    _minimal(goal.right, ctx, calculus))
    if isinstance(goal, Disj):
        if _provable(goal.left, tuple(ctx.values())):
            return Inl(_minimal(goal.left, ctx, calculus))
        return Inr(_minimal(goal.right, ctx, calculus))
    raise RuntimeError(f"unprovable goal reached: {goal}")


def _bounded(build, rng, max_size, attempts=40):
    """Rerolls until the built term fits the size bound."""
    from .syntax import term_size

    budget = max(4, max_size // 3)
    best = None
    for i in range(attempts):
        t = build(_Budget(budget))
        if term_size(t) <= max_size:
            return t
        if best is None or term_size(t) < term_size(best):
            best = t
        if i % 10 == 9:
            budget = max(2, budget - 2)
    return best


def random_closed_term(calculus, rng, max_size=30):
    """A random closed well-typed term together with its proposition."""
    if calculus == "quantum":
        goal = random_quantum_prop(rng)
        t = _bounded(lambda b: _gen_q(goal, [], rng, b, allow_nd=False),
                     rng, max_size)
        return t, goal
    goal = random_provable_prop(rng)
    t = _bounded(lambda b: _gen_i(goal, {}, rng, b, calculus), rng, max_size)
    return t, goal


def random_term_in_context(calculus, rng, max_size=30, allow_nd=True):
    """(ctx, term, proposition) with a small random context."""
    if calculus == "quantum":
        goal = random_quantum_prop(rng)
        t = _bounded(lambda b: _gen_q(goal, [], rng, b, allow_nd=allow_nd),
                     rng, max_size)
        return {}, t, goal
    ctx = {}
    for i in range(int(rng.integers(0, 4))):
        ctx[f"h{i}"] = random_any_prop(rng, 1)
    goal = random_provable_prop(rng, tuple(ctx.values()))
    t = _bounded(lambda b: _gen_i(goal, ctx, rng, b, calculus), rng, max_size)
    return ctx, t, goal


# ---------------------------------------------------------------------------
# Quantum terms (linear)

_SCALARS = (1.0, -1.0, 2.0, 0.5, 1j, 1 + 1j, -0.5j, 3.0)


def random_scalar(rng, allow_zero=False):
    pool = _SCALARS + ((0.0,) if allow_zero else ())
    return complex(_pick(rng, pool))


def _gen_q(goal, resources, rng, budget, allow_nd):
    """A linear term proving `goal` that consumes every resource exactly
    once."""
    if not budget.spend():
        return _consume_all(goal, resources, rng, budget, allow_nd)

    moves = []
    if len(resources) == 1 and resources[0][1] == goal:
        moves += ["var"] * 4
    if isinstance(goal, One) and not resources:
        moves += ["scalar"] * 3
    if isinstance(goal, Lollipop):
        moves += ["lam"] * 3
    if isinstance(goal, OPlus):
        moves += ["inl", "inr", "inlr2", "inlr2"]
    moves += ["sum", "prod"]
    if resources:
        moves += ["consume"] * (2 + 2 * len(resources))

    move = _pick(rng, moves)
    if move == "var":
        return Var(resources[0][0])
    if move == "scalar":
        return ScalarStar(random_scalar(rng, allow_zero=True))
    if move == "lam":
        x = fresh_name("x")
        body = _gen_q(goal.right, resources + [(x, goal.left)], rng, budget,
                      allow_nd)
        return _lam(goal.left, x, body)
    if move == "inl":
        return Inl(_gen_q(goal.left, resources, rng, budget, allow_nd))
    if move == "inr":
        return Inr(_gen_q(goal.right, resources, rng, budget, allow_nd))
    if move == "inlr2":
        return Inlr2(_gen_q(goal.left, resources, rng, budget, allow_nd),
                     _gen_q(goal.right, resources, rng, budget, allow_nd))
    if move == "sum":
        return Sum(_gen_q(goal, resources, rng, budget, allow_nd),
                   _gen_q(goal, resources, rng, budget, allow_nd))
    if move == "prod":
        return Prod(random_scalar(rng),
                    _gen_q(goal, resources, rng, budget, allow_nd))
    # consume one resource through its elimination form
    i = int(rng.integers(len(resources)))
    (x, ty) = resources[i]
    rest = resources[:i] + resources[i + 1:]
    return _consume_term(Var(x), ty, goal, rest, rng, budget, allow_nd)


def _consume_term(term, ty, goal, resources, rng, budget, allow_nd):
    """Eliminate `term : ty` (plus all resources) into a proof of goal."""
    if isinstance(ty, One):
        return OneElim(term, _gen_q(goal, resources, rng, budget, allow_nd))
    if isinstance(ty, OPlus):
        node = CaseNd if allow_nd and _coin(rng, 0.4) else Case
        y, z = fresh_name("y"), fresh_name("z")
        u = _gen_q(goal, resources + [(y, ty.left)], rng, budget, allow_nd)
        v = _gen_q(goal, resources + [(z, ty.right)], rng, budget, allow_nd)
        return node(term, _abs(y, u), _abs(z, v))
    if isinstance(ty, Lollipop):
        # hand a random share of the resources to the argument
        mine, arg_side = [], []
        for r in resources:
            (arg_side if budget.n > 2 and _coin(rng, 0.3) else mine).append(r)
        arg = _gen_q(ty.left, arg_side, rng, budget, allow_nd)
        return _consume_term(App(term, arg), ty.right, goal, mine, rng,
                             budget, allow_nd)
    raise RuntimeError(f"cannot consume resource of type {ty}")


def _consume_all(goal, resources, rng, budget, allow_nd):
    if not resources:
        return _produce_min_q(goal)
    (x, ty) = resources[0]
    return _consume_min(Var(x), ty, goal, resources[1:], rng, budget,
                        allow_nd)


def _consume_min(term, ty, goal, resources, rng, budget, allow_nd):
    if isinstance(ty, One):
        return OneElim(term, _consume_all(goal, resources, rng, budget,
                                          allow_nd))
    if isinstance(ty, OPlus):
        y, z = fresh_name("y"), fresh_name("z")
        u = _consume_all(goal, resources + [(y, ty.left)], rng, budget,
                         allow_nd)
        v = _consume_all(goal, resources + [(z, ty.right)], rng, budget,
                         allow_nd)
        return Case(term, _abs(y, u), _abs(z, v))
    if isinstance(ty, Lollipop):
        return _consume_min(App(term, _produce_min_q(ty.left)), ty.right,
                            goal, resources, rng, budget, allow_nd)
    raise RuntimeError(f"cannot consume resource of type {ty}")


def _produce_min_q(goal):
    if isinstance(goal, One):
        return ScalarStar(1.0)
    if isinstance(goal, OPlus):
        return Inl(_produce_min_q(goal.left))
    if isinstance(goal, Lollipop):
        x = fresh_name("x")
        body = _consume_min(Var(x), goal.left, goal.right, [], None, None,
                            False)
        return _lam(goal.left, x, body)
    raise RuntimeError(f"no minimal quantum proof of {goal}")


# ---------------------------------------------------------------------------
# Per-rule redex instances

def _atoms(*names):
    return tuple(Atom(n) for n in names)


def iplus_rule_instance(number, rng, size=8):
    """(ctx, redex term, expected proposition) for one iplus rule."""
    ctx = {"h": random_any_prop(rng, 1)}
    hyps = tuple(ctx.values())
    budget = lambda: _Budget(size)
    gen = lambda goal, extra={}: _gen_i(goal, {**ctx, **extra}, rng,
                                        budget(), "iplus")
    goal = random_provable_prop(rng, hyps, 1)
    a = random_provable_prop(rng, hyps, 1)
    b = random_provable_prop(rng, hyps, 1)
    x, y = fresh_name("x"), fresh_name("y")

    if number == 1:
        return ctx, TopElim(Star(), gen(goal)), goal
    if number == 2:
        return ctx, App(_lam(a, x, gen(goal, {x: a})), gen(a)), goal
    if number in (3, 4):
        node = AndElim1 if number == 3 else AndElim2
        bound = a if number == 3 else b
        return ctx, node(Pair(gen(a), gen(b)),
                         _abs(x, gen(goal, {x: bound}))), goal
    if number in (5, 6, 7):
        scrut = {5: lambda: Inl(gen(a)), 6: lambda: Inr(gen(b)),
                 7: lambda: Inlr2(gen(a), gen(b))}[number]()
        return ctx, Case(scrut, _abs(x, gen(goal, {x: a})),
                         _abs(y, gen(goal, {y: b}))), goal
    if number == 8:
        return ctx, Sum(Star(), Star()), Top()
    if number == 9:
        t = Sum(_lam(a, x, gen(b, {x: a})), _lam(a, y, gen(b, {y: a})))
        return ctx, t, Impl(a, b)
    if number == 10:
        t = Sum(Pair(gen(a), gen(b)), Pair(gen(a), gen(b)))
        return ctx, t, Conj(a, b)
    intro = {
        "l": lambda: Inl(gen(a)),
        "r": lambda: Inr(gen(b)),
        "lr": lambda: Inlr2(gen(a), gen(b)),
    }
    shapes = {11: ("l", "l"), 12: ("l", "r"), 13: ("l", "lr"),
              14: ("r", "l"), 15: ("r", "r"), 16: ("r", "lr"),
              17: ("lr", "l"), 18: ("lr", "r"), 19: ("lr", "lr")}
    lhs, rhs = shapes[number]
    return ctx, Sum(intro[lhs](), intro[rhs]()), Disj(a, b)


def quantum_rule_instance(number, rng, size=6):
    """(ctx, redex term, expected proposition) for one quantum rule.

    Instances are closed: the linear context is provided by binders.
    """
    budget = lambda: _Budget(size)
    gen = lambda goal, res=(): _gen_q(goal, list(res), rng, budget(),
                                      allow_nd=False)
    goal = random_quantum_prop(rng, 1)
    a = random_quantum_prop(rng, 1)
    b = random_quantum_prop(rng, 1)
    x, y = fresh_name("x"), fresh_name("y")
    sa, sb = random_scalar(rng), random_scalar(rng)

    if number == 19:
        return {}, OneElim(ScalarStar(sa), gen(goal)), goal
    if number == 20:
        return {}, App(_lam(a, x, gen(goal, [(x, a)])), gen(a)), goal
    if number in (21, 22, 23, 24, 25, 26, 27):
        node = Case if number <= 23 else CaseNd
        kind = {21: "l", 22: "r", 23: "lr", 24: "l", 25: "r",
                26: "lr", 27: "lr"}[number]
        scrut = {"l": lambda: Inl(gen(a)), "r": lambda: Inr(gen(b)),
                 "lr": lambda: Inlr2(gen(a), gen(b))}[kind]()
        t = node(scrut, _abs(x, gen(goal, [(x, a)])),
                 _abs(y, gen(goal, [(y, b)])))
        return {}, t, goal
    if number == 28:
        return {}, Sum(ScalarStar(sa), ScalarStar(sb)), One()
    if number == 29:
        t = Sum(_lam(a, x, gen(b, [(x, a)])), _lam(a, y, gen(b, [(y, a)])))
        return {}, t, Lollipop(a, b)
    if 30 <= number <= 38:
        intro = {"l": lambda: Inl(gen(a)), "r": lambda: Inr(gen(b)),
                 "lr": lambda: Inlr2(gen(a), gen(b))}
        shapes = {30: ("l", "l"), 31: ("l", "r"), 32: ("l", "lr"),
                  33: ("r", "l"), 34: ("r", "r"), 35: ("r", "lr"),
                  36: ("lr", "l"), 37: ("lr", "r"), 38: ("lr", "lr")}
        lhs, rhs = shapes[number]
        return {}, Sum(intro[lhs](), intro[rhs]()), OPlus(a, b)
    if number == 39:
        return {}, Prod(sa, ScalarStar(sb)), One()
    if number == 40:
        return {}, Prod(sa, _lam(a, x, gen(b, [(x, a)]))), Lollipop(a, b)
    if number in (41, 42, 43):
        inner = {41: lambda: Inl(gen(a)), 42: lambda: Inr(gen(b)),
                 43: lambda: Inlr2(gen(a), gen(b))}[number]()
        return {}, Prod(sa, inner), OPlus(a, b)
    raise ValueError(f"no quantum rule {number}")


def cc_rule_instance(number, rng, size=6):
    """(ctx, redex term, expected proposition) for one cc rule."""
    a1, a2, b1, b2, b3, b4, c, d = _atoms("A1", "A2", "B1", "B2", "B3",
                                          "B4", "C", "D")
    ctx = {"s": Disj(a1, a2), "t1v": Disj(b1, b2), "t2v": Disj(b3, b4),
           "bb": Bot(), "cc": c, "dd": d,
           "hb1": b1, "hb2": b2, "hb3": b3, "hb4": b4}
    budget = lambda: _Budget(size)
    gen = lambda goal, extra={}: _gen_i(goal, {**ctx, **extra}, rng,
                                        budget(), "cc")
    hyps = tuple(ctx.values())
    goal = random_provable_prop(rng, hyps, 1)
    e = random_provable_prop(rng, hyps, 1)
    f = random_provable_prop(rng, hyps, 1)
    x, y, z = fresh_name("x"), fresh_name("y"), fresh_name("z")
    x1, x2 = fresh_name("x1"), fresh_name("x2")
    y1, y2 = fresh_name("y1"), fresh_name("y2")

    def inlr3(scrut_prop, left_goal, right_goal, extra):
        scrut = gen(scrut_prop, extra)
        p, q = fresh_name("p"), fresh_name("q")
        return Inlr3(scrut,
                     _abs(p, gen(left_goal, {**extra, p: scrut_prop.left})),
                     _abs(q, gen(right_goal, {**extra, q: scrut_prop.right})))

    if number == 1:
        return ctx, TopElim(Star(), gen(goal)), goal
    if number == 2:
        return ctx, App(_lam(e, x, gen(goal, {x: e})), gen(e)), goal
    if number in (3, 4):
        node = AndElim1 if number == 3 else AndElim2
        bound = e if number == 3 else f
        return ctx, node(Pair(gen(e), gen(f)),
                         _abs(x, gen(goal, {x: bound}))), goal
    if number in (5, 6):
        scrut = Inl(gen(e)) if number == 5 else Inr(gen(f))
        return ctx, Case(scrut, _abs(x, gen(goal, {x: e})),
                         _abs(y, gen(goal, {y: f}))), goal
    if number == 7:
        u1 = gen(b1, {x1: a1})
        u2 = gen(b2, {x2: a2})
        t = Case(Inlr3(Var("s"), _abs(x1, u1), _abs(x2, u2)),
                 _abs(y1, gen(goal, {y1: b1})),
                 _abs(y2, gen(goal, {y2: b2})))
        return ctx, t, goal
    if 8 <= number <= 12:
        prop = {8: Top(), 9: Impl(e, f), 10: Conj(e, f),
                11: Disj(e, f), 12: Disj(e, f)}[number]
        return ctx, BotElim(prop, Var("bb")), prop
    if 13 <= number <= 18:
        unit = gen(Top())
        if number == 13:
            return ctx, TopElim(unit, Star()), Top()
        if number == 14:
            return ctx, TopElim(unit, _lam(e, x, gen(f, {x: e}))), Impl(e, f)
        if number == 15:
            return ctx, TopElim(unit, Pair(gen(e), gen(f))), Conj(e, f)
        if number == 16:
            return ctx, TopElim(unit, Inl(gen(e))), Disj(e, f)
        if number == 17:
            return ctx, TopElim(unit, Inr(gen(f))), Disj(e, f)
        return ctx, TopElim(unit, inlr3(Disj(b1, b2), e, f, {})), Disj(e, f)
    if 19 <= number <= 30:
        node = AndElim1 if number <= 24 else AndElim2
        sub = (number - 19) % 6
        pair = Pair(gen(e), gen(f))
        bound = e if number <= 24 else f
        extra = {x: bound}
        if sub == 0:
            return ctx, node(pair, _abs(x, Star())), Top()
        if sub == 1:
            body = _lam(c, y, gen(goal, {**extra, y: c}))
            return ctx, node(pair, _abs(x, body)), Impl(c, goal)
        if sub == 2:
            body = Pair(gen(e, extra), gen(f, extra))
            return ctx, node(pair, _abs(x, body)), Conj(e, f)
        if sub == 3:
            return ctx, node(pair, _abs(x, Inl(gen(e, extra)))), Disj(e, f)
        if sub == 4:
            return ctx, node(pair, _abs(x, Inr(gen(f, extra)))), Disj(e, f)
        # the commuted scrutinee must not use the projection binder
        body = Inlr3(Var("t1v"),
                     _abs(y1, gen(e, {**extra, y1: b1})),
                     _abs(y2, gen(f, {**extra, y2: b2})))
        return ctx, node(pair, _abs(x, body)), Disj(e, f)
    if 31 <= number <= 42:
        def branch(kind, binder, bound):
            extra = {binder: bound}
            if kind == "star":
                return Star()
            if kind == "lam":
                return _lam(c, y, gen(d, {**extra, y: c}))
            if kind == "pair":
                return Pair(gen(e, extra), gen(f, extra))
            if kind == "inl1":
                return Inl(gen(b1, extra))
            if kind == "inr2":
                return Inr(gen(b2, extra))
            if kind == "inl-e":
                return Inl(gen(e, extra))
            if kind == "inr-f":
                return Inr(gen(f, extra))
            if kind == "inlr-left":
                return Inlr3(Var("t1v"),
                             _abs(y1, gen(b1, {**extra, y1: b1})),
                             _abs(y2, gen(b2, {**extra, y2: b2})))
            return Inlr3(Var("t2v"),
                         _abs(y1, gen(b1, {**extra, y1: b3})),
                         _abs(y2, gen(b2, {**extra, y2: b4})))

        shapes = {
            31: ("star", "star", Top()),
            32: ("lam", "lam", Impl(c, d)),
            33: ("pair", "pair", Conj(e, f)),
            34: ("inl-e", "inl-e", Disj(e, f)),
            35: ("inl1", "inr2", Disj(b1, b2)),
            36: ("inl1", "inlr-right", Disj(b1, b2)),
            37: ("inr2", "inl1", Disj(b1, b2)),
            38: ("inr-f", "inr-f", Disj(e, f)),
            39: ("inr2", "inlr-right", Disj(b1, b2)),
            40: ("inlr-left", "inl1", Disj(b1, b2)),
            41: ("inlr-left", "inr2", Disj(b1, b2)),
            42: ("inlr-left", "inlr-right", Disj(b1, b2)),
        }
        left_kind, right_kind, expected = shapes[number]
        t = Case(Var("s"), _abs(x1, branch(left_kind, x1, a1)),
                 _abs(x2, branch(right_kind, x2, a2)))
        return ctx, t, expected
    raise ValueError(f"no cc rule {number}")
