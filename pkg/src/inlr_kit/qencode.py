"""Vectors and matrices as proofs, and the numeric oracle they are checked
against.

Closed irreducible proofs of a vector proposition (built from One and (+))
denote dense complex vectors; the denotation reads scalars at One leaves,
concatenates blocks under inlr, and zero-pads under inl/inr.  A complex
matrix compiles to a closed proof of ``A -o B`` that agrees with numpy's
matrix-vector product on every input.  The measurement operator builders
live here too.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .quantum import RULES_QUANTUM_DET, is_vector_prop
from .rewrite import normalize
from .rng import derive_rng
from .syntax import (App, Case, CaseNd, Inl, Inlr2, Inr, Lam, OneElim,
                     OPlus, One, Prod, Proposition, ScalarStar, Sum, Term,
                     Var, close_term, fresh_name, print_term)


class EncodeError(Exception):
    pass


class NotVectorProp(EncodeError):
    pass


def dim(p: Proposition) -> int:
    """Number of One leaves of a vector proposition."""
    if isinstance(p, One):
        return 1
    if isinstance(p, OPlus):
        return dim(p.left) + dim(p.right)
    raise NotVectorProp(f"not a vector proposition: {p}")


def qn_prop(n: int) -> Proposition:
    """The balanced vector proposition of dimension 2^n."""
    p = One()
    for _ in range(n):
        p = OPlus(p, p)
    return p


BOOL_PROP = qn_prop(1)


def to_vector(t: Term, p: Proposition, fuel: int = 10 ** 6) -> np.ndarray:
    """Denote a closed proof of vector proposition p as a complex vector.

    The term is normalized first; the denotation is defined on the
    irreducible form.
    """
    if not is_vector_prop(p):
        raise NotVectorProp(f"not a vector proposition: {p}")
    tr = normalize(t, RULES_QUANTUM_DET, fuel=fuel)
    if tr.outcome.kind != "normal-form":
        raise EncodeError(f"term does not normalize: {tr.outcome.kind}")
    out = np.zeros(dim(p), dtype=np.complex128)

    def read(t, p, offset):
        if isinstance(p, One):
            if not isinstance(t, ScalarStar):
                raise EncodeError(
                    f"shape mismatch against {p}: {print_term(t)}")
            out[offset] = t.value
            return
        if isinstance(t, Inlr2):
            read(t.left, p.left, offset)
            read(t.right, p.right, offset + dim(p.left))
        elif isinstance(t, Inl):
            read(t.body, p.left, offset)
        elif isinstance(t, Inr):
            read(t.body, p.right, offset + dim(p.left))
        else:
            raise EncodeError(f"shape mismatch against proposition: "
                              f"{print_term(t)}")

    read(tr.final, p, 0)
    return out


def from_vector(v, p: Proposition) -> Term:
    """The inl/inr-free irreducible proof denoting v at proposition p."""
    v = np.asarray(v, dtype=np.complex128)
    n = dim(p)
    if v.shape != (n,):
        raise EncodeError(f"dimension mismatch: vector {v.shape}, "
                          f"proposition wants ({n},)")

    def build(v, p):
        if isinstance(p, One):
            return ScalarStar(complex(v[0]))
        k = dim(p.left)
        return Inlr2(build(v[:k], p.left), build(v[k:], p.right))

    return build(v, p)


def compile_matrix(m, a: Proposition, b: Proposition) -> Term:
    """A closed proof of ``a -o b`` computing the matrix-vector product.

    Single-column matrices become ``lam x. one_elim(x, <column>)``; wider
    ones split into column blocks and dispatch on the input with case.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (dim(b), dim(a)):
        raise EncodeError(f"matrix shape {m.shape} does not fit "
                          f"{dim(b)}x{dim(a)}")
    if isinstance(a, One):
        x = fresh_name("x")
        body = OneElim(Var(x), from_vector(m[:, 0], b))
        return Lam(a, close_term(body, x, hint="x"))
    k = dim(a.left)
    t1 = compile_matrix(m[:, :k], a.left, b)
    t2 = compile_matrix(m[:, k:], a.right, b)
    x, y, z = fresh_name("x"), fresh_name("y"), fresh_name("z")
    body = Case(Var(x),
                close_term(App(t1, Var(y)), y, hint="y"),
                close_term(App(t2, Var(z)), z, hint="z"))
    return Lam(a, close_term(body, x, hint="x"))


# ---------------------------------------------------------------------------
# Measurement operators

def zero_term(n: int) -> Term:
    """The zero vector of the balanced proposition of dimension 2^n."""
    t = ScalarStar(0.0)
    for _ in range(n):
        t = Inlr2(t, t)
    return t


def boolzero() -> Term:
    return Inl(ScalarStar(1.0))


def boolone() -> Term:
    return Inr(ScalarStar(1.0))


def delta_qn(n: int, b: Term, var: str = "x") -> Term:
    """Consume a balanced vector of dimension 2^n held in `var`, return b.

    The n = 0 case is plain one_elim; each further level eliminates one
    case_nd layer on both branches.
    """
    if n == 0:
        return OneElim(Var(var), b)
    y, z = fresh_name("y"), fresh_name("z")
    return CaseNd(Var(var),
                  close_term(delta_qn(n - 1, b, var=y), y, hint="y"),
                  close_term(delta_qn(n - 1, b, var=z), z, hint="z"))


def meas_first(n: int) -> Term:
    """Measure the first qubit of a 2^n-dimensional state; returns the
    Boolean outcome."""
    if n < 1:
        raise ValueError("meas_first needs n >= 1")
    x, y, z = fresh_name("x"), fresh_name("y"), fresh_name("z")
    body = CaseNd(Var(x),
                  close_term(delta_qn(n - 1, boolzero(), var=y), y, hint="y"),
                  close_term(delta_qn(n - 1, boolone(), var=z), z, hint="z"))
    return Lam(qn_prop(n), close_term(body, x, hint="x"))


def meas_state(n: int) -> Term:
    """Measure the first qubit; returns the post-measurement state."""
    if n < 1:
        raise ValueError("meas_state needs n >= 1")
    x, y, z = fresh_name("x"), fresh_name("y"), fresh_name("z")
    body = CaseNd(Var(x),
                  close_term(Inlr2(Var(y), zero_term(n - 1)), y, hint="y"),
                  close_term(Inlr2(zero_term(n - 1), Var(z)), z, hint="z"))
    return Lam(qn_prop(n), close_term(body, x, hint="x"))


# ---------------------------------------------------------------------------
# Linearity checking at vector observables

@dataclass
class LinearMapReport:
    trials: int
    max_error: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _random_vector(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def check_linear_map(t: Term, a: Proposition, b: Proposition, trials: int,
                     tol: float, seed: int) -> LinearMapReport:
    """Probe a closed proof of ``a -o b`` for vector-space behaviour.

    Checks additivity, scalar homogeneity, and the sum laws (associativity
    and commutativity of the sum, distributivity of the product) on the
    denoted vectors, all within tol.
    """
    report = LinearMapReport(trials)
    n = dim(a)

    def apply(arg):
        return to_vector(App(t, arg), b)

    for trial in range(trials):
        rng = derive_rng(seed, 0x11AE, trial)
        u, v, w = (_random_vector(rng, n) for _ in range(3))
        scalar = complex(rng.standard_normal(), rng.standard_normal())
        ut, vt, wt = (from_vector(x, a) for x in (u, v, w))

        checks = [
            ("additive", apply(Sum(ut, vt)), apply(ut) + apply(vt)),
            ("homogeneous", apply(Prod(scalar, ut)), scalar * apply(ut)),
            ("sum-assoc", to_vector(Sum(Sum(ut, vt), wt), a),
             to_vector(Sum(ut, Sum(vt, wt)), a)),
            ("sum-comm", to_vector(Sum(ut, vt), a),
             to_vector(Sum(vt, ut), a)),
            ("prod-distrib", to_vector(Prod(scalar, Sum(ut, vt)), a),
             to_vector(Sum(Prod(scalar, ut), Prod(scalar, vt)), a)),
        ]
        for name, got, want in checks:
            err = float(np.max(np.abs(got - want))) if len(got) else 0.0
            report.max_error = max(report.max_error, err)
            if err > tol:
                report.failures.append((trial, name, err))
    return report


# ---------------------------------------------------------------------------
# Matrix file format

def load_matrix_json(text: str) -> np.ndarray:
    """Parse {"rows": n, "cols": m, "entries": [[re, im], ...]} (row-major)."""
    data = json.loads(text)
    rows, cols = int(data["rows"]), int(data["cols"])
    entries = data["entries"]
    if len(entries) != rows * cols:
        raise EncodeError(f"need {rows * cols} entries, got {len(entries)}")
    flat = [complex(float(re), float(im)) for re, im in entries]
    return np.array(flat, dtype=np.complex128).reshape(rows, cols)


def dump_matrix_json(m) -> str:
    m = np.asarray(m, dtype=np.complex128)
    entries = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return json.dumps({"rows": m.shape[0], "cols": m.shape[1],
                       "entries": entries})


def load_vector_json(text: str) -> np.ndarray:
    """Parse {"entries": [[re, im], ...]} or a bare [[re, im], ...] list."""
    data = json.loads(text)
    if isinstance(data, dict):
        data = data["entries"]
    return np.array([complex(float(re), float(im)) for re, im in data],
                    dtype=np.complex128)


def dump_vector_json(v) -> str:
    v = np.asarray(v, dtype=np.complex128)
    return json.dumps([[float(z.real), float(z.imag)] for z in v])
