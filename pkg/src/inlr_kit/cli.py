"""Batch command-line front end.

Exit codes: 0 success, 1 type or syntax error, 2 stuck (zero-norm),
3 fuel exhausted, 4 usage.  All randomness flows from --seed through
counter-based streams, so identical invocations print identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cc import DEFAULT_FUEL_CC, normalize_cc
from .qencode import (compile_matrix, dump_vector_json, from_vector,
                      load_matrix_json, load_vector_json, to_vector,
                      EncodeError)
from .quantum import run_measure
from .rewrite import default_ruleset, normalize
from .selftest import SUITES
from .syntax import (CalculusError, ParseError, parse_prop, parse_term,
                     print_term)
from .typecheck import TypingError, infer

EXIT_OK = 0
EXIT_TYPE = 1
EXIT_STUCK = 2
EXIT_FUEL = 3
EXIT_USAGE = 4

DEFAULT_FUEL = {"iplus": 10 ** 6, "quantum": 10 ** 6, "cc": DEFAULT_FUEL_CC}


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _parse_file(path, calculus):
    return parse_term(_read(path), calculus)


def cmd_check(args):
    try:
        t = _parse_file(args.file, args.calculus)
        prop = infer(args.calculus, {}, t)
    except (ParseError, CalculusError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TYPE
    except TypingError as e:
        print(e.render(), file=sys.stderr)
        print(json.dumps(e.to_json(), sort_keys=True))
        return EXIT_TYPE
    from .syntax import print_prop

    print(print_prop(prop))
    return EXIT_OK


def cmd_norm(args):
    try:
        t = _parse_file(args.file, args.calculus)
    except (ParseError, CalculusError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TYPE
    from .rng import derive_rng

    fuel = args.fuel if args.fuel is not None else DEFAULT_FUEL[args.calculus]
    if args.enumerate:
        if args.calculus != "cc":
            print("error: --enumerate only applies to the cc calculus",
                  file=sys.stderr)
            return EXIT_USAGE
        graph = normalize_cc(t, fuel=min(fuel, 10 ** 4), policy="enumerate")
        for i in sorted(graph.normal_forms):
            print(print_term(graph.terms[i]))
        print(graph.to_dot())
        return EXIT_OK
    trace = normalize(t, default_ruleset(args.calculus), fuel=fuel,
                      rng=derive_rng(args.seed, 0x40))
    if args.trace:
        for line in trace.step_lines():
            print(line)
    outcome = trace.outcome
    if outcome.kind == "normal-form":
        print(print_term(outcome.term))
        return EXIT_OK
    if outcome.kind == "stuck":
        print(print_term(outcome.term))
        print(f"stuck: {outcome.reason}", file=sys.stderr)
        return EXIT_STUCK
    print(print_term(outcome.term))
    print(f"fuel exhausted after {len(trace.steps)} steps", file=sys.stderr)
    return EXIT_FUEL


def cmd_measure(args):
    try:
        t = _parse_file(args.file, "quantum")
        infer("quantum", {}, t)
    except (ParseError, CalculusError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TYPE
    except TypingError as e:
        print(e.render(), file=sys.stderr)
        return EXIT_TYPE
    hist = run_measure(t, shots=args.shots, seed=args.seed, fuel=args.fuel)
    print(hist.to_json())
    if any(b["term"].startswith("<stuck") for b in hist.bins):
        return EXIT_STUCK
    if any(b["term"].startswith("<fuel") for b in hist.bins):
        return EXIT_FUEL
    return EXIT_OK


def cmd_compile_matrix(args):
    try:
        m = load_matrix_json(_read(args.matrix))
        a = parse_prop(args.from_prop, "quantum")
        b = parse_prop(args.to_prop, "quantum")
        t = compile_matrix(m, a, b)
    except (ParseError, CalculusError, EncodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TYPE
    print(print_term(t))
    return EXIT_OK


def cmd_encode(args):
    if (args.vec is None) == (args.term is None):
        print("error: encode needs exactly one of --vec or --term",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        prop = parse_prop(args.prop, "quantum")
        if args.vec is not None:
            v = load_vector_json(_read(args.vec))
            print(print_term(from_vector(v, prop)))
        else:
            t = _parse_file(args.term, "quantum")
            print(dump_vector_json(to_vector(t, prop)))
    except (ParseError, CalculusError, EncodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TYPE
    return EXIT_OK


def cmd_demo_opt(args):
    from .cc import demo_optimization

    print(demo_optimization().render())
    return EXIT_OK


def cmd_selftest(args):
    results = SUITES[args.suite](args.samples, args.seed)
    ok = True
    for r in results:
        print(r.line())
        ok = ok and r.ok
    return EXIT_OK if ok else EXIT_TYPE


def build_parser():
    p = argparse.ArgumentParser(
        prog="inlr",
        description="proof-term workbench for the inlr calculi")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="type-check a term file")
    c.add_argument("file")
    c.add_argument("--calculus", required=True,
                   choices=("iplus", "quantum", "cc"))
    c.set_defaults(fn=cmd_check)

    n = sub.add_parser("norm", help="normalize a term file")
    n.add_argument("file")
    n.add_argument("--calculus", required=True,
                   choices=("iplus", "quantum", "cc"))
    n.add_argument("--fuel", type=int, default=None)
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--trace", action="store_true")
    n.add_argument("--enumerate", action="store_true",
                   help="cc only: explore all reduction alternatives and "
                        "print the reachable normal forms plus a DOT graph")
    n.set_defaults(fn=cmd_norm)

    m = sub.add_parser("measure", help="run a quantum term many times")
    m.add_argument("file")
    m.add_argument("--shots", type=int, default=1000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--fuel", type=int, default=10 ** 6)
    m.set_defaults(fn=cmd_measure)

    cm = sub.add_parser("compile-matrix",
                        help="compile a complex matrix to a closed proof")
    cm.add_argument("matrix")
    cm.add_argument("--from", dest="from_prop", required=True)
    cm.add_argument("--to", dest="to_prop", required=True)
    cm.set_defaults(fn=cmd_compile_matrix)

    e = sub.add_parser("encode", help="convert vectors and terms")
    e.add_argument("--vec")
    e.add_argument("--term")
    e.add_argument("--prop", required=True)
    e.set_defaults(fn=cmd_encode)

    d = sub.add_parser("demo-opt",
                       help="show the commuting-cut optimization routes")
    d.set_defaults(fn=cmd_demo_opt)

    s = sub.add_parser("selftest", help="run a property suite")
    s.add_argument("--suite", required=True, choices=sorted(SUITES))
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_selftest)

    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
