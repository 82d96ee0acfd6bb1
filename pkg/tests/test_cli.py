"""Golden-file tests for the command line.

Every case pins the full stdout and the exit code; each one is run twice
to confirm byte-identical output under a fixed seed.  Regenerate the
pinned outputs with `python tests/golden/regen.py` after an intentional
change and review the diff.
"""

import io
import os
from contextlib import redirect_stdout

import pytest

from inlr_kit.cli import main

HERE = os.path.dirname(__file__)
GOLDEN = os.path.join(HERE, "golden")


def g(name):
    return os.path.join(GOLDEN, name)


# (case name, argv, expected exit code)
CASES = [
    ("norm_sum_inj",
     ["norm", g("t_sum_inj.inlr"), "--calculus", "iplus"], 0),
    ("norm_beta_trace",
     ["norm", g("t_beta.inlr"), "--calculus", "iplus", "--trace"], 0),
    ("norm_sum_pairs_trace",
     ["norm", g("t_sum_pairs.inlr"), "--calculus", "iplus", "--trace"], 0),
    ("norm_scalar_sum",
     ["norm", g("t_scalar_sum.inlr"), "--calculus", "quantum"], 0),
    ("norm_cc_commute",
     ["norm", g("t_cc_commute.inlr"), "--calculus", "cc"], 0),
    ("norm_nd_seeded",
     ["norm", g("t_nd_seeded.inlr"), "--calculus", "quantum",
      "--seed", "5", "--trace"], 0),
    ("norm_fuel_out",
     ["norm", g("t_sum_pairs.inlr"), "--calculus", "iplus",
      "--fuel", "1"], 3),
    ("norm_zero_stuck",
     ["norm", g("t_pi1_zero.inlr"), "--calculus", "quantum"], 2),
    ("norm_bot_choice",
     ["norm", g("t_bot_choice.inlr"), "--calculus", "cc"], 0),
    ("norm_cc_enumerate",
     ["norm", g("t_bot_choice.inlr"), "--calculus", "cc",
      "--enumerate"], 0),
    ("check_case_swap",
     ["check", g("t_case_swap.inlr"), "--calculus", "iplus"], 0),
    ("check_quantum_id",
     ["check", g("t_quantum_id.inlr"), "--calculus", "quantum"], 0),
    ("check_cc_inlr",
     ["check", g("t_cc_inlr.inlr"), "--calculus", "cc"], 0),
    ("check_linear_bad",
     ["check", g("t_linear_bad.inlr"), "--calculus", "quantum"], 1),
    ("check_gate",
     ["check", g("t_gate.inlr"), "--calculus", "cc"], 1),
    ("measure_balanced",
     ["measure", g("t_pi1_balanced.inlr"), "--shots", "400",
      "--seed", "7"], 0),
    ("measure_weighted",
     ["measure", g("t_pi1_weighted.inlr"), "--shots", "500",
      "--seed", "8"], 0),
    ("measure_zero",
     ["measure", g("t_pi1_zero.inlr"), "--shots", "20", "--seed", "9"], 2),
    ("compile_hadamard",
     ["compile-matrix", g("hadamard.json"),
      "--from", "One (+) One", "--to", "One (+) One"], 0),
    ("compile_rect",
     ["compile-matrix", g("rect32.json"),
      "--from", "One (+) One", "--to", "One (+) (One (+) One)"], 0),
    ("encode_ket0",
     ["encode", "--vec", g("ket0.json"), "--prop", "One (+) One"], 0),
    ("encode_vec3",
     ["encode", "--vec", g("vec3.json"),
      "--prop", "One (+) (One (+) One)"], 0),
    ("encode_term_to_vec",
     ["encode", "--term", g("t_state3.inlr"),
      "--prop", "One (+) (One (+) One)"], 0),
    ("encode_usage_error",
     ["encode", "--prop", "One"], 4),
    ("demo_opt", ["demo-opt"], 0),
    ("selftest_iplus",
     ["selftest", "--suite", "iplus", "--samples", "15", "--seed", "2"], 0),
    ("selftest_cc",
     ["selftest", "--suite", "cc", "--samples", "42", "--seed", "2"], 0),
]


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


@pytest.mark.parametrize("name,argv,want_code",
                         CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, want_code):
    with open(g(name + ".out"), "r", encoding="utf-8") as fh:
        want = fh.read()
    code1, out1 = run_cli(argv)
    code2, out2 = run_cli(argv)
    assert code1 == want_code
    assert code2 == want_code
    assert out1 == out2, "output must be byte-identical across runs"
    assert out1 == want


def test_at_least_twenty_cases():
    assert len(CASES) >= 20
