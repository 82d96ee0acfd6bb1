"""Regenerate the pinned CLI outputs.  Review the diff before committing."""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from test_cli import CASES, g, run_cli  # noqa: E402


def main():
    for name, argv, want_code in CASES:
        code, out = run_cli(argv)
        if code != want_code:
            print(f"warning: {name} exited {code}, expected {want_code}")
        with open(g(name + ".out"), "w", encoding="utf-8") as fh:
            fh.write(out)
        print(f"wrote {name}.out ({len(out)} bytes, exit {code})")


if __name__ == "__main__":
    main()
