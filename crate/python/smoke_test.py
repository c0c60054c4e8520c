"""Smoke test for the biharm_verify extension module.

Build it first with `pip install -e crates/python --no-build-isolation`.
"""

import json
import sys

import biharm_verify as bv


def main() -> int:
    steps = bv.list_steps()
    assert len(steps) >= 45, len(steps)
    assert any(s[0] == "A.F30" for s in steps)

    report = json.loads(bv.run())
    summary = report["summary"]
    assert summary["mismatch"] == 0, summary
    by_id = {s["id"]: s for s in report["steps"]}
    assert by_id["A.F30"]["status"] == "MATCH_UP_TO_SCALAR"
    assert by_id["R.44.U2"]["status"] == "DEGENERATE"
    assert by_id["E.B"]["status"] == "SKIPPED"

    assert bv.run(step="E.D") == bv.run(step="E.D")
    assert bv.canonical("(lam + 1)^2") == "lam^2 + 2*lam + 1"
    assert bv.simplify("(lam^2 - 1)/(lam - 1)") == "lam + 1"
    assert bv.count_real_roots([2, 6, 15]) == 0
    assert bv.count_real_roots([-2, 0, 1]) == 2

    try:
        bv.canonical("lam/lam'")
    except ValueError:
        pass
    else:
        raise AssertionError("division by a variable was accepted")

    print(f"ok: {len(steps)} steps, summary {summary}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
