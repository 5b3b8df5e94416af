"""Acceptance criteria A1-A9, the branching-process check and the property suite.

Every criterion runs at its full sample size on the default grid (ds = 1e-4).
One PASS/FAIL line per criterion is printed as it finishes and repeated in
the terminal summary.  Run standalone with ``python3 tests/test_acceptance.py``.
"""
import sys

import pytest

from brownian_snake.verify import Verifier

CRITERIA = [("A1", "a1"), ("A2", "a2"), ("A3", "a3"), ("A4", "a4"), ("A5", "a5"),
            ("A6", "a6"), ("A7", "a7"), ("A8", "a8"), ("A9", "a9"),
            ("CSBP", "csbp_check"), ("P-suite", "properties")]

LINES = {}


@pytest.fixture(scope="session")
def verifier():
    return Verifier(seed=0)


def evaluate(verifier, method):
    res = getattr(verifier, method)()
    LINES[res.name] = res.line()
    print(res.line(), file=sys.__stdout__, flush=True)
    return res


@pytest.mark.acceptance
@pytest.mark.parametrize("label, method", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(verifier, label, method):
    res = evaluate(verifier, method)
    assert res.name == label
    assert res.passed, res.summary


if __name__ == "__main__":
    ver = Verifier(seed=0)
    failed = [label for label, method in CRITERIA if not evaluate(ver, method).passed]
    sys.exit(1 if failed else 0)
