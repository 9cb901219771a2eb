"""Acceptance gate: the ten criteria at their stated sizes, tolerances and time limits.

Every test prints one PASS/FAIL line straight to the terminal. Running the file as a
script prints the same ten lines without pytest.
"""

import sys

import pytest

from symspace.verify import run_suite

SEED = 20240601

# criterion -> (suite, instances, runtime limit in seconds or None, summary)
CRITERIA = {
    1: ("rearrangement", 10000, 10, "sort-based xi equals inverse-distribution xi; xi of xi is xi"),
    2: ("norm-transfer", 10000, None, "norm(f) equals norm_of_profile(xi_f); exact, Lp within 2^-40"),
    3: ("aoki-rolewicz", 10000, None, "exponents for C=2 and C=1 exact; p-subadditivity for p in {1/3,1/2,1}"),
    4: ("embedding", 10000, None, "embedding inequality; f0 with L2 gives (6, sqrt 13, 3)"),
    5: ("duality", 1000, 60, "analytic vs oracle within 2^-20; contraction; E1 = E111 within 2^-15 on 200"),
    6: ("counterexample", 100, None, "LInfPlusTail of the unit tail is 2; property C gap is 1"),
    7: ("minimality", 100, None, "cutoffs of f0 vanish by n=4; LInf support residual stays >= 1"),
    8: ("transport", 10000, None, "transport map preserves mass and f = xi o phi exactly"),
    9: ("stone", 500, 30, "ultrafilters match atoms; Stone map isomorphism; factor integrals"),
    10: ("hardy-littlewood", 200, None, "int fg <= hl_pairing over all 720 permutations"),
}


def evaluate(number):
    suite, n, limit, summary = CRITERIA[number]
    res = run_suite(suite, n, SEED)
    in_time = limit is None or res.elapsed < limit
    ok = res.passed and in_time
    timing = f"{res.elapsed:.1f}s" + (f" (limit {limit}s)" if limit else "")
    line = (
        f"criterion {number:2d} [{suite}] {'PASS' if ok else 'FAIL'}: {summary}; "
        f"{res.checked - res.failures}/{res.checked} checks, {timing}"
    )
    if res.counterexample:
        line += f"; first counterexample {res.counterexample}"
    return ok, line, res


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line, res = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert res.passed, line
    assert ok, line


if __name__ == "__main__":
    failures = 0
    for k in sorted(CRITERIA):
        ok, line, _ = evaluate(k)
        failures += not ok
        print(line)
    sys.exit(1 if failures else 0)
