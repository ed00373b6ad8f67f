"""Acceptance criteria 1-10, one check each.

Run under pytest (a summary section lists PASS/FAIL per criterion) or
directly: ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import json
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from conftest import ACCEPTANCE  # noqa: E402
from test_reduction import bd_reduce, observed_max_w, toy_problem  # noqa: E402
from test_search import naive_solve  # noqa: E402

from balancing_cert.linforms import PRINTED_STEP_BOUNDS, all_step_bounds, guzman_unwrap  # noqa: E402
from balancing_cert.pipeline import CASES, GAPS, PRINTED_REDUCTION_TABLE, full_certificate  # noqa: E402
from balancing_cert.realnum import LOG_ALPHA, TAU, Interval, cf_expand, convergent_error_certified, convergents  # noqa: E402
from balancing_cert.search import SearchBounds, a1_bound, solve  # noqa: E402

CLI = [sys.executable, "-m", "balancing_cert"]


def cli(*args: str) -> tuple[subprocess.CompletedProcess, float]:
    t = time.perf_counter()
    res = subprocess.run(CLI + list(args), capture_output=True, text=True)
    return res, time.perf_counter() - t


def check_1(cert=None):
    res, dt = cli("search", "--k", "3", "--n1-max", "100", "--format", "csv")
    same = res.returncode == 0 and res.stdout == (HERE / "golden" / "search_k3_n100.csv").read_text()
    rows = len(res.stdout.splitlines()) - 1
    return same and rows == 10 and dt < 10, f"{rows} tuples, golden match {same}, {dt:.2f}s"


def check_2(cert=None):
    got = [s.as_tuple() for s in solve(2, SearchBounds(100, a1_bound(100)))]
    want = [(1, 1, 0, 0), (2, 0, 2, 1), (2, 2, 3, 2), (3, 1, 5, 2)]
    return got == want, f"computed {got}"


def check_3(cert):
    k1 = cert.data["solutions"]["1"]
    disc = [d for d in cert.data["discrepancies"] if d["where"] == "solutions k=1"]
    ok = ("(1,1,1)" in k1["computed"] and "(1,1,0)" in k1["printed_failing_verification"]
          and {"solution": "(1,0,0)", "verifies": True} in k1["computed_only"] and bool(disc))
    return ok, f"computed {k1['computed']}, printed-but-failing {k1['printed_failing_verification']}, " \
               f"{len(disc)} k=1 discrepancies"


def check_4(cert=None):
    v = a1_bound(100)
    return v == 256, f"a1_bound(100) = {v}"


def check_5(cert=None):
    b = all_step_bounds()
    ok = Fraction("8.1e12") <= b[1].upper <= Fraction("8.22e12")
    ratios = []
    for s in range(2, 8):
        r = b[s].upper / PRINTED_STEP_BOUNDS[s][0]
        ratios.append(f"{float(r):.3f}")
        ok = ok and Fraction(9, 10) <= r <= 1
    return ok, f"C1 = {float(b[1].upper):.4e}, steps 2-7 / printed = {', '.join(ratios)}"


def check_6(cert=None):
    H = Interval.from_fraction(Fraction("4.73e50"), 256) / LOG_ALPHA.eval(256)
    g = guzman_unwrap(4, H)
    ok = Fraction("7.5e59") <= g.lower and g.upper <= Fraction("7.9e59")
    return ok, f"[{float(g.lower):.4e}, {float(g.upper):.4e}]"


def check_7(cert=None):
    res, dt = cli("reduce", "--format", "json")
    if res.returncode != 0:
        return False, f"reduce exited {res.returncode}: {res.stderr.strip()}"
    doc = json.loads(res.stdout)
    diffs = {(c, g): int(doc["table"][c][g]) - PRINTED_REDUCTION_TABLE[c][g] for c in CASES for g in GAPS}
    final = int(doc["final_n1_bound"])
    ok = all(d <= 4 for d in diffs.values()) and final <= 100 and dt < 300
    worst = max(diffs.values())
    return ok, f"max excess over printed {worst:+d}, final n1 <= {final}, {dt:.1f}s"


def check_8(cert=None):
    bound = a1_bound(30)
    same = [solve(k, SearchBounds(30, bound)) == naive_solve(k, 30, bound) for k in (1, 2, 3)]
    return all(same), f"k=1,2,3 equal to the naive grid: {same}"


def check_9(cert=None):
    rows = []
    ok = True
    for seed in range(5):
        problem, tau_mp, mu_mp = toy_problem(seed)
        w = bd_reduce(problem).w_bound
        seen = observed_max_w(problem, tau_mp, mu_mp)
        ok = ok and seen <= w
        rows.append(f"M={problem.M}: {seen}<={w}")
    return ok, "; ".join(rows)


def check_10(cert):
    cs = convergents(cf_expand(TAU, 140))
    close = all(convergent_error_certified(TAU, c) for c in cs)
    stable = cf_expand(TAU, 140, precision=512) == cf_expand(TAU, 140, precision=1024)
    res, _ = cli("certify")
    identical = res.returncode == 0 and res.stdout == cert.to_json()
    return close and stable and identical, \
        f"{len(cs)} convergents within 1/q^2 {close}, doubling-stable {stable}, certify bit-identical {identical}"


CHECKS = {i: globals()[f"check_{i}"] for i in range(1, 11)}


def _record(n: int, cert=None):
    ok, detail = CHECKS[n](cert)
    ACCEPTANCE[str(n)] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.mark.parametrize("n", [1, 2, 4, 5, 6, 7, 8, 9])
def test_criterion(n):
    _record(n)


@pytest.mark.parametrize("n", [3, 10])
def test_criterion_with_certificate(n, certificate):
    _record(n, certificate)


if __name__ == "__main__":
    cert = full_certificate()
    failed = 0
    for n, check in CHECKS.items():
        ok, detail = check(cert)
        failed += not ok
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
