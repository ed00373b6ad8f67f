import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from balancing_cert.search import (
    PRINTED_SOLUTIONS,
    SearchBounds,
    Solution,
    a1_bound,
    decompose_as_powers,
    diff_against_printed,
    solve,
    verify,
)
from balancing_cert.sequence import balancing

GOLDEN = Path(__file__).parent / "golden" / "search_k3_n100.csv"


def naive_sums(k: int, a_max: int) -> dict[int, set[tuple[int, ...]]]:
    out: dict[int, set] = {}
    for exps in itertools.combinations_with_replacement(range(a_max, -1, -1), k):
        out.setdefault(sum(2 ** a for a in exps), set()).add(exps)
    return out


def naive_solve(k: int, n1_max: int, a_max: int) -> list[Solution]:
    sums = naive_sums(k, a_max)
    found = []
    for n1 in range(n1_max + 1):
        for n2 in range(n1 + 1):
            for exps in sums.get(balancing(n1) + balancing(n2), ()):
                found.append(Solution(n1, n2, exps))
    return sorted(found)


@pytest.mark.parametrize("s,k,expected", [
    (7, 3, [(2, 1, 0)]),
    (8, 1, [(3,)]),
    (8, 2, [(2, 2)]),
    (8, 3, [(2, 1, 1)]),
    (6, 1, []),
    (3, 3, [(0, 0, 0)]),
    (36, 3, [(5, 1, 1), (4, 4, 2)]),
])
def test_decompose_examples(s, k, expected):
    assert decompose_as_powers(s, k) == expected


def test_decompose_rejects():
    with pytest.raises(ValueError):
        decompose_as_powers(0, 2)
    with pytest.raises(ValueError):
        decompose_as_powers(5, 4)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_decompose_exhaustive_small(k):
    sums = naive_sums(k, 14)
    for s in range(1, 2 ** 14 + 1):
        assert sorted(decompose_as_powers(s, k), reverse=True) == sorted(sums.get(s, ()), reverse=True)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_decompose_all_representable_to_2_20(k):
    for s, reps in naive_sums(k, 19).items():
        if s <= 2 ** 20:
            assert set(decompose_as_powers(s, k)) == reps


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 2 ** 200), st.sampled_from([1, 2, 3]))
def test_decompose_sound_and_sorted(s, k):
    got = decompose_as_powers(s, k)
    for exps in got:
        assert sum(2 ** a for a in exps) == s
        assert list(exps) == sorted(exps, reverse=True)
    assert len(set(got)) == len(got)
    # count of 1-bits bounds representability from below
    if bin(s).count("1") <= k and s >= k:
        assert got


@pytest.mark.parametrize("k", [1, 2, 3])
def test_solve_matches_naive_grid(k):
    # exhaustive cross-check at n1 <= 30 against a dictionary of all power sums
    bound = a1_bound(30)
    assert solve(k, SearchBounds(30, bound)) == naive_solve(k, 30, bound)


def test_printed_k3_list_recovered():
    sols = solve(3, SearchBounds(100, a1_bound(100)))
    assert [s.as_tuple() for s in sols] == PRINTED_SOLUTIONS[3]
    assert all(verify(s) for s in sols)


def test_k1_discrepancy_is_reported():
    sols = solve(1, SearchBounds(100, a1_bound(100)))
    d = diff_against_printed(1, sols)
    assert Solution(1, 1, (0,)) in d["printed_only"]
    assert Solution(1, 1, (0,)) in d["printed_failing_verification"]
    assert Solution(1, 1, (1,)) in sols


def test_k2_matches_printed_list():
    sols = solve(2, SearchBounds(100, a1_bound(100)))
    d = diff_against_printed(2, sols)
    assert not d["printed_only"] and not d["computed_only"]


@pytest.mark.parametrize("sol,ok", [
    ((3, 3, 6, 2, 1), True),
    ((3, 1, 4, 4, 2), True),
    ((2, 2, 2, 2, 2), True),
    ((3, 3, 6, 2, 0), False),
    ((1, 1, 0), False),
    ((1, 1, 1), True),
])
def test_verify_examples(sol, ok):
    assert verify(Solution.from_tuple(sol)) is ok


def test_solution_validation():
    with pytest.raises(ValueError):
        Solution(1, 2, (1,))
    with pytest.raises(ValueError):
        Solution(2, 1, (1, 2))
    with pytest.raises(ValueError):
        Solution(2, 1, ())
    with pytest.raises(ValueError):
        Solution(2, 1, (3, 2, 1, 0))


def test_a1_bound():
    assert a1_bound(100) == 256
    assert a1_bound(1) == 4
    with pytest.raises(ValueError):
        a1_bound(0)


def test_a1_bound_covers_every_solution():
    for k in (1, 2, 3):
        for s in solve(k, SearchBounds(100, 400)):
            assert s.exponents[0] < 1 + s.n1 * 2.5431066063272239 + 1e-9 or s.n1 == 0


def test_too_small_a1_max_rejected():
    with pytest.raises(ValueError, match="a1_bound"):
        solve(3, SearchBounds(100, 100))


def test_monotone_in_cutoff():
    small = set(solve(3, SearchBounds(50, a1_bound(50))))
    big = set(solve(3, SearchBounds(100, a1_bound(100))))
    assert small <= big
    assert {s for s in big if s.n1 <= 50} == small


def test_parallel_equals_serial():
    b = SearchBounds(60, a1_bound(60))
    assert solve(3, b, jobs=2) == solve(3, b, jobs=1)


def test_golden_file():
    sols = solve(3, SearchBounds(100, a1_bound(100)))
    lines = GOLDEN.read_text().splitlines()
    assert lines[0] == "n1,n2,a1,a2,a3"
    assert lines[1:] == [",".join(map(str, s.as_tuple())) for s in sols]
