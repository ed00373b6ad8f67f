"""Exact enumeration of B_{n1} + B_{n2} = 2^{a1} + ... + 2^{ak}, k = 1, 2, 3."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .realnum import DEFAULT_PRECISION, TAU
from .sequence import balancing


@dataclass(frozen=True, order=True)
class Solution:
    n1: int
    n2: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.n1 < self.n2 or self.n2 < 0:
            raise ValueError("need n1 >= n2 >= 0")
        if not 1 <= len(self.exponents) <= 3:
            raise ValueError("k must be 1, 2 or 3")
        if any(a < b for a, b in zip(self.exponents, self.exponents[1:])) or min(self.exponents) < 0:
            raise ValueError("exponents must be non-negative and non-increasing")

    @property
    def k(self) -> int:
        return len(self.exponents)

    def as_tuple(self) -> tuple[int, ...]:
        return (self.n1, self.n2, *self.exponents)

    @classmethod
    def from_tuple(cls, values) -> "Solution":
        n1, n2, *exps = (int(v) for v in values)
        return cls(n1, n2, tuple(exps))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.as_tuple())) + ")"


@dataclass(frozen=True)
class SearchBounds:
    n1_max: int
    a1_max: int

    def __post_init__(self):
        if self.n1_max < 1 or self.a1_max < 1:
            raise ValueError("search bounds must be positive")


def a1_bound(n1_max: int, precision: int = DEFAULT_PRECISION) -> int:
    """Ceiling of 1 + n1_max * log(alpha)/log(2).

    Any solution satisfies n1 > (a1 - 1) log 2 / log alpha, i.e.
    a1 < 1 + n1 * log alpha / log 2; the bound is that right side rounded up.
    """
    if n1_max < 1:
        raise ValueError("n1_max must be positive")
    bound = TAU.eval(precision + n1_max.bit_length()) * n1_max + 1
    return bound.ceil_upper()


def decompose_as_powers(s: int, k: int) -> list[tuple[int, ...]]:
    """All non-increasing (a1, ..., ak) with s = sum 2**ai."""
    if s < 1:
        raise ValueError("s must be positive")
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    out: list[tuple[int, ...]] = []
    _peel(s, k, s.bit_length() - 1, (), out)
    return out


def _peel(s: int, k: int, cap: int, prefix: tuple[int, ...], out: list) -> None:
    if k == 0:
        if s == 0:
            out.append(prefix)
        return
    # the largest remaining power is at most 2^cap and at least s/k
    a = min(cap, s.bit_length() - 1)
    while a >= 0 and k << a >= s:
        if s - (1 << a) >= k - 1:
            _peel(s - (1 << a), k - 1, a, prefix + (a,), out)
        a -= 1


def verify(sol: Solution) -> bool:
    return balancing(sol.n1) + balancing(sol.n2) == sum(1 << a for a in sol.exponents)


def _solve_rows(k: int, n1_values: list[int], a1_max: int) -> list[Solution]:
    found = []
    for n1 in n1_values:
        b1 = balancing(n1)
        for n2 in range(n1 + 1):
            s = b1 + balancing(n2)
            if s == 0:
                continue
            for exps in decompose_as_powers(s, k):
                if exps[0] <= a1_max:
                    found.append(Solution(n1, n2, exps))
    return found


def solve(k: int, bounds: SearchBounds, jobs: int = 1) -> list[Solution]:
    """Every solution with n1 <= bounds.n1_max, sorted lexicographically."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if bounds.a1_max < a1_bound(bounds.n1_max):
        raise ValueError(
            f"a1_max={bounds.a1_max} is below a1_bound({bounds.n1_max})="
            f"{a1_bound(bounds.n1_max)}")
    rows = list(range(bounds.n1_max + 1))
    if jobs <= 1:
        found = _solve_rows(k, rows, bounds.a1_max)
    else:
        chunks = [rows[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_solve_rows, [k] * jobs, chunks, [bounds.a1_max] * jobs)
            found = [s for part in parts for s in part]
    return sorted(set(found))


# Solution lists as printed in the source article, for diffing.
PRINTED_SOLUTIONS = {
    3: [(2, 0, 1, 1, 1), (2, 0, 2, 0, 0), (2, 1, 2, 1, 0), (2, 2, 2, 2, 2), (2, 2, 3, 1, 1),
        (3, 0, 5, 1, 0), (3, 1, 4, 4, 2), (3, 1, 5, 1, 1), (3, 2, 5, 3, 0), (3, 3, 6, 2, 1)],
    2: [(1, 1, 0, 0), (2, 0, 2, 1), (2, 2, 3, 2), (3, 1, 5, 2)],
    1: [(1, 1, 0), (1, 1, 1)],
}


def diff_against_printed(k: int, computed: list[Solution]) -> dict:
    printed = [Solution.from_tuple(t) for t in PRINTED_SOLUTIONS[k]]
    comp = set(computed)
    return {
        "printed": printed,
        "printed_only": [s for s in printed if s not in comp],
        "computed_only": sorted(s for s in comp if s not in set(printed)),
        "printed_failing_verification": [s for s in printed if not verify(s)],
    }
