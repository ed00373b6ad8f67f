"""Balancing numbers B_n: B_0 = 0, B_1 = 1, B_{n+1} = 6 B_n - B_{n-1}."""
from __future__ import annotations

from fractions import Fraction

from .realnum import Interval, PrecisionError, alpha_power, sqrt2

DEFAULT_INDEX_CAP = 1100


class BalancingTable:
    """Memoized prefix B_0..B_cap; read-only once built."""

    def __init__(self, cap: int = DEFAULT_INDEX_CAP):
        values = [0, 1]
        for _ in range(cap - 1):
            values.append(6 * values[-1] - values[-2])
        self._values = tuple(values[: cap + 1])
        self.cap = cap

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError("balancing index must be non-negative")
        if n > self.cap:
            return _balancing_pair(n)[0]
        return self._values[n]

    def __len__(self) -> int:
        return self.cap + 1


def _balancing_pair(n: int) -> tuple[int, int]:
    """(B_n, B_{n+1}) by doubling, for indices past the memoized prefix.

    Uses B_{2k} = B_k (2 B_{k+1} - 6 B_k) and B_{2k+1} = B_{k+1}^2 - B_k^2.
    """
    if n == 0:
        return 0, 1
    b, c = _balancing_pair(n >> 1)
    even = b * (2 * c - 6 * b)
    odd = c * c - b * b
    if n & 1:
        return odd, 6 * odd - even
    return even, odd


_TABLE: BalancingTable | None = None


def table() -> BalancingTable:
    global _TABLE
    if _TABLE is None:
        _TABLE = BalancingTable()
    return _TABLE


def balancing(n: int) -> int:
    """Exact B_n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return table()[n]


def binet_interval(n: int, precision: int) -> Interval:
    """Enclosure of (alpha**n - beta**n) / (4 sqrt 2), absolute width ~2**-precision."""
    w = precision + 16 + 3 * n     # alpha**n has about 2.55 n integer bits
    a = alpha_power(n, w)
    b = alpha_power(-n, w)           # beta = 1/alpha
    return (a - b) / (sqrt2(w) * 4)


def binet_residual(n: int, precision: int) -> Fraction:
    """Upper bound on |B_n - (alpha^n - beta^n)/(4 sqrt 2)| at ``precision`` bits.

    The contract is residual < 2**(-precision/2) whenever precision >= 4n;
    if the enclosure is too wide for that, PrecisionError is raised instead
    of returning a meaningless number.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    iv = binet_interval(n, precision)
    diff = abs(iv - balancing(n))
    bound = Fraction(1, 1 << (precision // 2))
    if precision >= 4 * n and diff.upper >= bound:
        raise PrecisionError(f"Binet residual for n={n} not certified at {precision} bits")
    return diff.upper


def growth_bounds_hold(n: int) -> bool:
    """Certify alpha**(n-1) < B_n < alpha**n with outward-rounded powers."""
    if n <= 1:
        raise ValueError("growth bounds are stated for n > 1")
    b = balancing(n)
    w = 64 + 4 * n
    while True:
        lo_pow = alpha_power(n - 1, w)
        hi_pow = alpha_power(n, w)
        below = lo_pow.certainly_less(b)
        above = Interval.exact(b).certainly_less(hi_pow)
        if below and above:
            return True
        # both sides are decided once the enclosures are narrow enough
        if lo_pow.lower > b or hi_pow.upper < b:
            return False
        if w > 1 << 16:
            raise PrecisionError(f"growth bounds undecided for n={n}")
        w *= 2
