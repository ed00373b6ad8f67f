"""Certified real arithmetic on dyadic fixed-point intervals.

An :class:`Interval` is a pair of Python integers ``lo <= hi`` read as
``[lo / 2**bits, hi / 2**bits]``.  Every operation rounds outward, so the
true value of any expression built from these operations stays inside the
result.  Elementary functions (square root, logarithm) are implemented on
integers with explicit truncation/remainder bounds; nothing here touches
binary floating point.

On top of that sit :class:`RealOracle` (a named constant that can be
evaluated to any requested absolute precision), continued-fraction expansion
with per-quotient certification, convergents, and the nearest-integer
distance used by the reduction step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

DEFAULT_PRECISION = 256
DEFAULT_PRECISION_CAP = 1 << 16


class PrecisionError(ArithmeticError):
    """A certified decision could not be reached below the precision cap."""


def _ceil_shift(x: int, k: int) -> int:
    return -((-x) >> k)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int
    bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    # -- construction -------------------------------------------------------

    @classmethod
    def exact(cls, n: int, bits: int = 0) -> "Interval":
        v = n << bits
        return cls(v, v, bits)

    @classmethod
    def from_fraction(cls, x, bits: int) -> "Interval":
        """Smallest grid interval at ``bits`` containing the rational ``x``."""
        x = Fraction(x)
        num = x.numerator << bits
        return cls(num // x.denominator, _ceil_div(num, x.denominator), bits)

    @classmethod
    def hull(cls, a: "Interval", b: "Interval") -> "Interval":
        a, b = a._align(b)
        return cls(min(a.lo, b.lo), max(a.hi, b.hi), a.bits)

    # -- views --------------------------------------------------------------

    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo, 1 << self.bits)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi, 1 << self.bits)

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo, 1 << self.bits)

    @property
    def mid(self) -> Fraction:
        return Fraction(self.lo + self.hi, 1 << (self.bits + 1))

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        return self.lower <= x <= self.upper

    def contains_interval(self, other: "Interval") -> bool:
        a, b = self._align(other)
        return a.lo <= b.lo and b.hi <= a.hi

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def certainly_negative(self) -> bool:
        return self.hi < 0

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def certainly_less(self, other) -> bool:
        other = _coerce(other, self.bits)
        a, b = self._align(other)
        return a.hi < b.lo

    def floor(self) -> int | None:
        """``floor(x)`` if it is the same at both endpoints, else None."""
        a = self.lo >> self.bits
        return a if a == (self.hi >> self.bits) else None

    def ceil_upper(self) -> int:
        return _ceil_shift(self.hi, self.bits)

    def floor_lower(self) -> int:
        return self.lo >> self.bits

    def rounded(self, bits: int) -> "Interval":
        """Outward re-rounding onto a (usually coarser) grid."""
        if bits >= self.bits:
            k = bits - self.bits
            return Interval(self.lo << k, self.hi << k, bits)
        k = self.bits - bits
        return Interval(self.lo >> k, _ceil_shift(self.hi, k), bits)

    def widened(self, units: int) -> "Interval":
        return Interval(self.lo - units, self.hi + units, self.bits)

    def to_decimal(self, digits: int = 12, upper: bool = True) -> str:
        """Decimal string rounded outward (up for ``upper``, else down)."""
        x = self.upper if upper else self.lower
        return format_decimal(x, digits, up=upper)

    def __repr__(self) -> str:
        return f"Interval[{float(self.lower):.17g}, {float(self.upper):.17g}]@{self.bits}"

    # -- arithmetic ---------------------------------------------------------

    def _align(self, other: "Interval"):
        if self.bits == other.bits:
            return self, other
        if self.bits > other.bits:
            k = self.bits - other.bits
            return self, Interval(other.lo << k, other.hi << k, self.bits)
        k = other.bits - self.bits
        return Interval(self.lo << k, self.hi << k, other.bits), other

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.bits)

    def __add__(self, other) -> "Interval":
        a, b = self._align(_coerce(other, self.bits))
        return Interval(a.lo + b.lo, a.hi + b.hi, a.bits)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        a, b = self._align(_coerce(other, self.bits))
        return Interval(a.lo - b.hi, a.hi - b.lo, a.bits)

    def __rsub__(self, other) -> "Interval":
        return _coerce(other, self.bits) - self

    def __mul__(self, other) -> "Interval":
        if isinstance(other, int):
            lo, hi = self.lo * other, self.hi * other
            return Interval(min(lo, hi), max(lo, hi), self.bits)
        other = _coerce(other, self.bits)
        bits = max(self.bits, other.bits)
        shift = self.bits + other.bits - bits
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ps) >> shift, _ceil_shift(max(ps), shift), bits)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = _coerce(other, self.bits)
        if not other.excludes_zero():
            raise ZeroDivisionError("interval divisor contains zero")
        bits = max(self.bits, other.bits)
        # x/2^bx / (y/2^by) scaled to 2^bits: x * 2^(by + bits - bx) / y
        shift = other.bits + bits - self.bits
        nums = (self.lo << shift, self.hi << shift) if shift >= 0 else (self.lo, self.hi)
        dens = (other.lo, other.hi) if shift >= 0 else (other.lo << -shift, other.hi << -shift)
        qs_lo = [n // d for n in nums for d in dens]
        qs_hi = [_ceil_div(n, d) for n in nums for d in dens]
        return Interval(min(qs_lo), max(qs_hi), bits)

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other, self.bits) / self

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi), self.bits)

    def __pow__(self, n: int) -> "Interval":
        if n < 0:
            return 1 / (self ** -n)
        result = Interval.exact(1, self.bits)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def _coerce(x, bits: int) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, int):
        return Interval.exact(x, bits)
    if isinstance(x, (Fraction, float, str)):
        return Interval.from_fraction(Fraction(x), bits)
    raise TypeError(f"cannot coerce {type(x).__name__} to Interval")


def format_decimal(x: Fraction, digits: int = 12, up: bool = True) -> str:
    """Scientific-notation decimal with ``digits`` significant digits, rounded
    toward +inf when ``up`` else toward -inf."""
    x = Fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    ax = -x if x < 0 else x
    # rounding direction flips for negative numbers
    round_up = up if x > 0 else not up
    e = len(str(ax.numerator)) - len(str(ax.denominator))
    while Fraction(10) ** e > ax:
        e -= 1
    while Fraction(10) ** (e + 1) <= ax:
        e += 1
    scaled = ax / Fraction(10) ** (e - digits + 1)
    m = math.ceil(scaled) if round_up else math.floor(scaled)
    if m >= 10 ** digits:
        m //= 10
        e += 1
        if round_up and m * Fraction(10) ** (e - digits + 1) < ax:
            m += 1
    s = str(m)
    mant = s[0] + ("." + s[1:] if len(s) > 1 else "")
    return f"{sign}{mant}e{e}"


# --------------------------------------------------------------------------
# Elementary functions at a fixed number of fractional bits.
#
# Error budgets below are in units of 2**-w.  _atanh_series truncates every
# multiply and divide (at most 1 unit each); the recurrence for the powers of
# z keeps its accumulated error under 3 units because |z| <= 1/3.


def _atanh_series(zn: int, zd: int, w: int) -> tuple[int, int]:
    """atanh(zn/zd) * 2**w and an error bound, for |zn/zd| <= 1/3."""
    neg = zn < 0
    zn = -zn if neg else zn
    t = (zn << w) // zd
    z2 = (zn * zn << w) // (zd * zd)
    s = 0
    j = 0
    while t:
        s += t // (2 * j + 1)
        t = (t * z2) >> w
        j += 1
    return (-s if neg else s), 4 * j + 8


@lru_cache(maxsize=64)
def _log2_fixed(w: int) -> tuple[int, int]:
    s, err = _atanh_series(1, 3, w)
    return 2 * s, 2 * err


def _log_dyadic(n: int, b: int, w: int) -> tuple[int, int]:
    """log(n / 2**b) * 2**w with an error bound in units of 2**-w."""
    if n <= 0:
        raise ValueError("log of non-positive number")
    k = n.bit_length() - 1 - b          # n / 2^(b+k) in [1, 2)
    if 3 * n > 4 << (b + k):            # move into [2/3, 4/3]
        k += 1
    e = b + k
    if e >= 0:
        zn, zd = n - (1 << e), n + (1 << e)
    else:
        zn, zd = (n << -e) - 1, (n << -e) + 1
    s, err = _atanh_series(zn, zd, w)
    l2, l2err = _log2_fixed(w)
    return 2 * s + k * l2, 2 * err + abs(k) * l2err


def ilog(x: Interval, w: int | None = None) -> Interval:
    """Certified natural logarithm of a positive interval."""
    if x.lo <= 0:
        raise ValueError("log of an interval that is not certainly positive")
    if w is None:
        w = x.bits
    guard = 16 + max(x.bits, w).bit_length()
    wg = w + guard
    lo, elo = _log_dyadic(x.lo, x.bits, wg)
    hi, ehi = _log_dyadic(x.hi, x.bits, wg)
    return Interval((lo - elo) >> guard, _ceil_shift(hi + ehi, guard), w)


def isqrt_interval(x: Interval, w: int | None = None) -> Interval:
    """Certified square root of a non-negative interval."""
    if x.lo < 0:
        raise ValueError("sqrt of an interval that is not certainly non-negative")
    if w is None:
        w = x.bits
    # sqrt(v / 2^b) * 2^w = sqrt(v * 2^(2w - b))
    sh = 2 * w - x.bits

    def scaled(v: int) -> tuple[int, bool]:
        if sh >= 0:
            return v << sh, True
        return v >> -sh, (v & ((1 << -sh) - 1)) == 0

    lo_v, _ = scaled(x.lo)
    hi_v, exact = scaled(x.hi)
    if not exact:
        hi_v += 1
    lo = math.isqrt(lo_v)
    r = math.isqrt(hi_v)
    hi = r if r * r == hi_v else r + 1
    return Interval(lo, hi, w)


def sqrt2(w: int) -> Interval:
    return isqrt_interval(Interval.exact(2), w)


def alpha_power(m: int, w: int) -> Interval:
    """alpha**m for integer m, alpha = 3 + 2*sqrt(2).

    alpha**m = x + y*sqrt(2) with exact integers; negative powers are taken
    as reciprocals so no cancellation occurs.
    """
    x, y = pell_pair(abs(m))
    w2 = w + y.bit_length() + 8
    v = Interval.exact(x, w2) + sqrt2(w2) * y
    if m < 0:
        v = 1 / v
    return v.rounded(w + 4) if m >= 0 else v


@lru_cache(maxsize=4096)
def pell_pair(m: int) -> tuple[int, int]:
    """(x, y) with (3 + 2*sqrt 2)**m = x + y*sqrt 2, m >= 0."""
    x, y = 1, 0
    for _ in range(m):
        x, y = 3 * x + 4 * y, 2 * x + 3 * y
    return x, y


# --------------------------------------------------------------------------
# Oracles


@dataclass(frozen=True, eq=False)
class RealOracle:
    """A fixed real constant, evaluable to any absolute precision.

    ``compute(w)`` must return an enclosure whose width shrinks roughly like
    ``2**-w``.  :meth:`eval` wraps it so that the returned intervals are
    nested across precisions and at most ``2**-precision`` wide.
    """

    label: str
    compute: Callable[[int], Interval]

    def eval(self, precision: int) -> Interval:
        if precision < 16:
            raise ValueError("precision must be at least 16 bits")
        target = Fraction(1, 1 << (precision + 4))
        for extra in (8, 16, 32, 64, 128):
            raw = self.compute(precision + extra)
            if raw.width <= target:
                break
        else:
            raise PrecisionError(f"{self.label}: evaluator does not converge at {precision} bits")
        # grid at precision+6, pad 7 * 2^-(precision+4) = 28 grid units;
        # padding larger than twice any finer enclosure keeps results nested.
        return raw.rounded(precision + 6).widened(28)

    def __call__(self, precision: int) -> Interval:
        return self.eval(precision)

    # composition helpers; each yields a new oracle evaluated lazily

    def _combine(self, other, op, sym) -> "RealOracle":
        if isinstance(other, RealOracle):
            return RealOracle(f"({self.label} {sym} {other.label})",
                              lambda w: op(self.compute(w + 4), other.compute(w + 4)))
        return RealOracle(f"({self.label} {sym} {other})",
                          lambda w: op(self.compute(w + 4), _coerce(other, w + 4)))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, "+")

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, "-")

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, "*")

    def __truediv__(self, other):
        def div(w):
            num = self.compute(w + 16)
            if isinstance(other, RealOracle):
                den = other.compute(w + 16)
                # bump precision until the divisor is bounded away from zero
                while not den.excludes_zero() and w < DEFAULT_PRECISION_CAP:
                    w *= 2
                    num, den = self.compute(w + 16), other.compute(w + 16)
            else:
                den = _coerce(other, w + 16)
            return num / den
        label = other.label if isinstance(other, RealOracle) else str(other)
        return RealOracle(f"({self.label} / {label})", div)

    def __neg__(self):
        return RealOracle(f"-{self.label}", lambda w: -self.compute(w))


def constant(label: str, value) -> RealOracle:
    """Oracle for an exact rational."""
    v = Fraction(value)
    return RealOracle(label, lambda w: Interval.from_fraction(v, w))


def log_of(label: str, arg: Callable[[int], Interval]) -> RealOracle:
    """Oracle for log(arg), where ``arg(w)`` encloses a positive number.

    Precision of the argument is raised until it is certainly positive, so a
    non-positive constant is reported at construction.
    """
    probe = arg(64)
    if probe.hi <= 0:
        raise ValueError(f"log of non-positive quantity: {label}")

    def compute(w: int) -> Interval:
        x = arg(w + 16)
        if x.lo <= 0:
            raise ValueError(f"log argument not certainly positive: {label}")
        # relative error of x turns into absolute error of log x
        mag = max(0, -(x.lo.bit_length() - x.bits)) + 2
        if mag > 16:
            x = arg(w + 16 + mag)
        return ilog(x, w)

    return RealOracle(label, compute)


SQRT2 = RealOracle("sqrt(2)", sqrt2)
ALPHA = RealOracle("alpha", lambda w: alpha_power(1, w))
FOUR_SQRT2 = RealOracle("4*sqrt(2)", lambda w: sqrt2(w + 3) * 4)
LOG2 = RealOracle("log 2", lambda w: _log2_interval(w))
LOG_ALPHA = log_of("log alpha", lambda w: alpha_power(1, w))
LOG_FOUR_SQRT2 = log_of("log(4*sqrt(2))", lambda w: sqrt2(w + 3) * 4)
TAU = RealOracle("log alpha / log 2", (LOG_ALPHA / LOG2).compute)


def _log2_interval(w: int) -> Interval:
    g = 16
    v, err = _log2_fixed(w + g)
    return Interval((v - err) >> g, _ceil_shift(v + err, g), w)


# --------------------------------------------------------------------------
# Continued fractions


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int


def _cf_from_interval(x: Interval) -> Iterator[int]:
    """Partial quotients shared by every real in ``x`` (exact rational steps)."""
    ln, ld = x.lo, 1 << x.bits     # lower endpoint as ln/ld
    hn, hd = x.hi, 1 << x.bits
    while True:
        a = ln // ld
        if a != hn // hd:
            return
        ln -= a * ld
        hn -= a * hd
        if ln == 0:                # fractional part may be 0: cannot invert
            return
        yield a
        # x - a in [ln/ld, hn/hd]  ->  1/(x - a) in [hd/hn, ld/ln]
        ln, ld, hn, hd = hd, hn, ld, ln


def cf_expand(oracle: RealOracle, count: int, precision: int = DEFAULT_PRECISION,
              cap: int = DEFAULT_PRECISION_CAP) -> list[int]:
    """First ``count`` certified partial quotients of an irrational constant.

    Doubles the working precision until ``count`` quotients are certified.
    """
    if count < 1:
        raise ValueError("count must be positive")
    p = precision
    while True:
        qs = []
        for a in _cf_from_interval(oracle.eval(p)):
            qs.append(a)
            if len(qs) == count:
                return qs
        if p * 2 > cap:
            raise PrecisionError(
                f"{oracle.label}: partial quotient #{len(qs)} not certified at {p} bits "
                f"(cap {cap})")
        p *= 2


def convergents(quotients: list[int]) -> list[Convergent]:
    if not quotients:
        raise ValueError("need at least one partial quotient")
    out = []
    p0, q0, p1, q1 = 1, 0, quotients[0], 1
    out.append(Convergent(0, p1, q1))
    for i, a in enumerate(quotients[1:], start=1):
        if a <= 0:
            raise ValueError("partial quotients after the first must be positive")
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append(Convergent(i, p1, q1))
    return out


def convergents_past(oracle: RealOracle, threshold: int, extra: int = 0,
                     precision: int = DEFAULT_PRECISION,
                     cap: int = DEFAULT_PRECISION_CAP) -> list[Convergent]:
    """The first convergent with q > threshold, followed by ``extra`` more."""
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    # q_k grows at least like Fibonacci numbers
    count = 2
    while True:
        convs = convergents(cf_expand(oracle, count, precision, cap))
        for c in convs:
            if c.q > threshold and c.index + extra < len(convs):
                return convs[c.index:c.index + extra + 1]
        count *= 2


def first_convergent_q_exceeding(oracle: RealOracle, threshold: int,
                                 precision: int = DEFAULT_PRECISION,
                                 cap: int = DEFAULT_PRECISION_CAP) -> Convergent:
    return convergents_past(oracle, threshold, 0, precision, cap)[0]


def convergent_error_certified(oracle: RealOracle, c: Convergent,
                               precision: int = DEFAULT_PRECISION,
                               cap: int = DEFAULT_PRECISION_CAP) -> bool:
    """Certify |x - p/q| < 1/q**2 by interval evaluation."""
    p = max(precision, 4 * c.q.bit_length() + 32)
    while p <= cap:
        err = abs(oracle.eval(p) - Fraction(c.p, c.q))
        bound = Fraction(1, c.q * c.q)
        if err.upper < bound:
            return True
        if err.lower >= bound:
            return False
        p *= 2
    raise PrecisionError(f"cannot decide convergent #{c.index} error bound")


def nearest_int_distance(x) -> Interval:
    """Certified enclosure of ||x||, the distance to the nearest integer.

    The distance is 1-periodic and concave between consecutive integers, so
    over an interval free of integers its minimum sits at an endpoint.
    """
    if not isinstance(x, Interval):
        x = Interval.from_fraction(Fraction(x), 64)
    if x.bits < 2:
        x = x.rounded(2)
    one = 1 << x.bits
    half = one >> 1
    if x.hi - x.lo > one >> 2:
        raise PrecisionError("interval too wide for an informative nearest-integer distance")
    k = x.lo >> x.bits
    lo = x.lo - (k << x.bits)            # in [0, one)
    hi = lo + (x.hi - x.lo)
    if hi >= one or lo == 0:
        dmin = 0
    else:
        dmin = min(lo, one - hi)
    d_lo, d_hi = min(lo, one - lo), min(hi, one - hi) if hi <= one else min(hi - one, 2 * one - hi)
    if lo <= half <= hi or lo <= one + half <= hi:
        dmax = half
    else:
        dmax = max(d_lo, d_hi)
    return Interval(dmin, dmax, x.bits)
