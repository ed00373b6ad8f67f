"""Baker-Davenport reduction in the form of Dujella and Pethő.

Setting: ``0 < |u tau - v + mu| < A B**-w`` with ``u <= M``.  If ``p/q`` is a
convergent of ``tau`` with ``q > 6M`` and ``eps = ||mu q|| - M ||tau q|| > 0``
then every solution has ``w < log(A q / eps) / log B``.

``mu`` may be a single constant or a :class:`MuFamily`, a sum of a fixed
part and pieces that each depend on a few integer parameters.  For families
the fractional parts ``{piece * q}`` are tabulated once per piece and the
Cartesian product is scanned with integer arithmetic only.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .realnum import (
    DEFAULT_PRECISION,
    DEFAULT_PRECISION_CAP,
    Convergent,
    Interval,
    PrecisionError,
    RealOracle,
    convergents_past,
    ilog,
    nearest_int_distance,
)

DEFAULT_ATTEMPTS = 20
FRAC_BITS = 64          # fixed-point resolution of the family scan


class ReductionError(RuntimeError):
    """No usable convergent was found within the allowed attempts."""


# --------------------------------------------------------------------------
# Problem description


@dataclass(frozen=True)
class FamilyPart:
    """An additive piece of mu depending on the parameters ``names``.

    ``values`` lists the admissible parameter tuples for this piece and
    ``build`` turns one of them into an oracle for the piece.
    """
    names: tuple[str, ...]
    values: tuple[tuple[int, ...], ...]
    build: Callable[[tuple[int, ...]], RealOracle]

    def __post_init__(self):
        if not self.values:
            raise ValueError(f"family piece {self.names} has no parameter values")
        if any(len(v) != len(self.names) for v in self.values):
            raise ValueError(f"family piece {self.names}: parameter tuples of the wrong length")


@dataclass(frozen=True)
class MuFamily:
    """mu(params) = base + sum of pieces; members form the Cartesian product."""
    label: str
    base: RealOracle
    parts: tuple[FamilyPart, ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for part in self.parts for n in part.names)

    @property
    def size(self) -> int:
        n = 1
        for part in self.parts:
            n *= len(part.values)
        return n

    def members(self) -> Iterable[tuple[int, ...]]:
        for combo in itertools.product(*(part.values for part in self.parts)):
            yield tuple(x for piece in combo for x in piece)

    def split(self, params: tuple[int, ...]) -> list[tuple[int, ...]]:
        if len(params) != len(self.names):
            raise ValueError(f"{self.label}: expected parameters {self.names}, got {params}")
        out, i = [], 0
        for part in self.parts:
            out.append(tuple(params[i:i + len(part.names)]))
            i += len(part.names)
        return out

    def oracle(self, params: tuple[int, ...]) -> RealOracle:
        pieces = [part.build(v) for part, v in zip(self.parts, self.split(tuple(params)))]
        base = self.base

        def compute(w: int) -> Interval:
            total = base.compute(w + 4)
            for piece in pieces:
                total = total + piece.compute(w + 4)
            return total

        desc = ",".join(f"{n}={v}" for n, v in zip(self.names, params))
        return RealOracle(f"{self.label}[{desc}]", compute)


@dataclass(frozen=True)
class ReductionProblem:
    tau: RealOracle
    mu: RealOracle | MuFamily
    A: Fraction
    B: object               # int, Fraction or RealOracle, > 1
    M: int
    label: str = ""
    side_condition: str = ""

    def __post_init__(self):
        object.__setattr__(self, "A", Fraction(self.A))
        if self.A <= 0:
            raise ValueError("A must be positive")
        if not isinstance(self.M, int) or self.M < 1:
            raise ValueError("M must be a positive integer")
        if isinstance(self.B, RealOracle):
            if not self.B.eval(64).lower > 1:
                raise ValueError(f"B = {self.B.label} is not certainly > 1")
        elif Fraction(self.B) <= 1:
            raise ValueError("B must exceed 1")

    def log_B(self, w: int) -> Interval:
        if isinstance(self.B, RealOracle):
            return ilog(self.B.eval(w + 8), w)
        return ilog(Interval.from_fraction(Fraction(self.B), w + 8), w)


@dataclass(frozen=True)
class ReductionOutcome:
    """Result of one reduction.

    ``epsilon`` is a certified lower bound for ``||mu q|| - M ||tau q||`` and
    ``w_bound`` the greatest integer strictly below the certified upper end
    of ``log(A q / epsilon) / log B``.  For families the fields describe the
    worst member (``param``); ``min_epsilon`` is the least epsilon over all
    members and ``resolved`` counts members per convergent tried.
    """
    convergent_used: Convergent
    epsilon: Fraction
    w_bound: int
    side_condition: str
    threshold: Fraction
    precision: int
    skipped: int = 0
    param: tuple | None = None
    members: int = 1
    min_epsilon: Fraction | None = None
    resolved: tuple = field(default=())


# --------------------------------------------------------------------------
# Linearization and side conditions


def min_gap(constant, base, precision: int = 64) -> int:
    """Least g >= 0 with constant * base**-g <= 1/2 (certified)."""
    c = Fraction(constant)
    if isinstance(base, RealOracle):
        b = base.eval(precision).lower
    else:
        b = Fraction(base)
    if b <= 1:
        raise ValueError("base must exceed 1")
    g = 0
    while c > Fraction(1, 2) * b ** g:
        g += 1
    return g


def linearize_small_form(y, constant=None, base=None) -> Fraction:
    """From |e^z - 1| < y <= 1/2 conclude |z| < 2y.

    ``y`` is a certified upper bound (Fraction, number or Interval).  When it
    exceeds 1/2 the error names the gap ``g`` that would make
    ``constant * base**-g <= 1/2``, if those are supplied.
    """
    if isinstance(y, Interval):
        y = y.upper
    y = Fraction(y)
    if y < 0:
        raise ValueError("y must be non-negative")
    if y > Fraction(1, 2):
        msg = f"cannot linearize: y = {float(y):.6g} > 1/2"
        if constant is not None and base is not None:
            msg += f"; need the gap to be at least {min_gap(constant, base)}"
        raise ValueError(msg)
    return 2 * y


# --------------------------------------------------------------------------
# Scalar reduction


@lru_cache(maxsize=32)
def _convergents(tau: RealOracle, threshold: int, extra: int, precision: int, cap: int):
    return tuple(convergents_past(tau, threshold, extra, precision, cap))


def _working_precision(q: int, M: int, precision: int) -> int:
    return max(precision, q.bit_length() + M.bit_length() + FRAC_BITS)


def _tau_term(tau: RealOracle, q: int, M: int, precision: int, cap: int) -> Fraction:
    """Certified upper bound for M ||tau q||."""
    p = _working_precision(q, M, precision)
    while p <= cap:
        d = nearest_int_distance(tau.eval(p) * q)
        if d.hi > 0:
            return M * d.upper
        p *= 2
    raise PrecisionError(f"||tau q|| not bounded at {cap} bits")


def _epsilon(problem: ReductionProblem, mu: RealOracle, q: int, precision: int, cap: int):
    """(eps lower bound, bits) when eps > 0 is certified, (None, bits) when eps <= 0."""
    M = problem.M
    p = _working_precision(q, M, precision)
    while p <= cap:
        dm = nearest_int_distance(mu.eval(p) * q)
        dt = nearest_int_distance(problem.tau.eval(p) * q)
        lo = dm.lower - M * dt.upper
        if lo > 0:
            return lo, p
        if dm.upper - M * dt.lower <= 0:
            return None, p
        p *= 2
    raise PrecisionError(f"{mu.label}: sign of eps undecided at {cap} bits (q = {q})")


def _w_bound(problem: ReductionProblem, q: int, eps: Fraction) -> tuple[int, Fraction]:
    w = 128
    x = Interval.from_fraction(problem.A * q / eps, w)
    t = ilog(x, w) / problem.log_B(w)
    top = t.upper
    bound = -((-top.numerator) // top.denominator) - 1   # ceil(top) - 1
    return max(0, bound), top


def bd_reduce(problem: ReductionProblem, precision: int = DEFAULT_PRECISION,
              cap: int = DEFAULT_PRECISION_CAP, attempts: int = DEFAULT_ATTEMPTS) -> ReductionOutcome:
    """Reduce with a scalar mu, advancing through convergents while eps <= 0."""
    if isinstance(problem.mu, MuFamily):
        raise TypeError("parameterized mu: use bd_reduce_family")
    convs = _convergents(problem.tau, 6 * problem.M, attempts - 1, precision, cap)
    for skipped, c in enumerate(convs):
        eps, bits = _epsilon(problem, problem.mu, c.q, precision, cap)
        if eps is None:
            continue
        w, top = _w_bound(problem, c.q, eps)
        return ReductionOutcome(c, eps, w, problem.side_condition, top, bits,
                                skipped=skipped, min_epsilon=eps)
    raise ReductionError(f"{problem.mu.label}: eps <= 0 for the first {attempts} "
                         f"convergents with q > 6M")


# --------------------------------------------------------------------------
# Families


def _fraction_table(oracle_of, values, q: int, bits: int, N: int):
    """{value: (offset, width)} with {oracle * q} in [offset, offset + width] / N."""
    table = {}
    for v in values:
        iv = oracle_of(v).eval(bits) * q
        shift = iv.bits - FRAC_BITS
        lo = iv.lo >> shift
        hi = -((-iv.hi) >> shift)
        table[v] = (lo % N, hi - lo)
    return table


class _Round:
    """Fixed-point tables of every piece against one convergent."""

    def __init__(self, fam: MuFamily, c: Convergent, M: int, tau: RealOracle,
                 precision: int, cap: int, needed=None):
        self.c = c
        q = c.q
        self.N = 1 << FRAC_BITS
        self.bits = _working_precision(q, M, precision) + 32
        self.base = _fraction_table(lambda _: fam.base, [()], q, self.bits, self.N)[()]
        self.tables = []
        for i, part in enumerate(fam.parts):
            vals = part.values if needed is None else sorted(needed[i])
            self.tables.append(_fraction_table(part.build, vals, q, self.bits, self.N))
        self.width = self.base[1] + sum(max(w for _, w in t.values()) for t in self.tables) + 1
        tt = _tau_term(tau, q, M, precision, cap)
        # members with distance <= thr units are not certified by this convergent
        self.tau_term = tt
        self.thr = -((-(tt * self.N).numerator) // (tt * self.N).denominator)

    def distance(self, offset: int) -> int:
        """Lower bound, in units of 1/N, for ||x|| with x in [offset, offset+width]/N."""
        v = offset % self.N
        return max(0, min(v, self.N - self.width - v))

    def epsilon(self, dist: int) -> Fraction:
        return Fraction(dist, self.N) - self.tau_term


def _scan_product(rnd: _Round, fam: MuFamily):
    """Scan every member; returns (min distance, its member, unresolved members)."""
    N, W, thr = rnd.N, rnd.width, rnd.thr
    # the largest piece is sorted and searched; the rest are enumerated
    big = max(range(len(fam.parts)), key=lambda i: len(fam.parts[i].values))
    big_items = sorted((off, v) for v, (off, _) in rnd.tables[big].items())
    offs = [o for o, _ in big_items]
    n = len(offs)
    others = [i for i in range(len(fam.parts)) if i != big]
    best = None
    bad = []
    for combo in itertools.product(*(fam.parts[i].values for i in others)):
        o = rnd.base[0] + sum(rnd.tables[i][v][0] for i, v in zip(others, combo))
        t = (-o) % N
        # x = (s - t) mod N; a member is resolved iff thr < x < N - W - thr, so
        # the closest resolved members sit just outside that window
        above = bisect.bisect_right(offs, (t + thr) % N) % n
        below = (bisect.bisect_left(offs, (t - W - thr) % N) - 1) % n
        for k in (above, below):
            d = rnd.distance(offs[k] - t)
            if d > thr and (best is None or d < best[0]):
                best = (d, _assemble(fam, big, others, big_items[k][1], combo))
        # unresolved members: distance <= thr, i.e. s in [t - W - thr, t + thr] mod N
        lo, hi = t - W - thr, t + thr
        for a, b in _circular_ranges(lo, hi, N):
            for k in range(bisect.bisect_left(offs, a), bisect.bisect_right(offs, b)):
                if rnd.distance(offs[k] - t) <= thr:
                    bad.append(_assemble(fam, big, others, big_items[k][1], combo))
    return best, bad


def _circular_ranges(lo: int, hi: int, N: int):
    if hi - lo >= N:
        return [(0, N - 1)]
    lo_m, hi_m = lo % N, hi % N
    if lo_m <= hi_m:
        return [(lo_m, hi_m)]
    return [(lo_m, N - 1), (0, hi_m)]


def _assemble(fam: MuFamily, big: int, others: list, big_value, combo) -> tuple:
    pieces = [None] * len(fam.parts)
    pieces[big] = big_value
    for i, v in zip(others, combo):
        pieces[i] = v
    return tuple(x for piece in pieces for x in piece)


def _scan_list(rnd: _Round, fam: MuFamily, members: list):
    best = None
    bad = []
    for m in members:
        o = rnd.base[0] + sum(t[v][0] for t, v in zip(rnd.tables, fam.split(m)))
        d = rnd.distance(o)
        if d <= rnd.thr:
            bad.append(m)
        elif best is None or d < best[0]:
            best = (d, m)
    return best, bad


def bd_reduce_family(problem: ReductionProblem, params=None, precision: int = DEFAULT_PRECISION,
                     cap: int = DEFAULT_PRECISION_CAP,
                     attempts: int = DEFAULT_ATTEMPTS) -> ReductionOutcome:
    """Reduce every member of a parameterized mu and report the worst case.

    With ``params`` given, each listed member is reduced exactly as by
    :func:`bd_reduce`.  Without it the whole product grid of the family is
    scanned at ``FRAC_BITS`` fixed-point resolution; members whose eps is not
    certified against the first convergent move on to the next ones.
    """
    fam = problem.mu
    if not isinstance(fam, MuFamily):
        if params is not None and list(params) != [()]:
            raise ValueError("a scalar mu admits only the empty parameter tuple")
        return bd_reduce(problem, precision, cap, attempts)
    if params is not None:
        return _reduce_listed(problem, fam, list(params), precision, cap, attempts)

    convs = _convergents(problem.tau, 6 * problem.M, attempts - 1, precision, cap)
    worst = None
    min_eps = None
    resolved = []
    pending = None
    for skipped, c in enumerate(convs):
        if pending is None:
            rnd = _Round(fam, c, problem.M, problem.tau, precision, cap)
            best, bad = _scan_product(rnd, fam)
            count = fam.size
        else:
            needed = [set() for _ in fam.parts]
            for m in pending:
                for i, v in enumerate(fam.split(m)):
                    needed[i].add(v)
            rnd = _Round(fam, c, problem.M, problem.tau, precision, cap, needed)
            best, bad = _scan_list(rnd, fam, pending)
            count = len(pending)
        done = count - len(bad)
        resolved.append((c.index, done))
        if done and best is not None and best[0] > rnd.thr:
            eps = rnd.epsilon(best[0])
            w, top = _w_bound(problem, c.q, eps)
            out = ReductionOutcome(c, eps, w, problem.side_condition, top, rnd.bits,
                                   skipped=skipped, param=best[1])
            if worst is None or (w, -eps) > (worst.w_bound, -worst.epsilon):
                worst = out
            min_eps = eps if min_eps is None else min(min_eps, eps)
        if not bad:
            return replace(worst, members=fam.size, min_epsilon=min_eps, resolved=tuple(resolved))
        pending = bad
    raise ReductionError(f"{fam.label}: {len(pending)} member(s) without eps > 0 after "
                         f"{attempts} convergents, e.g. {dict(zip(fam.names, pending[0]))}")


def _reduce_listed(problem, fam, params, precision, cap, attempts) -> ReductionOutcome:
    if not params:
        raise ValueError("empty parameter list")
    worst = None
    min_eps = None
    for m in params:
        scalar = replace(problem, mu=fam.oracle(tuple(m)))
        try:
            out = bd_reduce(scalar, precision, cap, attempts)
        except (ReductionError, PrecisionError) as exc:
            raise ReductionError(f"{fam.label}: member {dict(zip(fam.names, m))} failed: {exc}") from exc
        out = replace(out, param=tuple(m))
        if worst is None or (out.w_bound, -out.epsilon) > (worst.w_bound, -worst.epsilon):
            worst = out
        min_eps = out.epsilon if min_eps is None else min(min_eps, out.epsilon)
    return replace(worst, members=len(params), min_epsilon=min_eps)


def with_base(outcome: ReductionOutcome, problem: ReductionProblem) -> ReductionOutcome:
    """The same convergent and eps read against the A and B of ``problem``.

    Used where one inequality carries two alternatives, e.g. ``A 2**-w1`` or
    ``A alpha**-w2``: the worst member is the same for both because the
    bound is monotone in q/eps.
    """
    w, top = _w_bound(problem, outcome.convergent_used.q, outcome.epsilon)
    return replace(outcome, w_bound=w, threshold=top, side_condition=problem.side_condition)
