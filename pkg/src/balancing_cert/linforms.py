"""Heights, Matveev's lower bound and the symbolic (1 + log n1)^k bookkeeping.

Bounds are carried as :class:`PolyLogBound` values ``c * (1 + log n1)**k``.
The constant ``c`` is an :class:`Interval`; the bound in force is its upper
end.  Additive constants are absorbed into ``c`` using n1 > 100, the range
left after exhaustive search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .realnum import (
    DEFAULT_PRECISION,
    DEFAULT_PRECISION_CAP,
    Interval,
    PrecisionError,
    alpha_power,
    ilog,
    isqrt_interval,
    sqrt2,
)

# gap quantities and the logarithm each one is measured in
GAPS = ("a1-a2", "a1-a3", "n1-n2")
_GAP_BASE = {"a1-a2": "2", "a1-a3": "2", "n1-n2": "alpha"}

N1_MIN = 100


# --------------------------------------------------------------------------
# Height expressions


@dataclass(frozen=True)
class Atom:
    name: str  # "alpha", "2" or "4sqrt2"

    def __post_init__(self):
        if self.name not in ("alpha", "2", "4sqrt2"):
            raise ValueError(f"unknown atom {self.name!r}")


@dataclass(frozen=True)
class Rat:
    num: int
    den: int = 1


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int | str
    sign: int = 1


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Div:
    num: object
    den: object


@dataclass(frozen=True)
class OnePlus:
    """1 + t1 + ... + tr."""
    terms: tuple


ALPHA = Atom("alpha")
TWO = Atom("2")
FOUR_SQRT2 = Atom("4sqrt2")


def mul(*factors):
    return Mul(tuple(factors))


def one_plus(*terms):
    return OnePlus(tuple(terms))


@dataclass(frozen=True)
class LinearBound:
    """constant + sum(coef[s] * s) over gap symbols s."""
    constant: Interval
    terms: dict = field(default_factory=dict)

    def __add__(self, other: "LinearBound") -> "LinearBound":
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = terms[s] + c if s in terms else c
        return LinearBound(self.constant + other.constant, terms)

    def scaled(self, k: int) -> "LinearBound":
        return LinearBound(self.constant * k, {s: c * k for s, c in self.terms.items()})

    def evaluate(self, env: dict) -> Interval:
        total = self.constant
        for s, c in self.terms.items():
            total = total + c * int(env[s])
        return total


def atom_height(name: str, w: int) -> Interval:
    if name == "alpha":
        return ilog(alpha_power(1, w + 8), w) * Fraction(1, 2)
    if name == "2":
        return ilog(Interval.exact(2, w), w)
    if name == "4sqrt2":
        return ilog(sqrt2(w + 8) * 4, w)
    raise ValueError(f"unknown atom {name!r}")


def height_upper_bound(e, precision: int = DEFAULT_PRECISION) -> LinearBound:
    """Upper bound on the logarithmic height of ``e``.

    Rules: h(xy^{+-1}) <= h(x) + h(y); h(x^k) = |k| h(x);
    h(1 + t1 + ... + tr) <= h(t1) + ... + h(tr) + r log 2.
    """
    w = precision
    if isinstance(e, Atom):
        return LinearBound(atom_height(e.name, w))
    if isinstance(e, Rat):
        f = Fraction(e.num, e.den)
        m = max(abs(f.numerator), f.denominator)
        return LinearBound(ilog(Interval.exact(m, w), w) if m > 1 else Interval.exact(0, w))
    if isinstance(e, Pow):
        inner = height_upper_bound(e.base, w)
        if inner.terms:
            raise ValueError("powers of symbolic heights are not linear")
        if isinstance(e.exp, int):
            return inner.scaled(abs(e.exp))
        return LinearBound(Interval.exact(0, w), {e.exp: inner.constant})
    if isinstance(e, Mul):
        out = LinearBound(Interval.exact(0, w))
        for f in e.factors:
            out = out + height_upper_bound(f, w)
        return out
    if isinstance(e, Div):
        return height_upper_bound(e.num, w) + height_upper_bound(e.den, w)
    if isinstance(e, OnePlus):
        out = LinearBound(ilog(Interval.exact(2, w), w) * len(e.terms))
        for t in e.terms:
            out = out + height_upper_bound(t, w)
        return out
    raise ValueError(f"unknown height expression node {e!r}")


def evaluate(e, env: dict, w: int) -> Interval:
    """Numeric enclosure of a height expression with symbols bound by ``env``."""
    if isinstance(e, Atom):
        if e.name == "alpha":
            return alpha_power(1, w)
        if e.name == "2":
            return Interval.exact(2, w)
        return sqrt2(w + 3) * 4
    if isinstance(e, Rat):
        return Interval.from_fraction(Fraction(e.num, e.den), w)
    if isinstance(e, Pow):
        k = e.exp if isinstance(e.exp, int) else int(env[e.exp])
        k *= e.sign
        if isinstance(e.base, Atom) and e.base.name == "alpha":
            return alpha_power(k, w)
        if isinstance(e.base, Atom) and e.base.name == "2":
            return Interval.from_fraction(Fraction(2) ** k, w)
        return evaluate(e.base, env, w) ** k
    if isinstance(e, Mul):
        out = Interval.exact(1, w)
        for f in e.factors:
            out = out * evaluate(f, env, w)
        return out
    if isinstance(e, Div):
        return evaluate(e.num, env, w) / evaluate(e.den, env, w)
    if isinstance(e, OnePlus):
        out = Interval.exact(1, w)
        for t in e.terms:
            out = out + evaluate(t, env, w)
        return out
    raise ValueError(f"unknown expression node {e!r}")


# --------------------------------------------------------------------------
# Poly-log bounds and Matveev


@dataclass(frozen=True)
class PolyLogBound:
    """coefficient * (1 + log n1) ** exponent; ``coefficient.upper`` is in force."""
    coefficient: Interval
    exponent: int

    def __post_init__(self):
        if self.coefficient.hi <= 0:
            raise ValueError("coefficient must be positive")
        if self.exponent < 0:
            raise ValueError("exponent must be non-negative")

    @property
    def upper(self) -> Fraction:
        return self.coefficient.upper

    def at(self, n1: int, w: int = DEFAULT_PRECISION) -> Interval:
        L = ilog(Interval.exact(n1, w), w) + 1
        return self.coefficient * (L ** self.exponent)

    def rescaled(self, k: int) -> "PolyLogBound":
        """Same bound expressed with (1 + log n1)**k, k >= exponent, using n1 > N1_MIN."""
        if k < self.exponent:
            raise ValueError("cannot lower the exponent")
        return PolyLogBound(self.coefficient / (_L0(self.coefficient.bits) ** (k - self.exponent)), k)

    def __str__(self) -> str:
        return f"{format_sig(self.upper)}*(1+log n1)^{self.exponent}"


def format_sig(x: Fraction, digits: int = 4) -> str:
    from .realnum import format_decimal
    return format_decimal(x, digits, up=True)


def _L0(w: int) -> Interval:
    """Certified lower end of 1 + log n1 under n1 > N1_MIN (as a point interval)."""
    L = ilog(Interval.exact(N1_MIN, w), w) + 1
    return Interval(L.lo, L.lo, w)


@dataclass(frozen=True)
class MatveevInput:
    l: int
    field_degree: int
    A: tuple  # PolyLogBound or Interval per multiplicand
    D: str = "n1"

    def __post_init__(self):
        if self.l < 2 or self.field_degree < 1 or len(self.A) != self.l:
            raise ValueError("need l >= 2 multiplicands, degree >= 1, and l values A_j")
        for a in self.A:
            c = a.coefficient if isinstance(a, PolyLogBound) else a
            if c.lower < Fraction(16, 100):
                raise ValueError("Matveev requires A_j >= 0.16")


def matveev_coefficient(inp: MatveevInput, precision: int = DEFAULT_PRECISION) -> PolyLogBound:
    """C with log|Gamma| > -C (1 + log D) * prod(A_j), as a bound in (1 + log n1).

    C = 1.4 * 30^(l+3) * l^4.5 * d^2 * (1 + log d) * prod A_j, outward rounded.
    """
    w = precision
    l, d = inp.l, inp.field_degree
    c = Interval.from_fraction(Fraction(7, 5), w) * (30 ** (l + 3) * l ** 4 * d * d)
    c = c * isqrt_interval(Interval.exact(l, w), w)
    c = c * (ilog(Interval.exact(d, w), w) + 1 if d > 1 else Interval.exact(1, w))
    exponent = 1
    for a in inp.A:
        if isinstance(a, PolyLogBound):
            c = c * a.coefficient
            exponent += a.exponent
        else:
            c = c * a
    return PolyLogBound(c, exponent)


# --------------------------------------------------------------------------
# The seven upper-bound steps


@dataclass(frozen=True)
class StepSpec:
    step: int
    form: str
    target: str
    ineq_constant: Fraction       # |Gamma| < c * max{...}
    eta3: object
    priors: dict                  # case -> {gap symbol: step supplying its bound}


_ETA_CASE1B = Div(one_plus(Pow(ALPHA, "n1-n2")), mul(FOUR_SQRT2, one_plus(Pow(TWO, "a1-a2"))))

STEPS = {
    1: StepSpec(1, "Gamma", "min{(a1-a2)log2, (n1-n2)log alpha}", Fraction("43.72"),
                FOUR_SQRT2, {"": {}}),
    2: StepSpec(2, "Gamma1", "min{(a1-a3)log2, (n1-n2)log alpha}", Fraction("13.57"),
                mul(FOUR_SQRT2, one_plus(Pow(TWO, "a1-a2"))), {"": {"a1-a2": 1}}),
    3: StepSpec(3, "GammaA", "(n1-n2)log alpha", Fraction("1.7"),
                mul(FOUR_SQRT2, one_plus(Pow(TWO, "a1-a2", -1), Pow(TWO, "a1-a3", -1))),
                {"": {"a1-a2": 1, "a1-a3": 2}}),
    4: StepSpec(4, "GammaB", "(a1-a3)log2", Fraction("1.1"), _ETA_CASE1B,
                {"": {"a1-a2": 1, "n1-n2": 2}}),
    5: StepSpec(5, "Gamma2", "(a1-a2)log2", Fraction("2.2"),
                Div(one_plus(Pow(ALPHA, "n1-n2")), FOUR_SQRT2), {"": {"n1-n2": 1}}),
    6: StepSpec(6, "GammaB", "(a1-a3)log2", Fraction("1.1"), _ETA_CASE1B,
                {"": {"n1-n2": 1, "a1-a2": 5}}),
    7: StepSpec(7, "Gamma3", "n1 log alpha", Fraction("0.6"),
                Div(mul(FOUR_SQRT2, one_plus(Pow(TWO, "a1-a2", -1), Pow(TWO, "a1-a3", -1))),
                    one_plus(Pow(ALPHA, "n1-n2", -1))),
                {"1A": {"a1-a2": 1, "a1-a3": 2, "n1-n2": 3},
                 "1B": {"a1-a2": 1, "a1-a3": 4, "n1-n2": 2},
                 "2": {"a1-a2": 5, "a1-a3": 6, "n1-n2": 1}}),
}

# coefficient and exponent of each step's conclusion as printed in the article
PRINTED_STEP_BOUNDS = {
    1: (Fraction("8.22e12"), 1),
    2: (Fraction("4e25"), 2),
    3: (Fraction("2e38"), 3),
    4: (Fraction("9.96e37"), 3),
    5: (Fraction("2e25"), 2),
    6: (Fraction("9.96e37"), 3),
    7: (Fraction("4.73e50"), 4),
}


def _log_scale(gap: str, w: int) -> Interval:
    return atom_height(_GAP_BASE[gap], w) * (2 if _GAP_BASE[gap] == "alpha" else 1)


def eta3_height_bound(step: int, priors: dict, precision: int = DEFAULT_PRECISION) -> PolyLogBound:
    """Bound h(eta3) < c (1 + log n1)^K by substituting the prior step bounds.

    With several cases (step 7) the largest coefficient is taken.
    """
    spec = STEPS[step]
    w = precision
    lin = height_upper_bound(spec.eta3, w)
    best = None
    for case, sources in spec.priors.items():
        missing = [g for g in lin.terms if g not in sources]
        if missing:
            raise KeyError(f"step {step}: no prior bound named for {missing}")
        need = {g: sources[g] for g in lin.terms}
        absent = [s for s in need.values() if s not in priors]
        if absent:
            raise KeyError(f"step {step} case {case or '-'}: missing prior step(s) {sorted(set(absent))}")
        K = max([priors[s].exponent for s in need.values()], default=0)
        # gap * h(base) < (h(base)/log_scale) * prior * L^k  <=  ... L^K / L0^(K-k)
        total = lin.constant / (_L0(w) ** K) if K else lin.constant
        for gap, coef in lin.terms.items():
            pb = priors[need[gap]].rescaled(K)
            total = total + coef / _log_scale(gap, w) * pb.coefficient
        bound = PolyLogBound(total, K)
        if best is None or bound.upper > best.upper:
            best = bound
    return best


def base_matveev_factor(precision: int = DEFAULT_PRECISION) -> Interval:
    """1.4 30^6 3^4.5 2^2 (1 + log 2) A1 A2 with A1 = log alpha, A2 = 2 log 2."""
    w = precision
    A1 = atom_height("alpha", w) * 2
    A2 = atom_height("2", w) * 2
    A3 = Interval.exact(1, w)
    return matveev_coefficient(MatveevInput(3, 2, (A1, A2, A3)), w).coefficient


def step_bound(step: int, priors: dict, precision: int = DEFAULT_PRECISION) -> PolyLogBound:
    """Conclusion of one upper-bound step as c (1 + log n1)^k.

    ``priors`` maps earlier step numbers to their PolyLogBounds.
    """
    if step not in STEPS:
        raise KeyError(f"unknown step {step}")
    w = precision
    spec = STEPS[step]
    h3 = eta3_height_bound(step, priors, w)
    A3 = PolyLogBound(h3.coefficient * 2, h3.exponent)   # d_L = 2
    lower = matveev_coefficient(
        MatveevInput(3, 2, (atom_height("alpha", w) * 2, atom_height("2", w) * 2, A3)), w)
    # |Gamma| < c e^{-X}  and  log|Gamma| > -C L^k  give  X < log c + C L^k
    logc = ilog(Interval.from_fraction(spec.ineq_constant, w), w)
    coef = lower.coefficient
    if logc.hi > 0:
        coef = coef + Interval(0, logc.hi, w) / (_L0(w) ** lower.exponent)
    return PolyLogBound(coef, lower.exponent)


def all_step_bounds(precision: int = DEFAULT_PRECISION) -> dict:
    priors: dict = {}
    for s in range(1, 8):
        priors[s] = step_bound(s, priors, precision)
    return priors


def guzman_unwrap(r: int, H, precision: int = DEFAULT_PRECISION) -> Interval:
    """2^r H (log H)^r: the bound on L implied by L / (log L)^r < H."""
    w = precision
    if not isinstance(H, Interval):
        H = Interval.from_fraction(Fraction(H), w)
    if r < 1:
        raise ValueError("r must be at least 1")
    if not H.lower > (4 * r * r) ** r:
        raise ValueError(f"guzman_unwrap needs H > (4 r^2)^r = {(4 * r * r) ** r}")
    return H * (1 << r) * (ilog(H, w) ** r)


# --------------------------------------------------------------------------
# Nonvanishing of the forms at concrete integer points

_FORMS = {
    # form -> (expression for the product of powers, whether it is "1 - product")
    "Gamma": (lambda v: mul(Pow(ALPHA, v["n1"]), Pow(TWO, -v["a1"]), Pow(FOUR_SQRT2, -1)), False),
    "Gamma1": (lambda v: mul(Pow(ALPHA, -v["n1"]), Pow(TWO, v["a2"]), FOUR_SQRT2,
                             one_plus(Pow(TWO, v["a1"] - v["a2"]))), True),
    "GammaA": (lambda v: mul(Pow(ALPHA, -v["n1"]), Pow(TWO, v["a1"]), FOUR_SQRT2,
                             one_plus(Pow(TWO, v["a2"] - v["a1"]), Pow(TWO, v["a3"] - v["a1"]))), True),
    "GammaB": (lambda v: mul(Pow(ALPHA, v["n2"]), Pow(TWO, -v["a2"]),
                             Div(one_plus(Pow(ALPHA, v["n1"] - v["n2"])),
                                 mul(FOUR_SQRT2, one_plus(Pow(TWO, v["a1"] - v["a2"]))))), False),
    "Gamma2": (lambda v: mul(Pow(ALPHA, v["n2"]), Pow(TWO, -v["a1"]),
                             Div(one_plus(Pow(ALPHA, v["n1"] - v["n2"])), FOUR_SQRT2)), False),
    "Gamma3": (lambda v: mul(Pow(ALPHA, -v["n1"]), Pow(TWO, v["a1"]),
                             Div(mul(FOUR_SQRT2, one_plus(Pow(TWO, v["a2"] - v["a1"]),
                                                          Pow(TWO, v["a3"] - v["a1"]))),
                                 one_plus(Pow(ALPHA, v["n2"] - v["n1"])))), True),
}
FORMS = tuple(_FORMS)


def form_value(form: str, witness, w: int) -> Interval:
    if form not in _FORMS:
        raise KeyError(f"unknown form {form!r}")
    if not isinstance(witness, dict):
        witness = dict(zip(("n1", "n2", "a1", "a2", "a3"), witness))
    build, one_minus = _FORMS[form]
    prod = evaluate(build(witness), {}, w)
    return 1 - prod if one_minus else prod - 1


def nonvanishing_check(form: str, witness, precision: int = DEFAULT_PRECISION,
                       cap: int = DEFAULT_PRECISION_CAP) -> bool:
    """True iff the form is certified nonzero at the witness point."""
    p = precision
    while p <= cap:
        if form_value(form, witness, p).excludes_zero():
            return True
        p *= 2
    raise PrecisionError(f"{form} at {witness}: nonvanishing undecided at {cap} bits")
