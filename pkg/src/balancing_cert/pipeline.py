"""End-to-end proof run: search, upper bounds, reductions, certificate.

The upper-bound half works with symbolic ``c (1 + log n1)^k`` bounds and is
unwrapped into an absolute bound on n1.  The reduction half replays the
seven steps with Baker-Davenport reduction; each step's integer bounds
define the parameter grids of the next.  Every constant printed in the
source article is recomputed and compared; disagreements are listed, not
silently adopted.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .linforms import (
    PRINTED_STEP_BOUNDS,
    PolyLogBound,
    all_step_bounds,
    guzman_unwrap,
)
from .realnum import (
    ALPHA,
    DEFAULT_PRECISION,
    DEFAULT_PRECISION_CAP,
    LOG2,
    LOG_ALPHA,
    LOG_FOUR_SQRT2,
    TAU,
    Interval,
    RealOracle,
    _log2_interval,
    alpha_power,
    format_decimal,
    ilog,
)
from .reduction import (
    FamilyPart,
    MuFamily,
    ReductionOutcome,
    ReductionProblem,
    bd_reduce,
    bd_reduce_family,
    min_gap,
    with_base,
)
from .search import SearchBounds, a1_bound, diff_against_printed, solve, verify

N1_SEARCH = 100
PRINTED_M = 79 * 10 ** 58          # 7.9e59
PRINTED_N1_UPPER = Fraction("7.9e59")
CASES = ("1A", "1B", "2")
GAPS = ("a1-a2", "a1-a3", "n1-n2")


class BoundMismatch(AssertionError):
    """A recomputed coefficient exceeds the value printed in the article."""


# --------------------------------------------------------------------------
# Upper bound


@dataclass(frozen=True)
class UpperBound:
    steps: dict
    table: dict                 # case -> gap -> (step, PolyLogBound)
    H: Interval
    n1_upper: Interval          # 2^4 H (log H)^4, the article's reading
    n1_upper_strict: Interval   # 2^4 H (1 + log H)^4, see derive_upper_bound

    @property
    def M(self) -> int:
        """Reduction parameter: the larger of the two unwrapped bounds, rounded up."""
        return max(self.n1_upper.ceil_upper(), self.n1_upper_strict.ceil_upper())


# which step bounds each gap in each case
_TABLE_SOURCES = {
    "1A": {"a1-a2": 1, "a1-a3": 2, "n1-n2": 3},
    "1B": {"a1-a2": 1, "a1-a3": 4, "n1-n2": 2},
    "2": {"a1-a2": 5, "a1-a3": 6, "n1-n2": 1},
}


def derive_upper_bound(precision: int = DEFAULT_PRECISION) -> UpperBound:
    """Steps 1-7 of the upper bound, the case table and the absolute bound on n1.

    The last step gives n1 log(alpha) < C (1 + log n1)^4.  The article feeds
    H = C / log(alpha) to the unwrapping lemma with log n1 in place of
    1 + log n1.  Taking L = e n1 instead (so log L = 1 + log n1) the lemma
    gives n1 < 2^4 H (1 + log H)^4, which is the bound used for M.
    """
    w = precision
    steps = all_step_bounds(w)
    for s, bound in steps.items():
        printed, k = PRINTED_STEP_BOUNDS[s]
        if bound.exponent != k or bound.upper > printed:
            raise BoundMismatch(f"step {s}: computed {bound} exceeds printed "
                                f"{format_decimal(printed, 3)}*(1+log n1)^{k}")
    table = {case: {g: (s, steps[s]) for g, s in src.items()} for case, src in _TABLE_SOURCES.items()}
    H = steps[7].coefficient / LOG_ALPHA.eval(w)
    H = Interval(H.hi, H.hi, H.bits)          # the upper end is what the lemma needs
    n1_upper = guzman_unwrap(4, H, w)
    strict = H * 16 * ((ilog(H, w) + 1) ** 4)
    return UpperBound(steps, table, H, n1_upper, strict)


# --------------------------------------------------------------------------
# Oracles for the pieces of mu


def _log2_rational(label: str, x: Fraction) -> RealOracle:
    return RealOracle(label, lambda w: ilog(Interval.from_fraction(x, w + 8), w + 8) / _log2_interval(w + 8))


def _neg_log2_one_plus_pow2(v: tuple) -> RealOracle:
    (d,) = v
    return -_log2_rational(f"log2(1+2^{d})", Fraction(1 + (1 << d)))


def _neg_log2_three_terms(v: tuple) -> RealOracle:
    d1, d2 = v
    x = Fraction((1 << d2) + (1 << (d2 - d1)) + 1, 1 << d2)
    return -_log2_rational(f"log2(1+2^-{d1}+2^-{d2})", x)


def _log2_one_plus_alpha_pow(m: int) -> RealOracle:
    def compute(w: int) -> Interval:
        x = alpha_power(m, w + 8) + 1
        return ilog(x, w + 8) / _log2_interval(w + 8)
    return RealOracle(f"log2(1+alpha^{m})", compute)


def _pos_alpha(v: tuple) -> RealOracle:
    return _log2_one_plus_alpha_pow(v[0])


def _neg_alpha(v: tuple) -> RealOracle:
    return _log2_one_plus_alpha_pow(-v[0])


MU_BASE = -(LOG_FOUR_SQRT2 / LOG2)      # log(1/(4 sqrt 2)) / log 2 = -5/2


def _singles(lo: int, hi: int) -> tuple:
    return tuple((x,) for x in range(lo, hi + 1))


def _pairs(d1_lo: int, d1_hi: int, d2_lo: int, d2_hi: int) -> tuple:
    return tuple((d1, d2) for d1 in range(d1_lo, d1_hi + 1)
                 for d2 in range(max(d1, d2_lo), d2_hi + 1))


# --------------------------------------------------------------------------
# Reduction steps


@dataclass(frozen=True)
class RStep:
    """One reduction step as set up in the article."""
    step: int
    case: str
    form: str
    c: Fraction                 # |e^Lambda - 1| < c * B^-w
    linear_c: Fraction          # the constant actually divided by log 2
    A_printed: Fraction
    eps_printed: str
    bases: dict                 # "2" or "alpha" -> the gap it bounds
    printed_bounds: dict          # gap -> printed bound
    side_printed: str


RSTEPS = {
    1: RStep(1, "1|2", "Lambda", Fraction("43.72"), Fraction("87.44"), Fraction(127), "= 0.5",
             {"2": "a1-a2", "alpha": "n1-n2"}, {"a1-a2": 214, "n1-n2": 84},
             "min{a1-a2, n1-n2} >= 7"),
    2: RStep(2, "1", "Lambda1", Fraction("13.57"), Fraction("27.52"), Fraction(40), "> 0.00179287",
             {"2": "a1-a3", "alpha": "n1-n2"}, {"a1-a3": 218, "n1-n2": 86},
             "min{a1-a3, n1-n2} >= 5"),
    3: RStep(3, "1A", "LambdaA", Fraction("1.7"), Fraction("3.4"), Fraction(5), "> 0.0000354843",
             {"alpha": "n1-n2"}, {"n1-n2": 87}, "n1-n2 >= 1"),
    4: RStep(4, "1B", "LambdaB", Fraction("1.1"), Fraction("2.2"), Fraction("3.1"), "> 0.0000119685",
             {"2": "a1-a3"}, {"a1-a3": 222}, "a1-a3 >= 2"),
    5: RStep(5, "2", "Lambda2", Fraction("2.2"), Fraction("4.4"), Fraction("6.3"), "> 0.00225968",
             {"2": "a1-a2"}, {"a1-a2": 215}, "a1-a2 >= 3"),
    6: RStep(6, "2", "LambdaB", Fraction("1.1"), Fraction("2.2"), Fraction("3.1"), "not printed",
             {"2": "a1-a3"}, {"a1-a3": 222}, "a1-a3 >= 2"),
    7: RStep(7, "all", "Lambda3", Fraction("0.6"), Fraction("1.2"), Fraction("1.7"), "> 0.00001",
             {"alpha": "n1"}, {"n1": 86}, "none beyond n1 >= 1"),
}

PRINTED_REDUCTION_TABLE = {
    "1A": {"a1-a2": 214, "a1-a3": 218, "n1-n2": 87},
    "1B": {"a1-a2": 214, "a1-a3": 222, "n1-n2": 86},
    "2": {"a1-a2": 215, "a1-a3": 222, "n1-n2": 84},
}
PRINTED_FINAL_N1 = 86
PRINTED_CONVERGENT_INDEX = {1: 126, 2: 124}

# smallest gaps admitted in the grids under --paper-constants
PRINTED_GRID_MIN = {"a1-a2": 7, "a1-a3": 5, "n1-n2": 1}


def _dec(x: Fraction) -> str:
    """Exact decimal for terminating fractions, else 6 significant digits."""
    x = Fraction(x)
    text = repr(float(x))
    return text if Fraction(text) == x else format_decimal(x, 6)


def _A(spec: RStep, w: int = 128) -> Fraction:
    """Upper end of linear_c / log 2."""
    return spec.linear_c / LOG2.eval(w).lower


def _base(name: str):
    return 2 if name == "2" else ALPHA


@dataclass
class ReductionRun:
    M: int
    printed_grids: bool
    outcomes: dict = field(default_factory=dict)     # step -> {gap: ReductionOutcome}
    grids: dict = field(default_factory=dict)        # step -> {param: [lo, hi]}
    table: dict = field(default_factory=dict)        # case -> gap -> int
    final_n1_bound: int | None = None
    side_conditions: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)


def _problem(spec: RStep, mu, base: str, M: int, side: str) -> ReductionProblem:
    return ReductionProblem(TAU, mu, _A(spec), _base(base), M,
                            label=f"step {spec.step}", side_condition=side)


def _run_step(run: ReductionRun, spec: RStep, mu, precision: int, cap: int) -> dict:
    side = _side_text(spec)
    bases = list(spec.bases)
    first = _problem(spec, mu, bases[0], run.M, side)
    if isinstance(mu, MuFamily):
        out = bd_reduce_family(first, precision=precision, cap=cap)
    else:
        out = bd_reduce(first, precision=precision, cap=cap)
    res = {spec.bases[bases[0]]: out}
    for b in bases[1:]:
        res[spec.bases[b]] = with_base(out, _problem(spec, mu, b, run.M, side))
    run.outcomes[spec.step] = res
    return res


def _side_text(spec: RStep) -> str:
    parts = []
    for b, gap in spec.bases.items():
        g = min_gap(spec.c, _base(b))
        if g > 0:
            parts.append(f"{gap} >= {g}")
    return " and ".join(parts) if parts else "none"


def run_reduction(M: int, precision: int = DEFAULT_PRECISION, cap: int = DEFAULT_PRECISION_CAP,
                  printed_grids: bool = False) -> ReductionRun:
    """The seven reduction steps with the case split of the article.

    Grids start at gap 0 by default, so a violated side condition of an
    earlier step (a small gap) is still covered by the family.  With
    ``printed_grids`` they start at PRINTED_GRID_MIN instead.
    """
    if M < 1:
        raise ValueError("M must be positive")
    run = ReductionRun(M, printed_grids)
    lo = PRINTED_GRID_MIN if printed_grids else {g: 0 for g in GAPS}

    s1 = _run_step(run, RSTEPS[1], MU_BASE, precision, cap)
    c1_a12, c2_n = s1["a1-a2"].w_bound, s1["n1-n2"].w_bound

    fam2 = MuFamily("mu2", MU_BASE, (
        FamilyPart(("d",), _singles(lo["a1-a2"], c1_a12), _neg_log2_one_plus_pow2),))
    run.grids[2] = {"d=a1-a2": [lo["a1-a2"], c1_a12]}
    s2 = _run_step(run, RSTEPS[2], fam2, precision, cap)
    c1a_a13, c1b_n = s2["a1-a3"].w_bound, s2["n1-n2"].w_bound

    fam3 = MuFamily("mu3", MU_BASE, (
        FamilyPart(("d1", "d2"), _pairs(lo["a1-a2"], c1_a12, lo["a1-a3"], c1a_a13),
                   _neg_log2_three_terms),))
    run.grids[3] = {"d1=a1-a2": [lo["a1-a2"], c1_a12], "d2=a1-a3": [lo["a1-a3"], c1a_a13]}
    c1a_n = _run_step(run, RSTEPS[3], fam3, precision, cap)["n1-n2"].w_bound

    fam4 = MuFamily("mu4", MU_BASE, (
        FamilyPart(("d",), _singles(lo["a1-a2"], c1_a12), _neg_log2_one_plus_pow2),
        FamilyPart(("m",), _singles(lo["n1-n2"], c1b_n), _pos_alpha)))
    run.grids[4] = {"d=a1-a2": [lo["a1-a2"], c1_a12], "m=n1-n2": [lo["n1-n2"], c1b_n]}
    c1b_a13 = _run_step(run, RSTEPS[4], fam4, precision, cap)["a1-a3"].w_bound

    fam5 = MuFamily("mu5", MU_BASE, (
        FamilyPart(("m",), _singles(lo["n1-n2"], c2_n), _pos_alpha),))
    run.grids[5] = {"m=n1-n2": [lo["n1-n2"], c2_n]}
    c2_a12 = _run_step(run, RSTEPS[5], fam5, precision, cap)["a1-a2"].w_bound

    fam6 = MuFamily("mu6", MU_BASE, (
        FamilyPart(("d",), _singles(lo["a1-a2"], c2_a12), _neg_log2_one_plus_pow2),
        FamilyPart(("m",), _singles(lo["n1-n2"], c2_n), _pos_alpha)))
    run.grids[6] = {"d=a1-a2": [lo["a1-a2"], c2_a12], "m=n1-n2": [lo["n1-n2"], c2_n]}
    c2_a13 = _run_step(run, RSTEPS[6], fam6, precision, cap)["a1-a3"].w_bound

    run.table = {
        "1A": {"a1-a2": c1_a12, "a1-a3": c1a_a13, "n1-n2": c1a_n},
        "1B": {"a1-a2": c1_a12, "a1-a3": c1b_a13, "n1-n2": c1b_n},
        "2": {"a1-a2": c2_a12, "a1-a3": c2_a13, "n1-n2": c2_n},
    }
    # the article merges the per-case maxima for the last step
    top = {g: max(run.table[c][g] for c in CASES) for g in GAPS}
    fam7 = MuFamily("mu7", MU_BASE, (
        FamilyPart(("d1", "d2"), _pairs(lo["a1-a2"], top["a1-a2"], lo["a1-a3"], top["a1-a3"]),
                   _neg_log2_three_terms),
        FamilyPart(("m",), _singles(lo["n1-n2"], top["n1-n2"]), _neg_alpha)))
    run.grids[7] = {"d1=a1-a2": [lo["a1-a2"], top["a1-a2"]],
                    "d2=a1-a3": [lo["a1-a3"], top["a1-a3"]],
                    "m=n1-n2": [lo["n1-n2"], top["n1-n2"]]}
    run.final_n1_bound = _run_step(run, RSTEPS[7], fam7, precision, cap)["n1"].w_bound

    run.side_conditions = _side_conditions(run)
    run.discrepancies = _reduction_discrepancies(run)
    return run


def _side_conditions(run: ReductionRun) -> list:
    """Each linearization assumption and how the complementary case is covered."""
    out = []
    for s, spec in RSTEPS.items():
        for b, gap in spec.bases.items():
            g = min_gap(spec.c, _base(b))
            if g == 0:
                continue
            bound = run.outcomes[s][gap].w_bound if gap != "n1" else run.final_n1_bound
            if gap == "n1":
                ok = g - 1 <= N1_SEARCH
                how = f"n1 <= {g - 1} lies in the searched range n1 <= {N1_SEARCH}"
            else:
                ok = g - 1 <= bound
                how = f"{gap} <= {g - 1} already satisfies this step's conclusion {gap} <= {bound}"
            out.append({"step": s, "assumption": f"{gap} >= {g}", "printed": spec.side_printed,
                        "discharged_by": "pipeline" if ok else None, "how": how, "discharged": ok})
    # grids that skip small gaps leave those members unreduced
    for s, grid in sorted(run.grids.items()):
        for name, (lo, hi) in grid.items():
            ok = lo == 0
            out.append({
                "step": s, "assumption": f"grid {name} in [{lo}, {hi}]", "printed": "grid not stated",
                "discharged_by": "reduction" if ok else None,
                "how": ("grid starts at 0, every value up to the prior bound is reduced" if ok else
                        f"values {name.split('=')[1]} < {lo} are not reduced by any step"),
                "discharged": ok})
    return out


def _reduction_discrepancies(run: ReductionRun) -> list:
    out = []
    for s, spec in RSTEPS.items():
        A = _A(spec)
        if A > spec.A_printed:
            out.append({"where": f"reduction step {s}: A",
                        "printed": _dec(spec.A_printed),
                        "computed": format_decimal(A, 6),
                        "note": f"{_dec(spec.linear_c)}/log 2 exceeds the printed A; computed A is used"})
        first = next(iter(run.outcomes[s].values()))
        eps = first.min_epsilon if first.min_epsilon is not None else first.epsilon
        out.append({"where": f"reduction step {s}: epsilon",
                    "printed": spec.eps_printed,
                    "computed": format_decimal(eps, 6, up=False),
                    "note": "certified lower bound over all members; computed value governs"})
        for gap, printed in spec.printed_bounds.items():
            got = run.final_n1_bound if gap == "n1" else run.outcomes[s][gap].w_bound
            if got != printed:
                out.append({"where": f"reduction step {s}: {gap}", "printed": str(printed),
                            "computed": str(got), "note": f"difference {got - printed:+d}"})
        if s in PRINTED_CONVERGENT_INDEX and first.convergent_used.index != PRINTED_CONVERGENT_INDEX[s]:
            out.append({"where": f"reduction step {s}: convergent index",
                        "printed": str(PRINTED_CONVERGENT_INDEX[s]),
                        "computed": str(first.convergent_used.index),
                        "note": "integer part counted as index 0 here"})
    s2 = RSTEPS[2]
    out.append({"where": "reduction step 2: linearized constant", "printed": "27.14 then 27.52",
                "computed": _dec(2 * s2.c), "note": "27.52 used as the operative constant"})
    return out


# --------------------------------------------------------------------------
# Certificate


def real_json(x, digits: int = 6, up: bool = True, bits: int = DEFAULT_PRECISION) -> dict:
    if isinstance(x, Interval):
        bits = x.bits
        x = x.upper if up else x.lower
    return {"decimal": format_decimal(Fraction(x), digits, up), "digits": str(digits),
            "rounding": "up" if up else "down", "bits": str(bits)}


def polylog_json(b: PolyLogBound) -> dict:
    return {"coefficient": real_json(b.coefficient, 4), "exponent": str(b.exponent),
            "text": str(b)}


def outcome_json(o: ReductionOutcome) -> dict:
    d = {
        "convergent_index": str(o.convergent_used.index),
        "q": str(o.convergent_used.q),
        "epsilon": real_json(o.epsilon, 6, up=False, bits=o.precision),
        "threshold": real_json(o.threshold, 8, bits=128),
        "w_bound": str(o.w_bound),
        "side_condition": o.side_condition,
        "convergents_skipped": str(o.skipped),
        "members": str(o.members),
    }
    if o.param is not None:
        d["worst_member"] = [str(v) for v in o.param]
    if o.min_epsilon is not None:
        d["min_epsilon"] = real_json(o.min_epsilon, 6, up=False, bits=o.precision)
    if o.resolved:
        d["resolved_per_convergent"] = [[str(i), str(n)] for i, n in o.resolved]
    return d


@dataclass
class Certificate:
    data: dict

    @property
    def verdict(self) -> str:
        return self.data["verdict"]["status"]

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"


def solutions_json(n1_max: int, jobs: int = 1) -> tuple[dict, list, int]:
    a1_max = a1_bound(n1_max)
    out, disc = {}, []
    for k in (1, 2, 3):
        found = solve(k, SearchBounds(n1_max, a1_max), jobs=jobs)
        diff = diff_against_printed(k, found)
        out[str(k)] = {
            "computed": [str(s) for s in found],
            "printed": [str(s) for s in diff["printed"]],
            "printed_only": [str(s) for s in diff["printed_only"]],
            "computed_only": [{"solution": str(s), "verifies": verify(s)} for s in diff["computed_only"]],
            "printed_failing_verification": [str(s) for s in diff["printed_failing_verification"]],
        }
        for s in diff["printed_failing_verification"]:
            disc.append({"where": f"solutions k={k}", "printed": str(s), "computed": "absent",
                         "note": "printed tuple fails exact verification"})
        for s in diff["computed_only"]:
            disc.append({"where": f"solutions k={k}", "printed": "absent", "computed": str(s),
                         "note": "found by exhaustive search; verifies exactly" if verify(s)
                         else "found by search but fails verification"})
        for s in diff["printed_only"]:
            if verify(s):
                disc.append({"where": f"solutions k={k}", "printed": str(s), "computed": "absent",
                             "note": "printed tuple verifies but lies outside the searched range"})
    return out, disc, a1_max


def full_certificate(n1_max: int = N1_SEARCH, precision: int = DEFAULT_PRECISION,
                     cap: int = DEFAULT_PRECISION_CAP, jobs: int = 1, printed_constants: bool = False,
                     M: int | None = None) -> Certificate:
    """Search, bounds, reduction and the completeness verdict."""
    solutions, disc, a1_max = solutions_json(n1_max, jobs)

    ub = derive_upper_bound(precision)
    if M is None:
        M = PRINTED_M if printed_constants else ub.M
    run = run_reduction(M, precision, cap, printed_grids=printed_constants)
    disc += bound_discrepancies(ub) + run.discrepancies

    failing = []
    if a1_max < a1_bound(n1_max):
        failing.append("search a1 range below a1_bound")
    if n1_max < N1_SEARCH:
        failing.append(f"search cutoff n1 <= {n1_max} is below the n1 > {N1_SEARCH} "
                       f"assumed by the bound derivation")
    if run.final_n1_bound > n1_max:
        failing.append(f"final reduced bound n1 <= {run.final_n1_bound} exceeds the search cutoff "
                       f"n1 <= {n1_max}")
    if M < ub.n1_upper_strict.ceil_upper():
        failing.append(f"M = {M} is below the unwrapped bound on n1")
    for sc in run.side_conditions:
        if not sc["discharged"]:
            failing.append(f"step {sc['step']}: {sc['assumption']} not discharged ({sc['how']})")

    data = {
        "solutions": solutions,
        "search": {"n1_max": str(n1_max), "a1_max": str(a1_max)},
        "bound_table": bound_table_json(ub),
        "n1_upper": {"printed_reading": real_json(ub.n1_upper, 4),
                     "strict": real_json(ub.n1_upper_strict, 4),
                     "H": real_json(ub.H, 6)},
        "reduction_table": {
            "M": str(M),
            "table": {c: {g: str(v) for g, v in run.table[c].items()} for c in CASES},
            "grids": {str(s): {k: [str(a), str(b)] for k, (a, b) in g.items()}
                      for s, g in run.grids.items()},
            "steps": {str(s): {g: outcome_json(o) for g, o in res.items()}
                      for s, res in run.outcomes.items()},
        },
        "final_n1_bound": str(run.final_n1_bound),
        "side_conditions": [{k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v)
                             for k, v in sc.items()} for sc in run.side_conditions],
        "discrepancies": disc,
        "verdict": {"status": "complete" if not failing else "incomplete", "failing": failing},
    }
    return Certificate(data)


def bound_table_json(ub: UpperBound) -> dict:
    table = {}
    for case in CASES:
        table[case] = {}
        for gap, (s, b) in ub.table[case].items():
            printed, k = PRINTED_STEP_BOUNDS[s]
            table[case][gap] = {"step": str(s), "bound": polylog_json(b),
                                "printed": f"{format_decimal(printed, 3)}*(1+log n1)^{k}"}
    table["steps"] = {str(s): polylog_json(b) for s, b in ub.steps.items()}
    return table


def bound_discrepancies(ub: UpperBound) -> list:
    out = []
    for s, b in ub.steps.items():
        printed, _ = PRINTED_STEP_BOUNDS[s]
        rounded = Fraction(format_decimal(b.upper, 3))
        if rounded != printed:
            out.append({"where": f"upper bound step {s}", "printed": format_decimal(printed, 3),
                        "computed": format_decimal(b.upper, 4),
                        "note": "computed coefficient is below the printed one"})
    if ub.n1_upper_strict.upper > PRINTED_N1_UPPER:
        out.append({"where": "absolute bound on n1", "printed": "7.9e59",
                    "computed": format_decimal(ub.n1_upper_strict.upper, 4),
                    "note": "with 1 + log n1 in the unwrapping lemma; used for M"})
    return out
