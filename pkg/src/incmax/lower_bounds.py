"""Adversarial recurrences and lower-bound instance builders.

Two interlocking tools live here.  First, the scalar recurrences that
describe how fast a scaling strategy is forced to shed density: variant A
(parametrized by a start density and a spent-prefix ratio) governs runs
continued past an arbitrary prefix, variant B (parameter-free start)
governs the strongest known deterministic bound.  Their characteristic
polynomials decide everything: once the discriminant pushes the roots into
a complex pair, the reciprocal sequence oscillates, some t_n turns
negative, and no valid continuation exists.

Second, the builders that turn those traces into concrete value curves: a
single-start exclusion ladder grafted onto any base curve, a chained
version that defeats any finite set of starting sizes, and the bounded
staircase instance on which no solution at all is competitive below a
ratio of about 2.246, together with the exhaustive certifier for that
claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .continuous import (
    GOLDEN_RATIO_PLUS_ONE,
    NOT_COMPETITIVE,
    PiecewiseLinearValue,
    build_from_points,
    check_competitive,
    greedy_scaling,
)
from .errors import DomainExhausted, EpsilonTooLarge, RhoTooLarge
from .serialize import Num, format_number

COMPLETED = "completed"
ZERO_DENOMINATOR = "zero_denominator"
UNDERFLOW = "underflow"

_AUTO_EPS_START = 1e-3
_AUTO_EPS_HALVINGS = 40


@dataclass(frozen=True)
class RecurrenceTrace:
    variant: str
    params: dict
    values: Tuple[float, ...]
    first_negative: Optional[int]
    status: str

    @property
    def reciprocals(self) -> Tuple[float, ...]:
        return tuple(1 / t for t in self.values)

    def rows(self):
        """CSV rows (n, t_n, 1/t_n); high-precision values collapse to binary64."""
        return [(n, float(t), float(1 / t) if t != 0 else math.inf)
                for n, t in enumerate(self.values)]


def _to_working(x, mp):
    if mp is None:
        return float(x)
    return mp.mpf(x.numerator) / mp.mpf(x.denominator) if isinstance(x, Fraction) else mp.mpf(x)


def _working_context(precision: Optional[int]):
    if precision is None:
        return None
    import mpmath
    mpmath.mp.prec = precision
    return mpmath


def recurrence_a(alpha: Num, beta: Num, rho: Num, eps: Num, n_max: int = 10 ** 5,
                 precision: Optional[int] = None) -> RecurrenceTrace:
    """Iterate the prefix-continuation recurrence from t_0 = beta.

    t_{n+1} = 1 / ( rho/(t_n (1-eps)) - sum_{j<=n} (rho+eps)^{j-n}/t_j
                    - alpha/(rho+eps)^n )

    The damped sum is carried in rescaled form so no power overflows.  The
    iteration stops at the first negative entry (which is the event the
    trace exists to find), at a vanishing denominator, or after n_max
    steps.
    """
    if beta <= 0 or rho <= 1 or eps < 0:
        raise ValueError("need beta > 0, rho > 1, eps >= 0")
    if n_max > 10 ** 5:
        raise ValueError("n_max capped at 1e5")
    mp = _working_context(precision)
    alpha, beta, rho, eps = (_to_working(x, mp) for x in (alpha, beta, rho, eps))
    one = 1 if mp is None else mp.mpf(1)
    t = [beta]
    damped = one / beta          # sum_{j<=n} (rho+eps)^(j-n) / t_j
    alpha_scale = alpha          # alpha / (rho+eps)^n
    status = COMPLETED
    first_negative = None
    for _ in range(n_max):
        denom = rho / (t[-1] * (1 - eps)) - damped - alpha_scale
        if abs(denom) < 1e-300:
            status = ZERO_DENOMINATOR
            break
        nxt = one / denom
        if abs(nxt) < 1e-300:
            status = UNDERFLOW
            break
        t.append(nxt)
        if nxt < 0:
            first_negative = len(t) - 1
            break
        damped = damped / (rho + eps) + one / nxt
        alpha_scale = alpha_scale / (rho + eps)
    return RecurrenceTrace("A", {"alpha": alpha, "beta": beta, "rho": rho, "eps": eps},
                           tuple(t), first_negative, status)


def recurrence_b(rho: Num, eps: Num, n_max: int = 10 ** 5,
                 precision: Optional[int] = None) -> RecurrenceTrace:
    """Iterate the parameter-free staircase recurrence t_0 = 1, t_1 = (1-eps)/rho.

    t_n = (1-eps) / ( rho/t_{n-1} - 1/t_{n-2}
                      - (1/rho) sum_{j<=n-3} (rho+eps)^{j+2-n}/t_j )
    """
    if rho <= 1 or eps < 0:
        raise ValueError("need rho > 1, eps >= 0")
    if n_max > 10 ** 5:
        raise ValueError("n_max capped at 1e5")
    mp = _working_context(precision)
    rho, eps = (_to_working(x, mp) for x in (rho, eps))
    one = 1 if mp is None else mp.mpf(1)
    t = [one, (1 - eps) / rho]
    damped = 0 * one             # sum_{j<=n-3} (rho+eps)^(j-(n-3)) / t_j, for current n
    status = COMPLETED
    first_negative = None
    if t[1] < 0:  # pragma: no cover - impossible for rho > 1, eps < 1
        first_negative = 1
    for n in range(2, n_max + 1):
        denom = rho / t[n - 1] - one / t[n - 2] - damped / (rho * (rho + eps))
        if abs(denom) < 1e-300:
            status = ZERO_DENOMINATOR
            break
        nxt = (1 - eps) / denom
        if abs(nxt) < 1e-300:
            # monotone decay past the critical ratio leaves binary64 range
            status = UNDERFLOW
            break
        t.append(nxt)
        if nxt < 0:
            first_negative = n
            break
        # advance the damped sum to cover j <= n-2 for the next step
        damped = damped / (rho + eps) + one / t[n - 2]
    return RecurrenceTrace("B", {"rho": rho, "eps": eps},
                           tuple(t), first_negative, status)


@dataclass(frozen=True)
class CharacteristicAnalysis:
    variant: str
    coefficients: Tuple[Num, ...]
    discriminant: Num
    roots: Tuple[complex, ...]
    regime: str
    lambdas: Optional[Tuple[complex, ...]] = None


def discriminant_a(rho: Num, eps: Num = 0) -> Num:
    """Discriminant of the quadratic x^2 - (1/(rho+eps) + rho/(1-eps) - 1) x
    + rho/((1-eps)(rho+eps)), in the half-coefficient form h^2 - product."""
    h = (Fraction(1, 2) if isinstance(rho, (int, Fraction)) and isinstance(eps, (int, Fraction))
         else 0.5)
    half = h / (rho + eps) + h * rho / (1 - eps) - h
    return half * half - rho / ((1 - eps) * (rho + eps))


def discriminant_a_closed_form(rho: Num) -> Num:
    """At eps = 0: (1/(2 rho) + rho/2 - 1/2)^2 - 1."""
    if isinstance(rho, (int, Fraction)):
        rho = Fraction(rho)
        g = Fraction(1, 2) / rho + rho / 2 - Fraction(1, 2)
    else:
        g = 1 / (2 * rho) + rho / 2 - 0.5
    return g * g - 1


def discriminant_b_closed_form(rho: Num) -> Num:
    """At eps = 0: (-4 rho^6 + 24 rho^4 - rho^3 - 30 rho^2 + 31 rho - 4) / (108 rho^5)."""
    if isinstance(rho, (int, Fraction)):
        rho = Fraction(rho)
    num = -4 * rho ** 6 + 24 * rho ** 4 - rho ** 3 - 30 * rho ** 2 + 31 * rho - 4
    den = 108 * rho ** 5
    return num / den


def det_lb_polynomial(rho: Num) -> Num:
    """The degree-6 numerator whose root just above 2.24 is the bound's edge."""
    if isinstance(rho, (int, Fraction)):
        rho = Fraction(rho)
    return -4 * rho ** 6 + 24 * rho ** 4 - rho ** 3 - 30 * rho ** 2 + 31 * rho - 4


def characteristic_analysis(variant: str, rho: Num, eps: Num = 0) -> CharacteristicAnalysis:
    """Coefficients, discriminant, closed-form roots and regime of a variant.

    Variant A is a quadratic in the reciprocal sequence; a negative
    discriminant means a complex pair and oscillation.  Variant B is a
    cubic; a positive discriminant means one real root plus a complex
    pair.  For B the starting values are parameter free, so the weights
    lambda_1..3 that express a_n = sum lambda_i r_i^n are solved too.
    """
    if rho <= 1 or not 0 <= eps < 1:
        raise ValueError("need rho > 1 and 0 <= eps < 1")
    if variant == "A":
        b1 = 1 / (rho + eps) + rho / (1 - eps) - 1
        b0 = rho / ((1 - eps) * (rho + eps))
        disc = discriminant_a(rho, eps)
        h = b1 / 2
        if disc < 0:
            s = math.sqrt(-float(disc))
            roots = (complex(h, s), complex(h, -s))
            regime = "complex_pair"
        else:
            s = math.sqrt(float(disc))
            roots = (complex(h + s, 0), complex(h - s, 0))
            regime = "two_real"
        return CharacteristicAnalysis("A", (1, -b1, b0), disc, roots, regime)
    if variant == "B":
        a = -(rho ** 2 + 1 + rho * eps - eps) / ((1 - eps) * (rho + eps))
        b = (2 * rho + eps) / ((1 - eps) * (rho + eps))
        c = -(1 - 1 / rho) / ((1 - eps) * (rho + eps))
        p = b - a * a / 3
        q = 2 * a ** 3 / 27 - a * b / 3 + c
        disc = (q / 2) ** 2 + (p / 3) ** 3
        shift = -a / 3
        if disc > 0:
            rt = math.sqrt(float(disc))
            u = _cbrt(-float(q) / 2 + rt)
            v = _cbrt(-float(q) / 2 - rt)
            y1 = u + v
            re, im = -y1 / 2, math.sqrt(3) / 2 * (u - v)
            roots = (complex(y1 + shift, 0),
                     complex(re + shift, im), complex(re + shift, -im))
            regime = "one_real_complex_pair"
        else:
            pf, qf = float(p), float(q)
            r = 2 * math.sqrt(-pf / 3)
            theta = math.acos(max(-1.0, min(1.0, 3 * qf / (pf * r))))
            roots = tuple(complex(r * math.cos((theta - 2 * math.pi * k) / 3) + shift, 0)
                          for k in range(3))
            regime = "three_real"
        lambdas = _solve_cubic_weights(roots, rho, eps)
        return CharacteristicAnalysis("B", (1, a, b, c), disc, roots, regime, lambdas)
    raise ValueError(f"unknown variant {variant!r}")


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _solve_cubic_weights(roots, rho, eps) -> Tuple[complex, ...]:
    """Weights matching a_0 = 1, a_1 = rho/(1-eps), a_2 = (rho^2-1+eps)/(1-eps)^2."""
    a0 = 1.0
    a1 = float(rho) / (1 - float(eps))
    a2 = (float(rho) ** 2 - 1 + float(eps)) / (1 - float(eps)) ** 2
    r1, r2, r3 = roots
    # Cramer's rule on the 3x3 Vandermonde system.
    det = ((r2 - r1) * (r3 - r1) * (r3 - r2))
    l1 = (a2 - a1 * (r2 + r3) + a0 * r2 * r3) / ((r1 - r2) * (r1 - r3))
    l2 = (a2 - a1 * (r1 + r3) + a0 * r1 * r3) / ((r2 - r1) * (r2 - r3))
    l3 = (a2 - a1 * (r1 + r2) + a0 * r1 * r2) / ((r3 - r1) * (r3 - r2))
    if abs(det) < 1e-30:  # pragma: no cover - repeated roots off the tested grids
        raise ZeroDivisionError("repeated characteristic roots")
    return (l1, l2, l3)


def closed_form_a(alpha: Num, beta: Num, rho: Num, eps: Num):
    """Root pair and weights so the reciprocals satisfy a_n = 2 Re(lam x^n)
    in the complex regime (or lam x^n + mu y^n with two real roots)."""
    analysis = characteristic_analysis("A", rho, eps)
    x, y = analysis.roots
    a0 = 1 / float(beta)
    a1 = float(rho) / (float(beta) * (1 - float(eps))) - 1 / float(beta) - float(alpha)
    lam = (a1 - a0 * y) / (x - y)
    mu = a0 - lam
    return analysis, x, y, lam, mu


def rho_star(tol: float = 1e-12) -> float:
    """Unique root of the degree-6 polynomial in [2, 2.4], by bisection."""
    lo, hi = 2.0, 2.4
    f_lo = float(det_lb_polynomial(lo))
    if f_lo <= 0 or float(det_lb_polynomial(hi)) >= 0:  # pragma: no cover
        raise ArithmeticError("bracket does not straddle the root")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if float(det_lb_polynomial(mid)) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# Exclusion ladders


@dataclass(frozen=True)
class ExclusionResult:
    instance: PiecewiseLinearValue
    start: Num
    base_failed: bool
    safe_extension_size: Num
    k: Optional[int]
    epsilon: Optional[float]
    t: Tuple[float, ...]
    ladder: Tuple[Tuple[Num, Num], ...]


def _run_base_until(base: PiecewiseLinearValue, c_1: Num, rho: Num, preserve: Num):
    """Replay the scaling run on base until a block lands beyond preserve.

    Returns (sizes, failed, fail_witness).  A run that stops before
    producing such a block is already not competitive; the witness is a
    size by which the failure is visible, so preserving the curve up to it
    keeps the failure intact.
    """
    sizes = [c_1]
    spent = c_1
    if base.density_at(c_1) < 1 / rho:
        # Not competitive within the first block already.
        return sizes, True, max(preserve, c_1)
    while True:
        current = sizes[-1]
        try:
            p = base.reach(current, rho)
        except DomainExhausted:
            raise RhoTooLarge("the run covers the base curve; nothing to exclude")
        if p == math.inf:
            raise RhoTooLarge("the run covers the base curve; nothing to exclude")
        if p <= spent:
            return sizes, True, max(preserve, spent, p) + 1
        forced = base.value_at(current) / (p - spent)
        nxt = base.next_size(forced)
        if nxt is None or nxt <= current:
            return sizes, True, max(preserve, spent, p) + 1
        sizes.append(nxt)
        spent += nxt
        if nxt > preserve and len(sizes) >= 2:
            return sizes, False, None
        if len(sizes) > 10 ** 4:  # pragma: no cover - defensive
            raise RhoTooLarge("run never passed the preserved region")


_TAIL_DECAY = 1 / 32
_TAIL_DOUBLINGS = 60


def _exclusion_ladder(v_k: float, t: Sequence[float], rho: float, eps: float, ell: int):
    pts = []
    for n in range(ell + 1):
        grow = (rho + eps) ** n
        pts.append((grow * v_k / t[n], grow * v_k))
        pts.append((rho * grow * v_k / ((1 - eps) * t[n]), rho * grow * v_k))
    return pts


def _decaying_tail(x: float, v: float):
    """Breakpoints continuing past (x, v) with density shrinking per doubling.

    Everything past the ladder is free to choose, but a constant-density
    ray would leave later runs (and chained exclusions) stuck at a density
    floor.  Shrinking the density geometrically keeps every subsequent
    next-size query finite while staying below the ladder-end density, so
    the engineered failure is untouched.
    """
    pts = []
    for _ in range(_TAIL_DOUBLINGS):
        x, v = 2 * x, 2 * (1 - _TAIL_DECAY) * v
        pts.append((x, v))
    return pts


def build_exclusion_instance(base: PiecewiseLinearValue, c_1: Num, rho: Num,
                             eps: Optional[float] = None,
                             preserve_up_to: Optional[Num] = None) -> ExclusionResult:
    """Extend base so the scaling run starting at c_1 fails at ratio rho.

    The curve is kept intact up to the preserved size (at least c_1, and
    at least any caller-supplied boundary so earlier surgery survives).
    Beyond the first block past that boundary, the curve is replaced by a
    ladder of alternating plateaus and rises derived from the variant-A
    recurrence seeded with the run's own density and spent prefix.  Along
    the ladder the run is forced to reproduce densities t_0, t_1, ... until
    the first reciprocal decrease, where no valid next block remains.

    When the run already fails on base before leaving the preserved
    region, base is returned unchanged with a safe size recording where
    the failure is witnessed.
    """
    rho_f = float(rho)
    if not 1 < rho_f < GOLDEN_RATIO_PLUS_ONE:
        raise RhoTooLarge(f"exclusion needs a ratio strictly inside (1, {GOLDEN_RATIO_PLUS_ONE})")
    preserve = max(preserve_up_to if preserve_up_to is not None else c_1, c_1)
    sizes, failed, witness = _run_base_until(base, c_1, rho, preserve)
    if failed:
        return ExclusionResult(base, c_1, True, witness, None, None, (), ())
    k = len(sizes)
    c_k = sizes[-1]
    z = sum(sizes[:-1])
    v_k = float(base.value_at(c_k))
    t0 = float(base.density_at(c_k))
    alpha = float(z) / v_k

    def attempt(eps_try: float):
        trace = recurrence_a(alpha, t0, rho_f, eps_try)
        t = trace.values
        ell = None
        for n in range(len(t) - 1):
            if t[n] > 0 and (t[n + 1] < 0 or 1 / t[n] > 1 / t[n + 1]):
                ell = n
                break
        if ell is None:
            return None
        pts = _exclusion_ladder(v_k, t, rho_f, eps_try, ell)
        pts[0] = (c_k, base.value_at(c_k))  # exact junction with the base curve
        try:
            new_curve = build_from_points(base, pts + _decaying_tail(*pts[-1]))
        except Exception:
            return None
        return new_curve, t[:ell + 2], pts, ell

    if eps is not None:
        built = attempt(float(eps))
        if built is None:
            raise EpsilonTooLarge(f"ladder for eps={eps} violates the construction conditions")
    else:
        built = None
        eps = _AUTO_EPS_START
        for _ in range(_AUTO_EPS_HALVINGS):
            built = attempt(eps)
            if built is not None:
                break
            eps /= 2
        if built is None:
            raise EpsilonTooLarge("no admissible eps found while halving")
    new_curve, t_used, pts, ell = built
    safe = pts[-1][0] + 1
    return ExclusionResult(new_curve, c_1, False, safe, k, float(eps), tuple(t_used), tuple(pts))


@dataclass(frozen=True)
class ChainResult:
    instance: PiecewiseLinearValue
    exclusions: Tuple[ExclusionResult, ...]


def chain_exclusions(starts: Sequence[Num], rho: Num,
                     base: Optional[PiecewiseLinearValue] = None,
                     eps: Optional[float] = None) -> ChainResult:
    """Defeat every listed starting size at once.

    Runs the single-start builder repeatedly, each time preserving the
    curve up to the previous safe-extension size so earlier ladders keep
    their effect.  Starts must be given in increasing order.
    """
    starts = list(starts)
    if not starts:
        raise ValueError("no starting sizes given")
    if sorted(starts) != starts:
        raise ValueError("starting sizes must be sorted increasingly")
    if base is None:
        from .continuous import tilted_identity
        base = tilted_identity()
    results = []
    current = base
    preserve = starts[-1]
    for c_1 in starts:
        res = build_exclusion_instance(current, c_1, rho, eps, preserve_up_to=preserve)
        results.append(res)
        current = res.instance
        preserve = max(preserve, res.safe_extension_size)
    return ChainResult(current, tuple(results))


# ---------------------------------------------------------------------------
# The bounded staircase instance and its infeasibility certificate


@dataclass(frozen=True)
class DetLowerBound:
    instance: PiecewiseLinearValue
    ell: int
    t: Tuple[float, ...]
    epsilon: float
    rho: float


def _detlb_ell(trace: RecurrenceTrace) -> Optional[int]:
    t = trace.values
    for n in range(len(t) - 1):
        if t[n] > 0 and (t[n + 1] < 0 or 1 / t[n] >= 1 / t[n + 1]):
            return n
    return None


def build_det_lb_instance(rho: float, eps: Optional[float] = None,
                          n_max: int = 10 ** 5) -> DetLowerBound:
    """Bounded staircase curve admitting no rho-competitive solution.

    Plateaus sit at levels (rho+eps)^n between sizes v_n/t_n and
    v_n/t_{n+1}, joined by rays through the origin of density t_{n+1},
    for n up to the first index ell where the reciprocal sequence stops
    increasing.  The curve then stays flat forever, so its value is
    bounded and solutions must eventually cover the cap.

    eps is halved from 1e-3 until ell matches its eps=0 value and the
    perturbation inequality 1/t_{n+1} > eps/(rho+eps) (1/t_n + damped sum)
    holds below ell.  An explicit eps that fails those checks raises
    EpsilonTooLarge; if no ell exists within n_max the ratio is too big.
    """
    rho = float(rho)
    if rho <= 1:
        raise RhoTooLarge("need rho > 1")
    base_trace = recurrence_b(rho, 0.0, n_max)
    ell_zero = _detlb_ell(base_trace)
    if ell_zero is None:
        raise RhoTooLarge(f"no reciprocal decrease within {n_max} steps at rho={rho}")

    def admissible(eps_try: float):
        trace = recurrence_b(rho, eps_try, n_max)
        ell = _detlb_ell(trace)
        if ell is None or ell != ell_zero:
            return None
        t = trace.values
        damped = 0.0  # becomes sum_{j<=n} (rho+eps)^(j-n-1) / t_j after the update
        for n in range(ell):
            damped = damped / (rho + eps_try) + (1 / t[n]) / (rho + eps_try)
            if not 1 / t[n + 1] > eps_try * damped:
                return None
        if any(t[n + 1] >= t[n] for n in range(ell)):
            return None
        return trace, ell

    if eps is not None:
        got = admissible(float(eps))
        if got is None:
            raise EpsilonTooLarge(f"eps={eps} breaks the construction conditions")
        chosen = float(eps)
    else:
        chosen = _AUTO_EPS_START
        got = None
        for _ in range(_AUTO_EPS_HALVINGS):
            got = admissible(chosen)
            if got is not None:
                break
            chosen /= 2
        if got is None:
            raise EpsilonTooLarge("no admissible eps found while halving")
    trace, ell = got
    t = trace.values
    pts = [(1.0, 1.0)]
    for n in range(ell):
        level = (rho + chosen) ** n
        pts.append((level / t[n + 1], level))
        pts.append(((rho + chosen) ** (n + 1) / t[n + 1], (rho + chosen) ** (n + 1)))
    curve = PiecewiseLinearValue(pts, extend_slope=0)
    return DetLowerBound(curve, ell, tuple(t[:ell + 2]), chosen, rho)


@dataclass(frozen=True)
class Certificate:
    rho: float
    epsilon: Optional[float]
    ell: int
    t: Tuple[float, ...]
    infeasible: bool
    candidates_checked: int
    search_log: Tuple[Tuple[Tuple[float, ...], str], ...]
    witness: Optional[Tuple[float, ...]]

    def to_json(self) -> dict:
        return {
            "rho": self.rho,
            "epsilon": self.epsilon,
            "ell": self.ell,
            "t": [float(x) for x in self.t],
            "infeasible": self.infeasible,
            "candidates_checked": self.candidates_checked,
        }


def _min_feasible_size(instance: PiecewiseLinearValue, rho: float, dens: float,
                       next_dens: float, spent: float, lo: float, hi: float) -> Optional[float]:
    """Smallest c in [lo, hi] with spent + c + (dens c)/next_dens <= reach(c).

    The left side is linear in c while the reach of a block of density
    dens is piecewise linear with upward jumps where the target value
    crosses a plateau level, so the slack changes sign at most once per
    piece of the subdivision induced by the curve's breakpoint values.
    Scanning the cuts and bisecting inside the first sign change finds the
    boundary; the returned size satisfies the constraint outright in
    float arithmetic, keeping the later verdict check consistent.
    """
    if hi < lo:
        return None

    def feasible(c):
        try:
            p = instance.reach(c, rho)
        except DomainExhausted:
            return True
        if p == math.inf:
            return True
        return p - spent - c - dens * c / next_dens >= 0

    levels = sorted({v for _, v in instance.breakpoints})
    cuts = [lo, hi]
    for w in levels:
        c_at = w / (rho * dens)
        if lo < c_at < hi:
            cuts.append(c_at)
    cuts = sorted(set(cuts))
    for idx, c in enumerate(cuts):
        if not feasible(c):
            continue
        if idx == 0:
            return c
        loq, hiq = cuts[idx - 1], c
        for _ in range(120):
            mid = (loq + hiq) / 2
            if feasible(mid):
                hiq = mid
            else:
                loq = mid
        return hiq
    return None


def certify_no_solution(instance: PiecewiseLinearValue, rho: float, ell: int,
                        t: Sequence[float], epsilon: Optional[float] = None,
                        tol: float = 1e-9) -> Certificate:
    """Exhaustively refute (or exhibit) a competitive solution on a staircase.

    Any competitive solution can be assumed to take one block per used
    density, with densities strictly decreasing through {t_0..t_ell} and
    each block inside that density's ray segment.  For a fixed density
    subsequence the feasibility constraints only cap prefix sums from
    above, so pushing every block to its smallest admissible size is
    optimal; if even that fails, the subsequence is out.  Whatever
    assignment survives is validated through check_competitive before the
    certificate accepts it.
    """
    t = [float(x) for x in t[:ell + 1]]
    sup = instance.sup_value()
    if sup == math.inf:
        raise ValueError("certificate requires a bounded instance")
    tops = []
    for dens in t:
        top = instance.next_size(dens)
        if top is None:
            raise ValueError(f"density {dens} out of range on this instance")
        tops.append(float(top))
    values = [t[i] * tops[i] for i in range(len(t))]
    log: List[Tuple[Tuple[float, ...], str]] = []
    witness = None
    checked = 0
    for mask in range(1, 1 << len(t)):
        cand = [i for i in range(len(t)) if mask & (1 << i)]
        checked += 1
        key = tuple(t[i] for i in cand)
        if t[cand[0]] < 1 / rho - tol:
            log.append((key, "entry_density_too_low"))
            continue
        spent = 0.0
        sizes = []
        outcome = None
        for j, i in enumerate(cand):
            lo = 0.0 if i == 0 else values[i - 1] / t[i]
            hi = tops[i]
            if j == len(cand) - 1:
                c = max(lo, sup / (rho * t[i]))
                for _ in range(8):
                    # nudge past float rounding until the block truly covers
                    try:
                        if instance.reach(c, rho) == math.inf:
                            break
                    except DomainExhausted:
                        break
                    c = math.nextafter(c, math.inf)
                if c > hi * (1 + tol):
                    outcome = "last_block_cannot_cover"
                    break
                c = min(c, hi)
                sizes.append(c)
                spent += c
            else:
                c = _min_feasible_size(instance, rho, t[i], t[cand[j + 1]],
                                       spent, max(lo, 1e-300), hi)
                if c is None:
                    outcome = f"no_feasible_block_at_density_{i}"
                    break
                sizes.append(c)
                spent += c
                try:
                    p = instance.reach(c, rho)
                except DomainExhausted:
                    p = math.inf
                if p == math.inf:
                    outcome = "covered_early"
                    break
        if outcome == "covered_early":
            verdict = check_competitive(instance, sizes, rho, tol=tol)
            if verdict.ok and verdict.covered:
                witness = tuple(sizes)
                log.append((key, "feasible"))
                break
            log.append((key, "covered_early_but_invalid"))  # pragma: no cover
            continue
        if outcome is not None:
            log.append((key, outcome))
            continue
        verdict = check_competitive(instance, sizes, rho, tol=tol)
        if verdict.ok and verdict.covered:
            witness = tuple(sizes)
            log.append((key, "feasible"))
            break
        log.append((key, "propagation_passed_but_check_failed"
                    if verdict.ok is False else "not_covered"))
    return Certificate(float(rho), epsilon, ell, tuple(t), witness is None,
                       checked, tuple(log), witness)
