"""Continuous incremental maximization on piecewise-linear value curves.

The model is a non-increasing density d on the nonnegative reals with
d(0) = 1, equivalently a value curve v(c) = c * d(c) that is continuous
and non-decreasing.  A solution is a sequence of block sizes; while block
c_n streams in, the objective is the best finished block's value or the
partial count times d(c_n), whichever is larger.

Everything here is closed-form per linear segment.  There is no generic
root finder anywhere: reach queries and density inversions locate their
segment and solve one linear equation, which keeps Fraction-valued
instances exact end to end.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import (
    DensityFloorReached,
    DomainExhausted,
    EmptyInstance,
    InvalidPoints,
    InvalidSizes,
    InvalidStart,
    SizeOutOfRange,
)
from .separable import SeparableInstance
from .serialize import Num, format_number, parse_number
from .serialize import div as _div
from .serialize import exact as _exact
from .serialize import ge as _ge
from .serialize import gt as _gt
from .serialize import is_close as _is_close

GOLDEN_RATIO_PLUS_ONE = (3 + math.sqrt(5)) / 2

HORIZON_REACHED = "horizon_reached"
NOT_COMPETITIVE = "not_competitive"
VALUE_COVERED = "value_covered"


class PiecewiseLinearValue:
    """Value curve through (0, 0) and the given breakpoints.

    Beyond the last breakpoint the curve continues with ``extend_slope``,
    which defaults to the final segment's slope.  A zero extension slope
    caps the curve at its last value; such curves are "bounded" and a
    reach query above the cap has no answer.

    ``tilt`` records the nominal slope margin a caller would use to
    perturb flat segments into strictly monotone ones.  The curve itself
    is left untouched; scaling runs resolve flat stretches by taking the
    extreme admissible point, which is the limit of that perturbation.
    """

    def __init__(self, breakpoints, extend_slope: Optional[Num] = None,
                 tilt: Num = Fraction(1, 10 ** 9)):
        bps = tuple((c, v) for c, v in breakpoints)
        if not bps:
            raise EmptyInstance("a value curve needs at least one breakpoint")
        prev_c, prev_v = 0, 0
        prev_density = 1
        for idx, (c, v) in enumerate(bps):
            if c <= prev_c:
                raise InvalidPoints(f"breakpoint {idx}: size {c} not beyond {prev_c}")
            if v <= 0:
                raise InvalidPoints(f"breakpoint {idx}: value {v} not positive")
            if v < prev_v:
                raise InvalidPoints(f"breakpoint {idx}: value decreases ({v} < {prev_v})")
            slope = _div(v - prev_v, c - prev_c)
            if not _ge(prev_density, slope):
                raise InvalidPoints(
                    f"breakpoint {idx}: segment slope {slope} exceeds density "
                    f"{prev_density} at its left end, so density would increase")
            prev_c, prev_v = c, v
            prev_density = _div(v, c)
        if extend_slope is None:
            a, va = (0, 0) if len(bps) == 1 else bps[-2]
            b, vb = bps[-1]
            extend_slope = _div(vb - va, b - a)
        if extend_slope < 0 or not _ge(prev_density, extend_slope):
            raise InvalidPoints(f"extension slope {extend_slope} outside [0, {prev_density}]")
        self.breakpoints = bps
        self.extend_slope = extend_slope
        self.tilt = tilt
        self._cs = [c for c, _ in bps]

    def __eq__(self, other):
        return (isinstance(other, PiecewiseLinearValue)
                and self.breakpoints == other.breakpoints
                and self.extend_slope == other.extend_slope)

    def __repr__(self):
        head = ", ".join(f"({format_number(c)}, {format_number(v)})"
                         for c, v in self.breakpoints[:4])
        tail = ", ..." if len(self.breakpoints) > 4 else ""
        return (f"PiecewiseLinearValue([{head}{tail}], "
                f"extend_slope={format_number(self.extend_slope)})")

    @property
    def last_breakpoint(self) -> Tuple[Num, Num]:
        return self.breakpoints[-1]

    def is_bounded(self) -> bool:
        return self.extend_slope == 0

    def sup_value(self) -> Num:
        return self.breakpoints[-1][1] if self.is_bounded() else math.inf

    def value_at(self, c: Num) -> Num:
        if c < 0:
            raise SizeOutOfRange("sizes are nonnegative")
        if c == 0:
            return 0
        i = bisect_left(self._cs, c)
        a, va = (0, 0) if i == 0 else self.breakpoints[i - 1]
        if i == len(self.breakpoints):
            return va + self.extend_slope * (c - a)
        b, vb = self.breakpoints[i]
        if c == b:
            return vb
        return va + _div(vb - va, b - a) * (c - a)

    def density_at(self, c: Num) -> Num:
        if c == 0:
            return 1
        return _div(self.value_at(c), c)

    def reach(self, c: Num, rho: Num) -> Num:
        """Largest size whose value stays within rho times the value at c.

        Flat stretches at exactly the target level resolve to their right
        endpoint.  On a bounded curve a target at the cap means every size
        qualifies (returned as inf); a target above the cap has no
        qualifying maximum at all and raises DomainExhausted.
        """
        if rho < 1:
            raise SizeOutOfRange("ratio below one")
        target = rho * self.value_at(c)
        if target == 0:
            return 0
        cK, vK = self.breakpoints[-1]
        if target >= vK:
            if self.is_bounded():
                if target > vK:
                    raise DomainExhausted(f"target {target} exceeds the curve cap {vK}")
                return math.inf
            return cK + _div(target - vK, self.extend_slope)
        # Walk segments from the right so plateaus resolve to their right end.
        pts = [(0, 0), *self.breakpoints]
        for j in range(len(pts) - 1, 0, -1):
            a, va = pts[j - 1]
            b, vb = pts[j]
            if va <= target <= vb:
                if vb == va:
                    return b
                return a + _div(target - va, _div(vb - va, b - a))
        raise DomainExhausted(f"no size attains value {target}")  # pragma: no cover

    def next_size(self, q: Num) -> Optional[Num]:
        """Largest size whose density is still at least q, for q in (0, 1].

        Returns None when no size qualifies (q above the whole density
        range).  Raises DensityFloorReached when the admissible set is
        unbounded, which happens exactly when q does not exceed the
        limiting density of the extension.
        """
        if q <= 0:
            raise SizeOutOfRange("density queries must be positive")
        if q > 1:
            return None
        if not self.is_bounded() and q <= self.extend_slope:
            raise DensityFloorReached(
                f"density never drops below {self.extend_slope}; no largest size with d >= {q}")
        pts = [(0, 0), *self.breakpoints]
        last_ok = None
        for j in range(len(pts) - 1, -1, -1):
            cj, vj = pts[j]
            dj = 1 if cj == 0 else _div(vj, cj)
            if dj >= q:
                last_ok = j
                break
        if last_ok is None:  # pragma: no cover - d(0)=1 always qualifies
            return None
        a, va = pts[last_ok]
        if last_ok + 1 < len(pts):
            b, vb = pts[last_ok + 1]
            slope = _div(vb - va, b - a)
        else:
            b = None
            slope = self.extend_slope
        if slope == q:
            # Constant density q along this stretch; its right end is largest.
            return b
        root = _div(va - slope * a, q - slope)
        if b is not None and root > b:  # pragma: no cover - defensive clamp
            root = b
        return max(root, a)

    def to_json(self) -> dict:
        return {
            "breakpoints": [[format_number(c), format_number(v)] for c, v in self.breakpoints],
            "extend_slope": format_number(self.extend_slope),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "PiecewiseLinearValue":
        bps = [(parse_number(c), parse_number(v)) for c, v in payload["breakpoints"]]
        extend = payload.get("extend_slope")
        return cls(bps, None if extend is None else parse_number(extend))


def identity_curve() -> PiecewiseLinearValue:
    """v(c) = c everywhere: constant density one."""
    return PiecewiseLinearValue(((1, 1),), extend_slope=1)


def capped_identity(cap: Num = 1) -> PiecewiseLinearValue:
    """v(c) = min(c, cap): the easiest bounded curve."""
    return PiecewiseLinearValue(((cap, cap),), extend_slope=0)


def tilted_identity(decay: Fraction = Fraction(1, 32), doublings: int = 60) -> PiecewiseLinearValue:
    """Strictly concave stand-in for the identity curve.

    The density at size 2^j is (1 - decay)^j, so the curve loses a fixed
    small fraction of density per doubling.  Value still grows without
    bound and every density inversion has a unique answer, which is what
    the scaling run needs.
    """
    decay = Fraction(decay)
    if not 0 < decay < Fraction(1, 2):
        raise InvalidPoints("decay must lie strictly between 0 and 1/2")
    pts = []
    for j in range(doublings + 1):
        c = Fraction(2) ** j
        pts.append((c, c * (1 - decay) ** j))
    return PiecewiseLinearValue(pts, tilt=decay)


def _merge_collinear(pts):
    merged = []
    for c, v in pts:
        while True:
            if len(merged) >= 2:
                a, va = merged[-2]
            elif len(merged) == 1:
                a, va = 0, 0
            else:
                break
            b, vb = merged[-1]
            if (vb - va) * (c - b) == (v - vb) * (b - a):
                merged.pop()
            else:
                break
        merged.append((c, v))
    return merged


def from_separable(instance: SeparableInstance) -> PiecewiseLinearValue:
    """Continuous counterpart of a canonical separable instance.

    At budget c the best achievable objective is the larger of the full
    value of group floor(c) and c partial elements of the next group, so
    the curve is an upper envelope of plateaus and rays through the
    origin.  Integer budgets keep their exact discrete optimum, and
    discretize() with granularity one inverts this construction.
    """
    instance._require_normalized()
    N = instance.n_sets
    pts = []
    level = 0
    for i in range(N):
        nxt = instance.density(i + 1)
        cross = _div(level, nxt)
        if i < cross < i + 1:
            pts.append((cross, level))
        level = max(level, (i + 1) * nxt)
        pts.append((i + 1, level))
    return PiecewiseLinearValue(_merge_collinear(pts), extend_slope=0)


def build_from_points(base: PiecewiseLinearValue, points) -> PiecewiseLinearValue:
    """Replace base beyond the first point by the polyline through points.

    The first point must already lie on base.  Later points must strictly
    gain value but strictly lose density, one inequality pair per step.
    The new curve keeps base on [0, x_0] and continues past the last
    point with that final segment's slope.
    """
    pts = [(c, v) for c, v in points]
    if len(pts) < 2:
        raise InvalidPoints("need at least two points to build an extension")
    x0, v0 = pts[0]
    base_v0 = base.value_at(x0)
    if not _is_close(base_v0, v0):
        raise InvalidPoints(f"first point ({x0}, {v0}) is not on the base curve "
                            f"(base value {base_v0})")
    for i in range(len(pts) - 1):
        xa, va = pts[i]
        xb, vb = pts[i + 1]
        if xb <= xa:
            raise InvalidPoints(f"point {i + 1}: size {xb} does not exceed {xa}")
        if not vb > va:
            raise InvalidPoints(f"point {i + 1}: value {vb} not above {va}")
        if not vb * xa < va * xb:
            raise InvalidPoints(
                f"point {i + 1}: value {vb} not below {va}*({xb}/{xa}), "
                "density would not decrease")
    kept = [bp for bp in base.breakpoints if bp[0] < x0]
    return PiecewiseLinearValue(kept + pts, extend_slope=None, tilt=base.tilt)


def validate_sizes(sizes: Sequence[Num]) -> Tuple[Num, ...]:
    sizes = tuple(sizes)
    if not sizes:
        raise InvalidSizes("empty solution")
    for c in sizes:
        if c <= 0:
            raise InvalidSizes(f"block size {c} not positive")
    return sizes


def evaluate_continuous(f: PiecewiseLinearValue, sizes: Sequence[Num], c: Num) -> Num:
    """Objective after c units arrive through the given blocks in order."""
    sizes = validate_sizes(sizes)
    if c < 0:
        raise SizeOutOfRange("budget must be nonnegative")
    if c == 0:
        return 0
    best_done = 0
    prefix = 0
    for block in sizes:
        if c <= prefix + block:
            return max(best_done, (c - prefix) * f.density_at(block))
        prefix += block
        best_done = max(best_done, f.value_at(block))
    return best_done


@dataclass(frozen=True)
class CompetitivenessVerdict:
    ok: bool
    first_violation: Optional[Tuple[int, str]]
    certified_up_to: Num
    covered: bool

    def __bool__(self):
        return self.ok


def check_competitive(f: PiecewiseLinearValue, sizes: Sequence[Num], rho: Num,
                      tol: float = 1e-12) -> CompetitivenessVerdict:
    """Certificate-style competitiveness test for a finite block sequence.

    Verifies the entry density d(c_1) >= 1/rho, then block by block that
    the reach of the current block strictly exceeds the elements spent and
    that the next block's density meets the forced quotient
    v(c_i) / (reach_i - spent_i).  With all inequalities satisfied the
    solution is rho-competitive up to the last block's reach; if that
    reach already covers the whole curve (bounded curve, target at or
    above the cap) it is competitive at every size.
    """
    sizes = validate_sizes(sizes)
    if not _ge(f.density_at(sizes[0]), _div(1, rho), tol):
        return CompetitivenessVerdict(False, (1, "start_density"), 0, False)
    spent = 0
    reach_i = None
    for i, c in enumerate(sizes, start=1):
        spent = spent + c
        try:
            reach_i = f.reach(c, rho)
        except DomainExhausted:
            reach_i = math.inf
        if not _gt(reach_i, spent, tol):
            return CompetitivenessVerdict(False, (i, "reach_exceeds_prefix"), 0, False)
        if i < len(sizes) and reach_i != math.inf:
            forced = _div(f.value_at(c), reach_i - spent)
            if not _ge(f.density_at(sizes[i]), forced, tol):
                return CompetitivenessVerdict(False, (i + 1, "density_step"), 0, False)
    covered = reach_i == math.inf
    return CompetitivenessVerdict(True, None, reach_i, covered)


@dataclass(frozen=True)
class GreedyRun:
    sizes: Tuple[Num, ...]
    status: str
    reason: Optional[str]
    trace: Tuple[Tuple, ...]

    @property
    def prefix_total(self) -> Num:
        return sum(self.sizes)


def greedy_scaling(f: PiecewiseLinearValue, c_1: Num, rho: Num,
                   horizon: Num = 10 ** 9, max_steps: int = 10 ** 5) -> GreedyRun:
    """Run the density-matching scaling strategy from first block c_1.

    Each step computes the forced density quotient of the current block
    and adds the largest size still meeting it as the next block.  The
    run stops once the cumulative size passes the horizon, the whole
    curve is covered, or no admissible next block exists (at which point
    the sequence is provably not rho-competitive).

    Trace rows carry (index, block, density, value, reach, spent) per
    block, with spent the cumulative size through that block.
    """
    if c_1 <= 0:
        raise InvalidStart(f"first block must be positive, got {c_1}")
    if rho <= 1:
        raise SizeOutOfRange("the strategy needs a ratio above one")
    sizes = [c_1]
    spent = c_1
    trace = []
    while True:
        current = sizes[-1]
        try:
            p = f.reach(current, rho)
        except DomainExhausted:
            p = math.inf
        trace.append((len(sizes), current, f.density_at(current),
                      f.value_at(current), p, spent))
        if p == math.inf:
            status, reason = VALUE_COVERED, None
            break
        if spent > horizon:
            status, reason = HORIZON_REACHED, None
            break
        if len(sizes) >= max_steps:
            status, reason = HORIZON_REACHED, "step_cap"
            break
        if p <= spent:
            status, reason = NOT_COMPETITIVE, "reach_exhausted"
            break
        forced = _div(f.value_at(current), p - spent)
        try:
            nxt = f.next_size(forced)
        except DensityFloorReached:
            # The forced quotient sank to the extension's limiting density,
            # so the defining equation has no largest solution.  On curves
            # truncated from an ideal decaying one this is an artifact of
            # the truncation; check_competitive on the emitted blocks stays
            # the arbiter of competitiveness.
            status, reason = NOT_COMPETITIVE, "density_floor"
            break
        if nxt is None:
            status, reason = NOT_COMPETITIVE, "required_density_above_one"
            break
        if nxt <= current:
            status, reason = NOT_COMPETITIVE, "next_block_not_larger"
            break
        sizes.append(nxt)
        spent = spent + nxt
    return GreedyRun(tuple(sizes), status, reason, tuple(trace))


def greedy_trace_rows(run: GreedyRun):
    """Trace rows formatted for the CSV artifact."""
    return [(i, c, d, v, p, s) for (i, c, d, v, p, s) in run.trace]


def discretize(f: PiecewiseLinearValue, n: int, N: int) -> SeparableInstance:
    """Sample the curve at i/n for i = 1..N into a separable instance.

    Group i gets density v(i/n)/i, so its full value reproduces the curve
    at i/n exactly and the discrete optimum matches the continuous one on
    the sample grid.
    """
    if n < 1 or N < 1:
        raise SizeOutOfRange("granularity and horizon must be positive integers")
    sets = []
    for i in range(1, N + 1):
        v = f.value_at(Fraction(i, n))
        sets.append((i, _div(v, i)))
    return SeparableInstance(tuple(sets))
