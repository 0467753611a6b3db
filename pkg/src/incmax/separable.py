"""Separable incremental-maximization instances.

An instance is a family of disjoint element groups, group i holding
``size_i`` elements of per-element worth ``density_i``.  The objective of
an element set X is ``max_i |X ∩ group_i| * density_i``: only the best
single group counts.  A solution is an increasing sequence of group
indices; elements arrive group by group in that order and we track the
objective of every prefix.

Canonical instances have exactly one group per cardinality 1..N with
non-increasing densities, non-decreasing full-group values and a first
density of at most one.  All evaluation routines expect canonical form;
:func:`normalize` produces it from arbitrary raw input without changing
the optimum at any budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .errors import EmptyInstance, InstanceTooLarge, InvalidSizes, NotNormalized, SizeOutOfRange
from .serialize import Num, format_number, parse_number


@dataclass(frozen=True)
class SeparableInstance:
    """A list of (size, density) groups, not necessarily canonical."""

    sets: Tuple[Tuple[int, Num], ...]

    def __post_init__(self):
        if not self.sets:
            raise EmptyInstance("instance has no sets")
        for size, density in self.sets:
            if not isinstance(size, int) or size < 1:
                raise InvalidSizes(f"set size must be a positive integer, got {size!r}")
            if density <= 0:
                raise InvalidSizes(f"density must be positive, got {density!r}")

    @property
    def n_sets(self) -> int:
        return len(self.sets)

    @property
    def max_size(self) -> int:
        return max(size for size, _ in self.sets)

    def is_normalized(self) -> bool:
        sizes = [s for s, _ in self.sets]
        if sizes != list(range(1, len(self.sets) + 1)):
            return False
        dens = [d for _, d in self.sets]
        if dens[0] > 1:
            return False
        if any(dens[i] < dens[i + 1] for i in range(len(dens) - 1)):
            return False
        vals = [(i + 1) * d for i, d in enumerate(dens)]
        return all(vals[i] <= vals[i + 1] for i in range(len(vals) - 1))

    def density(self, i: int) -> Num:
        """Density of group i (1-based), canonical instances only."""
        self._require_normalized()
        if not 1 <= i <= len(self.sets):
            raise SizeOutOfRange(f"no group of size {i}")
        return self.sets[i - 1][1]

    def value(self, i: int) -> Num:
        """Full value of group i, which is also the optimum at budget i."""
        return i * self.density(i)

    def optimum(self, C: int) -> Num:
        """Best objective achievable with exactly C elements, raw or canonical."""
        if C < 0:
            raise SizeOutOfRange("budget must be nonnegative")
        if C == 0:
            return 0
        return max(min(C, size) * d for size, d in self.sets)

    def _require_normalized(self):
        if not self.is_normalized():
            raise NotNormalized("call normalize() first")

    def to_json(self) -> dict:
        self._require_normalized()
        return {"densities": [format_number(d) for _, d in self.sets]}

    @classmethod
    def from_json(cls, payload: dict) -> "SeparableInstance":
        dens = [parse_number(d) for d in payload["densities"]]
        return cls(tuple((i + 1, d) for i, d in enumerate(dens)))


def normalize(instance: SeparableInstance) -> SeparableInstance:
    """Canonicalize without disturbing the optimum at any budget.

    Duplicate cardinalities collapse to the densest group, gaps get padding
    groups that add no new value, and groups dominated by a denser larger
    group are replaced.  The result then has one group per size with the
    monotone density and value profile, and is rescaled so the first
    density is at most one.  The per-budget optimum is invariant under all
    of these steps, so the canonical densities are exactly optimum(C)/C.
    """
    N = instance.max_size
    dens = []
    for C in range(1, N + 1):
        opt = instance.optimum(C)
        if isinstance(opt, float):
            dens.append(opt / C)
        else:
            # Integer optima must divide exactly, so promote to Fraction.
            dens.append(Fraction(opt, C) if isinstance(opt, int) else opt / C)
    d1 = dens[0]
    if d1 > 1:
        dens = [d / d1 for d in dens]
    return SeparableInstance(tuple((i + 1, d) for i, d in enumerate(dens)))


def validate_solution(instance: SeparableInstance, sizes: Sequence[int]) -> Tuple[int, ...]:
    instance._require_normalized()
    sizes = tuple(sizes)
    if not sizes:
        raise InvalidSizes("solution must pick at least one group")
    N = instance.n_sets
    last = 0
    for c in sizes:
        if not isinstance(c, int) or not 1 <= c <= N:
            raise InvalidSizes(f"group index {c!r} outside 1..{N}")
        if c <= last:
            raise InvalidSizes(f"sizes must strictly increase, got {c} after {last}")
        last = c
    return sizes


def evaluate(instance: SeparableInstance, sizes: Sequence[int], C: int) -> Num:
    """Objective of the first C elements when groups arrive in the given order.

    While group c_j is streaming in, the best of the finished groups
    competes with the partial count times the current density; finished
    groups have non-decreasing values so only the previous one matters.
    Budgets beyond the solution's own elements saturate at the last
    group's value.
    """
    sizes = validate_solution(instance, sizes)
    if C < 0:
        raise SizeOutOfRange("budget must be nonnegative")
    total_elements = instance.n_sets * (instance.n_sets + 1) // 2
    if C > total_elements:
        raise SizeOutOfRange(f"budget {C} exceeds the {total_elements} elements present")
    if C == 0:
        return 0
    prefix = 0
    previous_value = 0
    for c in sizes:
        if C <= prefix + c:
            return max(previous_value, (C - prefix) * instance.density(c))
        prefix += c
        previous_value = instance.value(c)
    return previous_value


def _profile_values(dens, sizes):
    """Algorithm value at each budget 1..N for given density list, lazily."""
    prefix = 0
    previous_value = 0
    block = 0
    for C in range(1, len(dens) + 1):
        while block < len(sizes) and C > prefix + sizes[block]:
            prefix += sizes[block]
            previous_value = sizes[block] * dens[sizes[block] - 1]
            block += 1
        if block == len(sizes):
            yield previous_value
        else:
            yield max(previous_value, (C - prefix) * dens[sizes[block] - 1])


def value_profile(instance: SeparableInstance, sizes: Sequence[int]):
    """Rows (C, alg_value, opt_value, ratio) for every budget 1..N."""
    sizes = validate_solution(instance, sizes)
    dens = [d for _, d in instance.sets]
    rows = []
    for C, alg in enumerate(_profile_values(dens, sizes), start=1):
        opt = C * dens[C - 1]
        ratio = opt / alg if alg > 0 else math.inf
        rows.append((C, alg, opt, ratio))
    return rows


def competitive_ratio(instance: SeparableInstance, sizes: Sequence[int]) -> Num:
    """Worst budget's optimum-to-achieved quotient; infinity on a zero prefix."""
    sizes = validate_solution(instance, sizes)
    dens = [d for _, d in instance.sets]
    worst = 0
    for C, alg in enumerate(_profile_values(dens, sizes), start=1):
        if alg <= 0:
            return math.inf
        ratio = (C * dens[C - 1]) / alg
        if ratio > worst:
            worst = ratio
    return worst


def enumerate_solutions(N: int):
    """All strictly increasing index sequences whose prefix before the last
    block sums below N, in lexicographic order.  The final block may end up
    only partially consumed, which only ever helps the adversary's budgets.
    """

    def extend(seq, total):
        for c in range(seq[-1] + 1 if seq else 1, N + 1):
            candidate = seq + (c,)
            yield candidate
            if total + c < N:
                yield from extend(candidate, total + c)

    yield from extend((), 0)


def best_deterministic(instance: SeparableInstance, cap: int = 24):
    """Exhaustively minimize the competitive ratio over all solutions.

    Returns (sizes, ratio).  Ties go to the lexicographically smallest
    sequence, which is the first one found in enumeration order.
    """
    instance._require_normalized()
    N = instance.n_sets
    if N > cap:
        raise InstanceTooLarge(f"{N} groups exceeds the exhaustive-search cap {cap}")
    dens = [d for _, d in instance.sets]
    best_sizes = None
    best_ratio = None
    for seq in enumerate_solutions(N):
        worst = 0
        for C, alg in enumerate(_profile_values(dens, seq), start=1):
            if alg <= 0:
                worst = math.inf
                break
            ratio = (C * dens[C - 1]) / alg
            if ratio > worst:
                worst = ratio
                if best_ratio is not None and worst >= best_ratio:
                    break
        if best_ratio is None or worst < best_ratio:
            best_ratio = worst
            best_sizes = seq
    return best_sizes, best_ratio


def discretization_gap_instance() -> SeparableInstance:
    """Sixteen-group fixture whose discrete optimum ratio exceeds 969/670.

    Its continuous counterpart admits a solution with a strictly smaller
    ratio, so it separates the integral model from the fractional one.
    Groups 2 and 5 through 11 are padding at the previous value; the tail
    groups share one density.
    """
    d = {1: Fraction(1)}
    d[2] = Fraction(1, 2)
    d[3] = Fraction(17, 40)
    d[4] = Fraction(17, 40)
    v4 = 4 * d[4]
    for i in range(5, 12):
        d[i] = Fraction(v4, i)
    for i in range(12, 17):
        d[i] = Fraction(16473, 107200)
    return SeparableInstance(tuple((i, d[i]) for i in range(1, 17)))
