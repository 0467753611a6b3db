"""General incremental maximization over black-box set functions.

An oracle is a monotone set function on a small ground set, evaluated
exhaustively.  The operations here compute exact optimum profiles, test
the removal property (from every nonempty subset some element can be
dropped while keeping at least a (k-1)/k share of the value), build the
orderings that property guarantees, and reduce any such oracle to a
separable instance whose group values are the optima.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Tuple

from .errors import InvalidSizes, NotAccountable, UniverseTooLarge
from .separable import SeparableInstance
from .serialize import Num, div, ge, parse_number

EXHAUSTIVE_LIMIT = 15


@dataclass(frozen=True)
class ObjectiveOracle:
    """Monotone set function on elements 0..universe_size-1 with f(empty)=0."""

    universe_size: int
    eval_fn: Callable[[frozenset], Num]
    label: str = "oracle"

    def eval(self, subset) -> Num:
        return self.eval_fn(frozenset(subset))


@dataclass(frozen=True)
class OptProfile:
    """Exact optima opt[k-1] = Opt(k) with one witness subset per size."""

    opt: Tuple[Num, ...]
    witnesses: Tuple[frozenset, ...]

    def opt_at(self, k: int) -> Num:
        return 0 if k == 0 else self.opt[k - 1]


@dataclass(frozen=True)
class AccountabilityReport:
    holds: bool
    violating_set: Optional[frozenset]

    def __bool__(self):
        return self.holds


def _check_limit(oracle: ObjectiveOracle, limit: int):
    n = oracle.universe_size
    if n > limit:
        raise UniverseTooLarge(
            f"universe of {n} elements exceeds the exhaustive limit {limit}")
    if n < 1:
        raise UniverseTooLarge("oracle needs at least one element")


def opt_profile(oracle: ObjectiveOracle, limit: int = EXHAUSTIVE_LIMIT) -> OptProfile:
    """Exact Opt(k) for every k by full enumeration, with lex-first witnesses."""
    _check_limit(oracle, limit)
    n = oracle.universe_size
    opt = []
    witnesses = []
    for k in range(1, n + 1):
        best = None
        best_set = None
        for combo in combinations(range(n), k):
            value = oracle.eval(combo)
            if best is None or value > best:
                best = value
                best_set = frozenset(combo)
        opt.append(best)
        witnesses.append(best_set)
    for k in range(1, n):
        if opt[k] < opt[k - 1]:
            raise ValueError(
                f"oracle is not monotone: Opt({k + 1}) = {opt[k]} < Opt({k}) = {opt[k - 1]}")
    return OptProfile(tuple(opt), tuple(witnesses))


def _removal_ok(f_without: Num, f_with: Num, k: int) -> bool:
    # f(X - e) >= f(X) * (k-1)/k, exact when the values are exact.
    return ge(k * f_without, (k - 1) * f_with)


def is_accountable(oracle: ObjectiveOracle, limit: int = EXHAUSTIVE_LIMIT) -> AccountabilityReport:
    """Check every nonempty subset for a droppable element.

    Subsets are scanned by size then lexicographically, so the violating
    subset reported for a bad oracle is deterministic.
    """
    _check_limit(oracle, limit)
    n = oracle.universe_size
    for k in range(2, n + 1):
        for combo in combinations(range(n), k):
            X = frozenset(combo)
            fX = oracle.eval(X)
            if not any(_removal_ok(oracle.eval(X - {e}), fX, k) for e in combo):
                return AccountabilityReport(False, X)
    return AccountabilityReport(True, None)


def accountable_ordering(oracle: ObjectiveOracle, X) -> Tuple[int, ...]:
    """Order X so every prefix of length i keeps an i/|X| share of f(X).

    Builds the order back to front: repeatedly drop the smallest-index
    element whose removal loses at most a 1/k share.  Raises
    NotAccountable with the first stuck subset.
    """
    current = frozenset(X)
    if not current:
        raise InvalidSizes("cannot order the empty set")
    dropped = []
    while len(current) > 1:
        k = len(current)
        fX = oracle.eval(current)
        pick = None
        for e in sorted(current):
            if _removal_ok(oracle.eval(current - {e}), fX, k):
                pick = e
                break
        if pick is None:
            raise NotAccountable(current)
        dropped.append(pick)
        current = current - {pick}
    dropped.append(next(iter(current)))
    return tuple(reversed(dropped))


def reduce_to_separable(oracle: ObjectiveOracle, limit: int = EXHAUSTIVE_LIMIT) -> SeparableInstance:
    """Separable shadow of the oracle: group i holds i elements at density Opt(i)/i."""
    profile = opt_profile(oracle, limit)
    return SeparableInstance(
        tuple((i, div(profile.opt[i - 1], i)) for i in range(1, oracle.universe_size + 1)))


def lift_solution(oracle: ObjectiveOracle, sizes, limit: int = EXHAUSTIVE_LIMIT) -> Tuple[int, ...]:
    """Element order realizing a size-sequence solution on the oracle itself.

    Concatenates share-preserving orderings of the optimum witnesses for
    each requested size, skipping elements already placed.  Prefix values
    of the result dominate the separable solution's value at every budget.
    """
    sizes = tuple(sizes)
    n = oracle.universe_size
    if not sizes:
        raise InvalidSizes("need at least one block")
    last = 0
    for c in sizes:
        if not isinstance(c, int) or c < 1:
            raise InvalidSizes(f"block size {c!r} must be a positive integer")
        if c <= last:
            raise InvalidSizes(f"sizes must strictly increase, got {c} after {last}")
        last = c
    if sum(sizes) > n:
        raise InvalidSizes(f"blocks sum to {sum(sizes)}, above the {n} elements available")
    profile = opt_profile(oracle, limit)
    order = []
    seen = set()
    for c in sizes:
        for e in accountable_ordering(oracle, profile.witnesses[c - 1]):
            if e not in seen:
                seen.add(e)
                order.append(e)
    return tuple(order)


def modular_oracle(values) -> ObjectiveOracle:
    """Additive objective: f(X) is the sum of the chosen elements' values."""
    vals = tuple(values)

    def f(X: frozenset) -> Num:
        return sum((vals[e] for e in X), start=0)

    return ObjectiveOracle(len(vals), f, "modular")


def matching_oracle(n_vertices: int, edges) -> ObjectiveOracle:
    """Maximum-weight-matching objective over a subset of available edges.

    Elements are edge indices; f(X) is the heaviest matching using only
    edges in X, computed recursively with memoization.
    """
    edge_list = tuple((u, v, w) for u, v, w in edges)
    for u, v, _ in edge_list:
        if not (0 <= u < n_vertices and 0 <= v < n_vertices) or u == v:
            raise ValueError(f"bad edge ({u}, {v}) on {n_vertices} vertices")
    cache = {}

    def best(avail: tuple) -> Num:
        if not avail:
            return 0
        if avail in cache:
            return cache[avail]
        i, rest = avail[0], avail[1:]
        u, v, w = edge_list[i]
        skip = best(rest)
        compatible = tuple(j for j in rest
                           if edge_list[j][0] not in (u, v) and edge_list[j][1] not in (u, v))
        take = w + best(compatible)
        out = max(skip, take)
        cache[avail] = out
        return out

    def f(X: frozenset) -> Num:
        return best(tuple(sorted(X)))

    return ObjectiveOracle(len(edge_list), f, "matching")


def coverage_oracle(item_weights, sets) -> ObjectiveOracle:
    """Weighted coverage: f(X) is the total weight of items covered by chosen sets."""
    weights = tuple(item_weights)
    families = tuple(frozenset(s) for s in sets)
    for fam in families:
        for item in fam:
            if not 0 <= item < len(weights):
                raise ValueError(f"item {item} has no weight")

    def f(X: frozenset) -> Num:
        covered = set()
        for s in X:
            covered |= families[s]
        return sum((weights[i] for i in covered), start=0)

    return ObjectiveOracle(len(families), f, "coverage")


def hidden_pair_oracle(M: Num = 10) -> ObjectiveOracle:
    """Three elements where a valuable pair pays only once complete.

    Element 0 alone is worth 1; elements 1 and 2 are worth M together but
    nothing apart.  The pair {1, 2} has no droppable element, so this
    oracle is the canonical accountability failure.
    """

    def f(X: frozenset) -> Num:
        if {1, 2} <= X:
            return M
        return 1 if 0 in X else 0

    return ObjectiveOracle(3, f, "hidden_pair")


def oracle_from_json(payload: dict) -> ObjectiveOracle:
    kind = payload.get("type")
    if kind == "modular":
        return modular_oracle([parse_number(v) for v in payload["values"]])
    if kind == "matching":
        edges = [(int(u), int(v), parse_number(w)) for u, v, w in payload["edges"]]
        return matching_oracle(int(payload["vertices"]), edges)
    if kind == "coverage":
        weights = [parse_number(w) for w in payload["item_weights"]]
        return coverage_oracle(weights, [list(map(int, s)) for s in payload["sets"]])
    if kind == "hidden_pair":
        return hidden_pair_oracle(parse_number(payload.get("M", 10)))
    raise ValueError(f"unknown oracle type {kind!r}")
