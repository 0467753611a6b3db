"""Randomized lower bound by averaging over deterministic block algorithms.

A deterministic algorithm on a separable instance with one set per size
is, without loss of generality, a strictly increasing sequence of block
sizes consumed in order.  Against a probability distribution over the
budget, the worst such algorithm's weighted optimum-to-algorithm ratio
lower-bounds every randomized algorithm's competitive ratio.  The module
enumerates the algorithm class, evaluates certificates exactly in
rational arithmetic, and verifies the published (N=10, rho=1.447)
certificate, with a small deterministic improvement search on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import NTooLarge
from .serialize import format_number, parse_number

GENEROUS = "generous"
SUM_CAPPED = "sum_capped"


@dataclass(frozen=True)
class YaoCertificate:
    N: int
    d: Tuple[Fraction, ...]
    p: Tuple[Fraction, ...]
    claimed_rho: float

    def __post_init__(self):
        if len(self.d) != self.N or len(self.p) != self.N:
            raise ValueError("density and probability vectors must have length N")
        if any(x < 0 for x in self.d) or any(x < 0 for x in self.p):
            raise ValueError("densities and probabilities must be non-negative")
        if sum(self.p) != 1:
            raise ValueError("probabilities must sum to one")

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "d": [format_number(x) for x in self.d],
            "p": [format_number(x) for x in self.p],
            "rho": format_number(self.claimed_rho),
        }

    @classmethod
    def from_json(cls, data: dict) -> "YaoCertificate":
        return cls(
            int(data["N"]),
            tuple(parse_number(x) for x in data["d"]),
            tuple(parse_number(x) for x in data["p"]),
            float(parse_number(data["rho"])),
        )


def reference_certificate() -> YaoCertificate:
    """The published ten-set certificate with objective value 1.447."""
    d = (Fraction(1), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(2, 5),
         Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
    p = (Fraction(132, 1000), Fraction(0), Fraction(0), Fraction(395, 1000),
         Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(0),
         Fraction(473, 1000))
    return YaoCertificate(10, d, p, 1.447)


def enumerate_algorithms(N: int, algorithm_class: str = GENEROUS) -> List[Tuple[int, ...]]:
    """All block sequences a deterministic algorithm can commit to, in lex order.

    The sum-capped class requires the whole sequence to fit within N
    elements.  The generous class only requires that the last block has
    started before the budget runs out, which admits partially consumed
    final blocks; a lower bound should quantify over those too.
    """
    if N > 20:
        raise NTooLarge("enumeration is exponential; sizes beyond 20 are refused")
    if N < 1:
        raise ValueError("need at least one set")
    out: List[Tuple[int, ...]] = []

    def extend(seq: List[int], total: int):
        start = seq[-1] + 1 if seq else 1
        for c in range(start, N + 1):
            if algorithm_class == GENEROUS:
                ok_here = total < N
                ok_deeper = total + c < N
            elif algorithm_class == SUM_CAPPED:
                ok_here = total + c <= N
                ok_deeper = total + c < N
            else:
                raise ValueError(f"unknown algorithm class {algorithm_class!r}")
            if ok_here:
                seq.append(c)
                out.append(tuple(seq))
                if ok_deeper:
                    extend(seq, total + c)
                seq.pop()

    extend([], 0)
    return out


def alg_value(d: Sequence, alg: Sequence[int], i: int, evaluation: str = "clamped"):
    """Value the algorithm holds after taking its first i elements.

    A block of size c_j contributes at most c_j elements of density
    d_{c_j} even when the budget overshoots it, hence the clamp.  The
    unclamped reading lets a block keep earning past its own cardinality;
    it is kept selectable so the two readings can be compared side by
    side, but it is not what the set model pays.
    """
    best = 0
    prefix = 0
    for c in alg:
        if evaluation == "clamped":
            taken = min(max(i - prefix, 0), c)
        else:
            taken = max(i - prefix, c)
        got = taken * d[c - 1]
        if got > best:
            best = got
        prefix += c
    return best


def yao_bound(d: Sequence, p: Sequence, N: int, algorithm_class: str = GENEROUS,
              evaluation: str = "clamped"):
    """Exact minimum over the algorithm class of the weighted ratio sum.

    Exact rational arithmetic whenever d and p are rationals; algorithms
    that earn nothing at a positively weighted budget contribute an
    infinite sum and cannot be minimal unless every algorithm does.
    """
    weighted = [(i, p[i - 1], i * d[i - 1]) for i in range(1, N + 1) if p[i - 1] > 0]
    best = None
    best_alg = None
    for alg in enumerate_algorithms(N, algorithm_class):
        total = Fraction(0)
        infinite = False
        for i, prob, opt in weighted:
            got = alg_value(d, alg, i, evaluation)
            if got == 0:
                infinite = True
                break
            total += prob * opt / got
        if infinite:
            continue
        if best is None or total < best:
            best, best_alg = total, alg
    if best is None:
        raise ZeroDivisionError("every algorithm has value zero at a weighted budget")
    return best, best_alg


def _is_valid_density_vector(d: Sequence[Fraction]) -> bool:
    for i in range(1, len(d)):
        if d[i] > d[i - 1]:
            return False
        if (i + 1) * d[i] < i * d[i - 1]:
            return False
    return bool(d) and d[0] > 0


def search_certificate(N: int, budget: int = 400,
                       seed: Optional[int] = None) -> YaoCertificate:
    """Deterministic coordinate descent on (d, p), never below the warm start.

    Starts from the published certificate at N=10 and a uniform guess
    elsewhere.  Moves perturb one density (keeping the vector a valid
    instance) or shift probability mass between two budgets, with step
    sizes halving from 1/2; only strictly improving moves are taken, so
    the outcome is independent of the seed argument (kept for interface
    symmetry with the randomized runner).
    """
    if N > 14:
        raise NTooLarge("search beyond N=14 is refused")
    if N == 10:
        cert = reference_certificate()
        d, p = list(cert.d), list(cert.p)
    else:
        d = [Fraction(1, i) for i in range(1, N + 1)]
        p = [Fraction(1, N)] * N
    best, _ = yao_bound(d, p, N)
    steps = [Fraction(1, 2 ** k) for k in range(1, 7)]
    evals = 0
    improved = True
    while improved and evals < budget:
        improved = False
        for idx in range(N):
            for step in steps:
                for sign in (1, -1):
                    cand = list(d)
                    cand[idx] = max(Fraction(0), cand[idx] + sign * step)
                    if not _is_valid_density_vector(cand):
                        continue
                    evals += 1
                    try:
                        val, _ = yao_bound(cand, p, N)
                    except ZeroDivisionError:
                        continue
                    if val > best:
                        best, d, improved = val, cand, True
                    if evals >= budget:
                        break
                if evals >= budget:
                    break
            if evals >= budget:
                break
        for src in range(N):
            for dst in range(N):
                if src == dst or evals >= budget:
                    continue
                for step in steps:
                    move = min(step, p[src])
                    if move == 0:
                        continue
                    cand = list(p)
                    cand[src] -= move
                    cand[dst] += move
                    evals += 1
                    val, _ = yao_bound(d, cand, N)
                    if val > best:
                        best, p, improved = val, cand, True
                    if evals >= budget:
                        break
    return YaoCertificate(N, tuple(d), tuple(p), float(best))
