"""Randomized scaling: the guarantee formula, its two bounds, and seeded runs."""

import math
import random
from fractions import Fraction

import pytest

from incmax.errors import HypothesisViolated, SizeOutOfRange
from incmax.randomized import (
    expected_ratio_lb_smallC,
    g_of,
    integral_bound,
    mu_nu,
    optimal_r,
    run_randomized,
    schedule,
)
from incmax.separable import SeparableInstance, evaluate


def g_reference(x):
    """Second transcription of the guarantee, restructured on purpose.

    Natural logs throughout, hypot for the square root, the geometric sums
    written out as polynomials, and the base-x log pairs collapsed into
    single quotients.  Any slip in either copy shows up as a mismatch.
    """
    ln = math.log(x)
    z = math.log(x ** 3 + x ** 2 + x) / ln - 3
    big = x ** (3 + z)
    a = (x ** 2 + x + 1) * x ** z
    s = math.hypot(a - 1, 2 * x ** (2.5 + z))
    q = (1 - x ** -3) / (x - 1)
    return ((1 - s) / (2 * ln * big)
            - (1 - z) * q
            + z
            - q / (2 * ln)
            - (q - 1 / big) * (math.log((s - a + 1) / 2) / ln - 3)
            - 2 * x ** (2 + z) / ((s - a + 1) * ln)
            + 2 / ln
            - (1 + 1 / big) * math.log((big + 1) * (x - 1) / (x ** 4 - 1)) / ln)


def test_guarantee_formula_against_second_transcription():
    for i in range(1000):
        x = 3 + 5 * i / 999
        assert g_of(x) == pytest.approx(g_reference(x), abs=1e-11)
    with pytest.raises(ValueError):
        g_of(1.0)


def test_optimal_base_and_guaranteed_fraction():
    r = optimal_r()
    assert r == pytest.approx(5.164562921889672, abs=1e-8)
    best = g_of(r)
    assert best == pytest.approx(0.5643796885297483, abs=1e-12)
    assert best > 0.56437
    assert 1 / best < 1.7720
    # a genuine interior maximum, not an interval endpoint
    assert g_of(r - 1e-3) < best > g_of(r + 1e-3)


def test_schedule_frozen_powers_of_four():
    s = schedule(4.0, 0.5, 5)
    assert s.c == (2, 8, 32, 128, 512)
    assert s.t == (2, 10, 42, 170, 682)
    # every 4^(i+1/2) is an even integer, so the exact sums match the rounded ones
    assert s.t_tilde == (2.0, 10.0, 42.0, 170.0, 682.0)


def test_schedule_invariants():
    r = optimal_r()
    for eps in (0.1, 0.42, 0.9):
        s = schedule(r, eps)
        assert len(s.c) == 12
        assert all(a < b for a, b in zip(s.c, s.c[1:]))
        run = 0
        for i in range(12):
            run += s.c[i]
            assert s.t[i] == run
            assert s.t_tilde[i] == pytest.approx(sum(s.c_tilde[:i + 1]), rel=1e-9)
        # the exact spend never outruns the next exact block when r > 2
        for i in range(11):
            assert s.t_tilde[i] <= s.c_tilde[i + 1]
    with pytest.raises(ValueError):
        schedule(2.0, 0.5)
    with pytest.raises(ValueError):
        schedule(4.0, 0.0)
    with pytest.raises(ValueError):
        schedule(4.0, 1.0)


def test_small_budget_enumeration_frozen():
    assert expected_ratio_lb_smallC(1) == pytest.approx(0.6419923339641521, rel=1e-12)
    assert expected_ratio_lb_smallC(170) == pytest.approx(0.5832886810646969, rel=1e-12)
    worst = min((expected_ratio_lb_smallC(C), C) for C in range(1, 171))
    assert worst[1] == 134
    assert worst[0] == pytest.approx(0.583102638957162, rel=1e-12)
    with pytest.raises(SizeOutOfRange):
        expected_ratio_lb_smallC(0)
    with pytest.raises(SizeOutOfRange):
        expected_ratio_lb_smallC(171)


def test_small_budget_enumeration_against_monte_carlo():
    # the exact interval integration must agree with brute sampling of offsets
    r = optimal_r()
    rng = random.Random(20260814)
    for C in (1, 134):
        acc = 0.0
        n = 60000
        for _ in range(n):
            e = rng.random()
            sizes = [math.floor(r ** (i + e)) for i in range(5)]
            prefix = 0
            for i, size in enumerate(sizes):
                if C <= size:
                    before = sizes[i - 1] if i >= 1 else 0
                    acc += max(before / C, (C - prefix) / max(C, size))
                    break
                prefix += size
        assert acc / n == pytest.approx(expected_ratio_lb_smallC(C), abs=7e-3)


def test_threshold_offsets_satisfy_their_defining_equations():
    r = optimal_r()
    for i, k, delta in ((2, 3, 0.5), (4, 5, 0.05), (7, 8, 1.0)):
        cbar = r ** (k + delta)
        mu, nu = mu_nu(i, k, delta, r)
        # at mu the exact spend through block i reaches the budget plus one
        spend = r ** mu * (r ** (i + 1) - 1) / (r - 1)
        assert spend == pytest.approx(cbar + 1, rel=1e-12)
        # at nu the current-block and leftover-budget estimates cross
        spend = r ** nu * (r ** (i + 1) - 1) / (r - 1)
        assert (r ** (i + nu) - 1) / cbar == pytest.approx(
            (cbar - spend) / r ** (i + 1 + nu), rel=1e-9)


def test_integral_pieces_match_antiderivatives():
    r = optimal_r()
    lnr = math.log(r)

    def completed(e, j, cbar):
        return e - r ** e * (r ** (j + 1) - 1) / ((r - 1) * lnr * cbar)

    def growing(e, j, cbar):
        return (r ** (j + e) / lnr - e) / cbar

    def leftover(e, j, cbar):
        return -cbar * r ** -(j + 1 + e) / lnr - (r ** (j + 1) - 1) / (r - 1) * r ** -(j + 1) * e

    for k, delta in ((3, 0.5), (5, 0.05), (8, 1.0)):
        cbar = r ** (k + delta)
        env = integral_bound(k, delta)
        mu_km1, mu_k = env.mu
        nu_km1, nu_k = env.nu
        spans = (
            (completed, k - 2, min(1.0, mu_km1), 1.0),
            (growing, k - 1, min(1.0, nu_km1), min(1.0, mu_km1)),
            (leftover, k - 1, delta, min(1.0, nu_km1)),
            (completed, k - 1, max(0.0, mu_k), delta),
            (growing, k, max(0.0, nu_k), max(0.0, mu_k)),
            (leftover, k, 0.0, max(0.0, nu_k)),
        )
        assert env.integral_value == sum(env.pieces)
        for piece, (anti, j, a, b) in zip(env.pieces, spans):
            exact = anti(b, j, cbar) - anti(a, j, cbar) if b > a else 0.0
            assert piece == pytest.approx(exact, abs=1e-12)


def test_envelope_corner_recovers_the_guarantee():
    r = optimal_r()
    z = math.log((r ** 4 - 1) / (r - 1) - 1, r) - 3
    # the minimizing corner sits just below the four-block hypothesis
    with pytest.raises(HypothesisViolated):
        integral_bound(3, z)
    env = integral_bound(3, z, enforce_hypothesis=False)
    assert not env.hypothesis_ok
    assert env.integral_value == pytest.approx(g_of(r), abs=1e-10)


def test_envelope_grid_stays_above_the_guarantee():
    floor = g_of(optimal_r())
    for k in range(3, 7):
        for delta in (0.25, 0.5, 0.75, 1.0):
            env = integral_bound(k, delta)
            assert env.hypothesis_ok
            assert env.integral_value >= floor - 1e-9
    with pytest.raises(ValueError):
        integral_bound(0, 0.5)
    with pytest.raises(ValueError):
        integral_bound(3, 0.0)
    with pytest.raises(ValueError):
        integral_bound(3, 1.1)
    with pytest.raises(HypothesisViolated):
        integral_bound(1, 0.1)


FLAT = SeparableInstance(tuple((i, Fraction(1)) for i in range(1, 601)))


def test_run_randomized_is_seeded_and_monotone():
    assert run_randomized(FLAT, 42) == run_randomized(FLAT, 42)
    sizes = run_randomized(FLAT, 7)
    assert sizes == (1, 8, 45, 234)
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
    assert sizes[-1] <= FLAT.max_size
    assert sizes[0] >= 1


def test_run_randomized_offset_distribution():
    # the first block is 1 exactly when the offset falls below log_r 2
    r = optimal_r()
    hits = sum(1 for seed in range(2000) if run_randomized(FLAT, seed)[0] == 1)
    assert hits / 2000 == pytest.approx(math.log(2) / math.log(r), abs=0.03)


def test_run_randomized_mean_value_fraction():
    # on a flat-density instance the optimum at budget C is exactly C, so the
    # collected fraction averages comfortably above the worst-case guarantee
    total, count = 0.0, 0
    for seed in range(300):
        sizes = run_randomized(FLAT, seed)
        for C in (37, 134, 400):
            total += float(evaluate(FLAT, sizes, C)) / C
            count += 1
    assert total / count > 0.58
