"""Tests for the first-passage laws and the excursion chain."""

import itertools
import math

import numpy as np
import pytest

from trisort.landmarks import landmarks
from trisort.walk import (
    WalkParams,
    conditional_hit_expectation,
    conditional_hit_probability,
    enumerate_hitting_oracle,
    escape_probability,
    excursion_record_from_heights,
    hitting_gf,
    hitting_pmf,
    hitting_pmf_array,
    hitting_tail,
    reversed_reflected_heights,
    simulate_excursion_chain,
    tail_exact_symmetric,
)


def test_pmf_against_path_enumeration():
    for p in (0.3, 0.5, 0.7):
        w = WalkParams(p)
        oracle = enumerate_hitting_oracle(w, 25)
        for j, prob in oracle.items():
            k = (j - 1) // 2
            assert hitting_pmf(w, k) == pytest.approx(prob, abs=1e-12)


def test_pmf_array_matches_scalar():
    for p in (0.2, 0.5, 0.9):
        w = WalkParams(p)
        table = hitting_pmf_array(w, 200)
        for k in (0, 1, 5, 50, 200):
            assert table[k] == pytest.approx(hitting_pmf(w, k), rel=1e-11)


def test_generating_function_and_escape():
    w = WalkParams(0.4)
    assert escape_probability(w) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert hitting_gf(w, 1.0) == pytest.approx(1.0 - escape_probability(w), abs=1e-10)
    # gf(1) = 1 for p >= 1/2 (the walk hits 0 almost surely)
    assert hitting_gf(WalkParams(0.5), 1.0) == pytest.approx(1.0, abs=1e-10)
    assert escape_probability(WalkParams(0.6)) == 0.0


def test_tail_exact_vs_recurrence():
    w = WalkParams(0.5)
    for m in (1, 2, 5, 100, 10_001):
        assert hitting_tail(w, m) == pytest.approx(tail_exact_symmetric(m), rel=1e-12)
    assert hitting_tail(w, 0) == 1.0
    # pmf + tail partition the probability space
    w = WalkParams(0.7)
    total = math.fsum(hitting_pmf(w, k) for k in range(50)) + hitting_tail(w, 99)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_conditional_laws_at_small_m():
    # m = 2 by hand: from 2, paths of length 2 are UU, UD, DU, DD;
    # conditioning on V0 > 2 removes DD, and only DU has hit level 1.
    w = WalkParams(0.5)
    assert conditional_hit_probability(w, 2) == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert conditional_hit_expectation(w, 2) == pytest.approx(1.0 / 3.0, abs=1e-14)


def test_conditional_laws_against_monte_carlo():
    # brute-force walks from height 2, condition on staying positive
    m = 400
    rng = np.random.default_rng(2026)
    steps = rng.integers(0, 2, size=(200_000, m), dtype=np.int8) * 2 - 1
    pos = np.cumsum(steps, axis=1, dtype=np.int32) + 2
    alive = (pos > 0).all(axis=1)
    hit1 = pos <= 1
    first1 = np.where(hit1.any(axis=1), hit1.argmax(axis=1) + 1, m + 1)
    sel = alive & (first1 <= m)
    mc_p = sel.sum() / alive.sum()
    mc_e = first1[sel].sum() / alive.sum()
    w = WalkParams(0.5)
    assert conditional_hit_probability(w, m) == pytest.approx(mc_p, abs=0.01)
    assert conditional_hit_expectation(w, m) == pytest.approx(mc_e, rel=0.05)


def test_conditional_probability_supercritical_limit():
    # for fixed p < 1/2 the limit is p
    w = WalkParams(0.3)
    assert conditional_hit_probability(w, 4000) == pytest.approx(0.3, abs=0.01)


def test_excursion_decomposition_worked_profile():
    # height path of the landmark illustration: M = 17, K = 7
    s = [0, 1, 0, 1, 0, 1, 2, 3, 2, 3, 2, 3, 4, 3, 4, 3, 4, 5, 4, 5, 4]
    h = [s[17] - s[17 - i] for i in range(18)]
    rec = excursion_record_from_heights(h)
    assert rec.N == 7
    assert rec.total == 17 - 7 + 1
    assert rec.indicators == (1, 0, 0, 1, 0, 0, 1, 1)
    assert len(rec.tau) == len(rec.indicators) + 1


def test_excursion_total_equals_landmark_gap():
    # exhaustive over backbones: the stopped excursion length sum is
    # M - K + 1 whenever K is attained by its defining set
    for n in range(2, 12):
        for tup in itertools.product("02", repeat=n):
            t = "".join(tup)
            lm = landmarks("1" + t) if "1" in t else None
            try:
                h, m_pos, k_pos, _ = reversed_reflected_heights(t)
            except ValueError:
                continue
            if len(h) < 3 or h[1] != 1 or h[2] != 2:
                continue
            rec = excursion_record_from_heights(h)
            from trisort.batch import landmark_fields, strings_to_array

            fields = landmark_fields(strings_to_array([t]))
            if fields["K_fallback"][0]:
                continue
            assert rec.total == m_pos - k_pos + 1, t


def test_simulated_chain_reproducible_and_consistent():
    w = WalkParams(0.5)
    r1 = simulate_excursion_chain(w, 500, rng_seed=5)
    r2 = simulate_excursion_chain(w, 500, rng_seed=5)
    assert r1 == r2
    assert r1.indicators[r1.N] == 1 and r1.indicators[r1.N - 1] == 1
    assert all(b > a for a, b in zip(r1.tau, r1.tau[1:]))
    assert r1.total == sum(r1.lengths[1 : r1.N + 1])


def test_simulated_chain_total_scales_like_sqrt_horizon():
    # mean total over seeds grows roughly like sqrt(horizon) at p = 1/2
    w = WalkParams(0.5)
    means = []
    for horizon in (400, 10_000):
        tot = [simulate_excursion_chain(w, horizon, rng_seed=s).total for s in range(300)]
        means.append(np.mean(tot) / math.sqrt(horizon))
    ratio = means[1] / means[0]
    assert 0.4 < ratio < 2.5, means


def test_walk_params_validation():
    with pytest.raises(ValueError):
        WalkParams(0.0)
    with pytest.raises(ValueError):
        WalkParams(1.0)
    w = WalkParams.critical(10_000, 1.0)
    assert w.p == pytest.approx(0.495, abs=1e-15)
