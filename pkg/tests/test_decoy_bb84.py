"""Decoy-state estimation: channel observables, bound directionality, and
the two-rate comparison."""

import math
from dataclasses import replace

import pytest

from qkdleak.cascade import BlockHistogram
from qkdleak.decoy_bb84 import (
    DEFAULT_PARAMS,
    DecoyParams,
    decoy_bounds,
    simulate_observables,
    skr_decoy,
    true_fractions,
    true_yield,
)

# frozen with mpmath (dps=40) for the default parameter set at 50 km
Q_MU_50KM = 0.0079780851629393697
E_MU_50KM = 0.03358535349079671

DISTANCES = [2.0 + 8.0 * i for i in range(20)]  # 2 .. 154 km


def test_observables_frozen_values_at_50km():
    obs = simulate_observables(DEFAULT_PARAMS, 50.0)
    assert obs.eta == pytest.approx(0.02, rel=1e-14)
    assert obs.q_mu == pytest.approx(Q_MU_50KM, rel=1e-13)
    assert obs.e_mu == pytest.approx(E_MU_50KM, rel=1e-13)


def test_true_yields_reproduce_the_gain():
    obs = simulate_observables(DEFAULT_PARAMS, 80.0)
    mu = DEFAULT_PARAMS.mu
    total = sum(
        math.exp(-mu) * mu**n / math.factorial(n) * true_yield(obs, n) for n in range(60)
    )
    assert total == pytest.approx(obs.q_mu, rel=1e-9)


def test_true_fractions_sum_to_one():
    for d in DISTANCES:
        obs = simulate_observables(DEFAULT_PARAMS, d)
        d0, d1, dm = true_fractions(DEFAULT_PARAMS, obs)
        assert d0 >= 0 and d1 >= 0 and dm >= 0
        assert d0 + d1 + dm == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("distance", DISTANCES)
def test_bound_sandwich_at_each_distance(distance):
    obs = simulate_observables(DEFAULT_PARAMS, distance)
    b = decoy_bounds(DEFAULT_PARAMS, obs)
    y1_true = true_yield(obs, 1)
    y0_true = obs.y0
    assert b.y1_min <= y1_true + 1e-15
    assert y1_true <= b.y1_max + 1e-15
    assert b.y0_lower <= y0_true + 1e-15
    assert b.y0_max >= y0_true - 1e-15
    assert 0.0 <= b.e1_max <= 1.0


@pytest.mark.parametrize("distance", DISTANCES)
def test_estimated_fractions_bracket_truth(distance):
    obs = simulate_observables(DEFAULT_PARAMS, distance)
    b = decoy_bounds(DEFAULT_PARAMS, obs)
    d0, d1, dm = true_fractions(DEFAULT_PARAMS, obs)
    assert b.delta1_min <= d1 + 1e-12
    assert b.delta1_max >= d1 - 1e-12
    assert b.delta0_min <= d0 + 1e-12
    assert b.delta_multi_min <= dm + 1e-12
    assert b.delta1_min + b.delta0_min <= 1.0 + 1e-9


def test_bounds_tight_in_the_low_loss_limit():
    obs = simulate_observables(DEFAULT_PARAMS, 1.0)
    b = decoy_bounds(DEFAULT_PARAMS, obs)
    _, d1, _ = true_fractions(DEFAULT_PARAMS, obs)
    assert b.delta1_min == pytest.approx(d1, rel=0.05)


def test_skr_improved_never_below_original():
    hist = BlockHistogram(10_000, {1: 500, 2: 400, 4: 300, 8: 200, 16: 100})
    for d in DISTANCES:
        obs = simulate_observables(DEFAULT_PARAMS, d)
        b = decoy_bounds(DEFAULT_PARAMS, obs)
        skr = skr_decoy(DEFAULT_PARAMS, obs, b, hist)
        assert skr.r_improved >= skr.r_original
        assert skr.leaked_useful_per_bit <= skr.leaked_all_per_bit + 1e-12


def test_skr_rates_share_everything_but_the_leakage_charge():
    # with a zero multi-photon bound the two rates coincide exactly
    hist = BlockHistogram(10_000, {1: 1000, 2: 500})
    obs = simulate_observables(DEFAULT_PARAMS, 40.0)
    b = decoy_bounds(DEFAULT_PARAMS, obs)
    forced = replace(b, delta_multi_min=0.0)
    skr = skr_decoy(DEFAULT_PARAMS, obs, forced, hist)
    assert skr.r_improved == pytest.approx(skr.r_original, rel=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        DecoyParams(mu=0.4, nu1=0.5, nu2=0.0007, q=0.9, alpha_db_per_km=0.2,
                    dark_rate=1e-5, eta_det=0.2, e_det=0.033)  # nu1 > mu
    with pytest.raises(ValueError):
        DecoyParams(mu=0.4, nu1=0.3, nu2=0.2, q=0.9, alpha_db_per_km=0.2,
                    dark_rate=1e-5, eta_det=0.2, e_det=0.033)  # nu1+nu2 >= mu
    with pytest.raises(ValueError):
        DecoyParams(mu=0.4, nu1=0.1, nu2=0.0007, q=0.0, alpha_db_per_km=0.2,
                    dark_rate=1e-5, eta_det=0.2, e_det=0.033)  # q out of range
