"""Property-based invariants over random channels, subsets, and parameters."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from marc_cap import ChannelConfig, awgn_capacity, solve_equalizer
from marc_cap.bounds import (
    CorrelationVector,
    DfPowerSplit,
    as_correlation,
    beta_star,
    df_bound_dest,
    df_bound_relay,
    df_to_correlation,
    full_mask,
    outer_bound_dest,
    outer_bound_relay,
    relay_sum_snr,
)
from marc_cap.region import convex_hull, polygon_contains
from marc_cap.sumcap import bottleneck_check, k_coefficients

pos = st.floats(min_value=0.1, max_value=10.0, allow_nan=False, allow_infinity=False)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def configs(draw, min_k=1, max_k=4):
    K = draw(st.integers(min_k, max_k))
    P = tuple(draw(st.lists(pos, min_size=K, max_size=K)))
    return ChannelConfig(K, P, draw(pos), draw(pos), draw(pos))


@st.composite
def config_gamma_mask(draw):
    cfg = draw(configs())
    w = draw(st.lists(unit, min_size=cfg.K + 1, max_size=cfg.K + 1))
    total = sum(w)
    gamma = tuple(x / total for x in w[: cfg.K]) if total > 0 else (0.0,) * cfg.K
    mask = draw(st.integers(1, full_mask(cfg.K)))
    return cfg, as_correlation(gamma, cfg.K), mask


@st.composite
def config_split_mask(draw):
    cfg = draw(configs())
    alpha = tuple(draw(st.lists(unit, min_size=cfg.K, max_size=cfg.K)))
    w = draw(st.lists(unit, min_size=cfg.K + 1, max_size=cfg.K + 1))
    total = sum(w)
    beta = tuple(x / total for x in w[: cfg.K]) if total > 0 else (0.0,) * cfg.K
    mask = draw(st.integers(1, full_mask(cfg.K)))
    return cfg, DfPowerSplit(alpha, beta), mask


@settings(deadline=None, max_examples=100)
@given(st.floats(0.0, 1e6, allow_nan=False), st.floats(0.0, 1e6, allow_nan=False))
def test_capacity_monotone_nonnegative(x, y):
    lo, hi = sorted((x, y))
    assert awgn_capacity(0.0) == 0.0
    assert 0.0 <= awgn_capacity(lo) <= awgn_capacity(hi)


@settings(deadline=None, max_examples=60)
@given(config_gamma_mask())
def test_cutset_bounds_nonnegative_zero_on_empty(case):
    cfg, gamma, mask = case
    assert outer_bound_relay(cfg, gamma, 0) == 0.0
    assert outer_bound_dest(cfg, gamma, 0) == 0.0
    assert outer_bound_relay(cfg, gamma, mask) >= 0.0
    assert outer_bound_dest(cfg, gamma, mask) >= 0.0


@settings(deadline=None, max_examples=60)
@given(config_gamma_mask(), st.integers(0, 2**4 - 1))
def test_cutset_bounds_monotone_in_subset(case, extra):
    cfg, gamma, mask = case
    wider = (mask | extra) & full_mask(cfg.K)
    assert outer_bound_relay(cfg, gamma, mask) <= outer_bound_relay(cfg, gamma, wider) + 1e-12
    assert outer_bound_dest(cfg, gamma, mask) <= outer_bound_dest(cfg, gamma, wider) + 1e-12


@settings(deadline=None, max_examples=60)
@given(config_split_mask(), st.integers(0, 3), st.floats(0.0, 1.0, allow_nan=False))
def test_df_relay_monotone_dest_antitone_in_alpha(case, idx, bump):
    cfg, split, mask = case
    k = idx % cfg.K
    raised = list(split.alpha)
    raised[k] = min(1.0, raised[k] + bump)
    other = DfPowerSplit(tuple(raised), split.beta)
    assert df_bound_relay(cfg, other, mask) >= df_bound_relay(cfg, split, mask) - 1e-12
    assert df_bound_dest(cfg, other, mask) <= df_bound_dest(cfg, split, mask) + 1e-12


@settings(deadline=None, max_examples=60)
@given(config_split_mask())
def test_df_to_correlation_feasible(case):
    cfg, split, _ = case
    gamma = df_to_correlation(split)
    assert isinstance(gamma, CorrelationVector)
    assert all(g >= 0.0 for g in gamma.gamma)
    assert sum(gamma.gamma) <= 1.0 + 1e-12


@settings(deadline=None, max_examples=60)
@given(config_split_mask())
def test_reduction_identity_full_relay_cut(case):
    # Proportional relay split: the coherent penalty saturates Cauchy-Schwarz
    # and the cutset bound collapses onto the achievable one on the full set.
    cfg, split, _ = case
    star = DfPowerSplit(split.alpha, tuple(beta_star(cfg, split.alpha)))
    full = full_mask(cfg.K)
    outer = outer_bound_relay(cfg, df_to_correlation(star), full)
    inner = df_bound_relay(cfg, star, full)
    assert outer == pytest.approx(inner, abs=1e-12)


@settings(deadline=None, max_examples=60)
@given(config_split_mask())
def test_dest_dominance(case):
    cfg, split, mask = case
    gamma = df_to_correlation(split)
    assert df_bound_dest(cfg, split, mask) <= outer_bound_dest(cfg, gamma, mask) + 1e-12


@settings(deadline=None, max_examples=60)
@given(config_split_mask())
def test_beta_star_maximizes_full_dest_bound(case):
    cfg, split, _ = case
    star = DfPowerSplit(split.alpha, tuple(beta_star(cfg, split.alpha)))
    full = full_mask(cfg.K)
    assert df_bound_dest(cfg, star, full) >= df_bound_dest(cfg, split, full) - 1e-12


@settings(deadline=None, max_examples=60)
@given(configs(), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_relay_sum_snr_decreasing_in_statistic(cfg, u, v):
    x_max = math.sqrt(sum(cfg.lam))
    x1, x2 = sorted((u * x_max, v * x_max))
    assert relay_sum_snr(cfg, x1) >= relay_sum_snr(cfg, x2) - 1e-12


@settings(deadline=None, max_examples=40)
@given(config_gamma_mask(), config_gamma_mask(), st.floats(0.0, 1.0))
def test_dest_cutset_concave_in_gamma(case_a, case_b, lam):
    cfg, ga, mask = case_a
    _, gb, _ = case_b
    if len(gb.gamma) != cfg.K:
        return
    a, b = np.array(ga.gamma), np.array(gb.gamma)
    mid = as_correlation(tuple(lam * a + (1.0 - lam) * b), cfg.K)
    chord = lam * outer_bound_dest(cfg, ga, mask) + (1.0 - lam) * outer_bound_dest(cfg, gb, mask)
    assert outer_bound_dest(cfg, mid, mask) >= chord - 1e-9


@settings(deadline=None, max_examples=60)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=30))
def test_convex_hull_idempotent_and_contains_inputs(points):
    pts = np.array(points, dtype=np.float64)
    hull = convex_hull(pts)
    np.testing.assert_allclose(convex_hull(hull), hull, rtol=0, atol=0)
    if len(hull) >= 3:
        for p in pts:
            assert polygon_contains(hull, p, tol=1e-7)


@settings(deadline=None, max_examples=25)
@given(configs(min_k=1, max_k=4))
def test_equalizer_root_matches_bisection(cfg):
    if bottleneck_check(cfg):
        assert solve_equalizer(cfg).sum_rate == awgn_capacity(sum(cfg.P) / cfg.N_r)
        return
    k0, k1, k2, k3 = k_coefficients(cfg)
    gap = lambda x: (k2 + 2.0 * k1 * x) - (k3 - k0 * x * x)
    ref = brentq(gap, 0.0, math.sqrt(k3 / k0), xtol=1e-14)
    assert solve_equalizer(cfg).root == pytest.approx(ref, abs=1e-12)
