import math

from hypothesis import given, settings, strategies as st
import pytest

from ladderlab import (
    DomainError, LadderConfig, ParameterError, ReverseTower, direct_iterate, hardy_z, phi1,
    phi1_derivative, phi1_inverse, prime_count, reverse_tower, z_tilde,
)
from ladderlab.ladder import ladder_lhs, phi1_array

C = 0.577215664901533


def _zero_near(t, step=0.05):
    z0 = hardy_z(t)
    b = t
    while hardy_z(b) * z0 > 0:
        b += step
    a = b - step
    for _ in range(100):
        m = 0.5 * (a + b)
        if hardy_z(m) * hardy_z(a) > 0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def test_config_validation():
    with pytest.raises(ParameterError):
        LadderConfig(t_min=1.0)
    with pytest.raises(ParameterError):
        LadderConfig(root_tol=0.0)
    with pytest.raises(ParameterError):
        LadderConfig(quad_tol=-1e-8)
    assert LadderConfig(c0=3.5).c0 == 3.5


def test_phi1_defining_residual(cfg):
    T = 1e4
    y = phi1(T, cfg)
    J = cfg.j(T).value
    assert abs(ladder_lhs(y, cfg) - J) <= 1e-10 * J
    assert y < T


def test_phi1_gap_near_asymptotic(cfg):
    T = 1e5
    gap = T - phi1(T, cfg)
    assert abs(gap / ((1 - C) * T / math.log(T)) - 1) < 0.05


def test_phi1_monotone(cfg):
    assert phi1(1e4, cfg) < phi1(1.1e4, cfg)


def test_phi1_domain(cfg):
    with pytest.raises(DomainError):
        phi1(50.0, cfg)
    with pytest.raises(DomainError):
        phi1(float("nan"), cfg)


def test_phi1_array_matches_scalar(cfg):
    import numpy as np
    t = np.array([5000.0, 1234.5, 9999.0, 1234.5])
    arr = phi1_array(t, cfg)
    for v, y in zip(t, arr):
        assert y == pytest.approx(phi1(v, cfg), rel=1e-13)


def test_c0_shifts_phi1():
    # larger c0 lowers the root: F increases in c0 at fixed y
    a = phi1(1e4, LadderConfig(c0=0.0))
    b = phi1(1e4, LadderConfig(c0=50.0))
    assert b < a


def test_inverse_round_trip_1e5(cfg):
    U = 1e5
    T = phi1_inverse(U, cfg)
    assert T > U
    assert abs(phi1(T, cfg) - U) <= 1e-8 * U


def test_inverse_near_asymptotic(cfg):
    U = 1e5
    want = U + (1 - C) * U / math.log(U)
    assert abs(phi1_inverse(U, cfg) / want - 1) < 0.05


def test_inverse_increasing(cfg):
    assert phi1_inverse(1e4, cfg) < phi1_inverse(1.1e4, cfg)


@settings(max_examples=20, deadline=None)
@given(st.floats(1e3, 1e5))
def test_inverse_round_trip_property(U):
    T = phi1_inverse(U)
    assert abs(phi1(T) - U) <= 1e-8 * U


def test_tower_1e4(cfg):
    tw = reverse_tower(1e4, 3, cfg)
    assert len(tw.levels) == 4
    assert all(b > a for a, b in zip(tw.levels, tw.levels[1:]))
    assert tw.levels[0] == 1e4
    assert tw.residuals_ok()
    for r in range(1, 4):
        assert abs(phi1(tw.levels[r], cfg) - tw.levels[r - 1]) <= cfg.root_tol * tw.levels[r]


def test_tower_pi_ratio(cfg):
    tw = reverse_tower(1e5, 2, cfg)
    ratio = (tw.levels[1] - tw.levels[0]) / ((1 - C) * prime_count(tw.levels[1]))
    assert 0.8 <= ratio <= 1.2


def test_tower_levels_equivalent(cfg):
    tw = reverse_tower(1e5, 3, cfg)
    assert 1 < tw.levels[3] / tw.levels[0] < 1.2


def test_tower_depth_limits(cfg):
    with pytest.raises(ParameterError):
        reverse_tower(1e4, 0, cfg)
    with pytest.raises(ParameterError):
        reverse_tower(1e4, 11, cfg)


def test_tower_invariants_enforced():
    with pytest.raises(ParameterError):
        ReverseTower(1.0, 1, (1.0, 0.5), (0.0, 0.0), 1e-10)


def test_direct_iterate(cfg):
    assert direct_iterate(5e3, 0, cfg) == [5e3]
    tw = reverse_tower(1e4, 1, cfg)
    back = direct_iterate(tw.levels[1], 1, cfg)
    assert abs(back[1] - 1e4) <= 1e-8 * 1e4
    seq = direct_iterate(1e5, 2, cfg)
    assert seq[2] < seq[1] < seq[0]


def test_direct_iterate_hits_floor():
    with pytest.raises(DomainError):
        direct_iterate(110.0, 5)


def test_derivative_vs_finite_difference(cfg):
    # expected to fail: h = 0.5 spans most of a zero gap, so the difference
    # quotient is a window average of Z^2/slope rather than its point value
    t, h = 1e4, 0.5
    fd = (phi1(t + h, cfg) - phi1(t - h, cfg)) / (2 * h)
    assert abs(fd / phi1_derivative(t, cfg) - 1) < 1e-3


def test_derivative_vs_small_step_difference(cfg):
    t, h = 1e4, 1e-3
    while abs(hardy_z(t)) < 1.0:
        t += 0.37
    fd = (phi1(t + h, cfg) - phi1(t - h, cfg)) / (2 * h)
    assert abs(fd / phi1_derivative(t, cfg) - 1) < 1e-3


def test_derivative_at_zero(cfg):
    z = _zero_near(1e4)
    assert abs(phi1_derivative(z, cfg)) < 1e-10
    assert z_tilde(z, cfg) == pytest.approx(0.0, abs=1e-5)


def test_derivative_identity(cfg):
    t = 1e5
    y = phi1(t, cfg)
    lhs = phi1_derivative(t, cfg) * (math.log(y) + 1 + cfg.c - cfg.ln_two_pi)
    assert lhs == pytest.approx(hardy_z(t) ** 2, rel=1e-15)


def test_z_tilde_definition(cfg):
    for t in (150.0, 4321.0, 1e5):
        assert z_tilde(t, cfg) ** 2 == pytest.approx(phi1_derivative(t, cfg), rel=1e-14)


def test_z_tilde_asymptotic_factor(cfg):
    t = 1e5
    checked = 0
    while checked < 10:
        z = hardy_z(t)
        if abs(z) > 1:
            ratio = z_tilde(t, cfg) * math.sqrt(math.log(t)) / abs(z)
            assert 0.97 <= ratio <= 1.03
            checked += 1
        t += 0.7


@pytest.mark.parametrize("T", [1e4, 1e5])
def test_complementarity(cfg, T):
    ratio = (phi1(T, cfg) + (1 - C) * prime_count(T)) / T
    assert 0.98 <= ratio <= 1.02


@pytest.mark.parametrize("T", [1e4, 1e5])
def test_gap_law(cfg, T):
    # expected to fail: the ratio is ~ ln T / (ln T - 0.26) under the root definition
    ratio = (T - phi1(T, cfg)) / ((1 - C) * T / math.log(T))
    assert 0.98 <= ratio <= 1.02


def test_gap_law_against_exact_pi(cfg):
    r = [(T - phi1(T, cfg)) / ((1 - C) * prime_count(T)) for T in (1e4, 1e5)]
    assert all(0.8 <= v <= 1.2 for v in r)
    assert abs(r[1] - 1) < abs(r[0] - 1)
