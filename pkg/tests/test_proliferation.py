import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from ladderlab import (
    DomainError, ParameterError, ProliferationSpec, gram_matrix, hardy_z, legendre_eval,
    proliferate, reverse_tower, u_map, v_map, z_tilde,
)

T = 1e4


def test_legendre_examples():
    assert legendre_eval(0, 0.77) == 1.0
    assert legendre_eval(1, 0.3) == 0.3
    assert legendre_eval(2, 0.5) == pytest.approx(-0.125, abs=1e-16)


def test_legendre_domain():
    with pytest.raises(DomainError):
        legendre_eval(-1, 0.0)
    with pytest.raises(DomainError):
        legendre_eval(2, 1.5)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 30), st.floats(-1.0, 1.0))
def test_legendre_vs_numpy(n, t):
    ref = np.polynomial.legendre.legval(t, [0] * n + [1])
    assert legendre_eval(n, t) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("p", [1, 2])
@pytest.mark.parametrize("base", [1e4, 1e5])
def test_u_map_endpoints(cfg, p, base):
    assert abs(u_map(p, base, -1.0, cfg) + 1) <= 1e-8
    assert abs(u_map(p, base, 1.0, cfg) - 1) <= 1e-8


def test_u_map_interior_monotone(cfg):
    assert -1 < u_map(1, T, 0.0, cfg) < 1
    t = np.linspace(-1, 1, 20)
    u = u_map(1, T, t, cfg)
    assert np.all(np.diff(u) > 0)


@settings(max_examples=20, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
def test_u_map_order_preserving(a, b):
    a, b = sorted((a, b))
    ua, ub = u_map(1, T, np.array([a, b]))
    assert -1 - 1e-9 <= ua <= ub <= 1 + 1e-9


def test_v_map_endpoints(cfg):
    lo = reverse_tower(T, 2, cfg).levels
    hi = reverse_tower(T + 2, 2, cfg).levels
    assert v_map(2, 0, T, -1.0, cfg) == lo[2]
    assert v_map(2, 0, T, 1.0, cfg) == hi[2]
    mid = v_map(2, 1, T, 0.0, cfg)
    assert lo[1] <= mid <= hi[1]


def test_v_map_indices(cfg):
    with pytest.raises(ParameterError):
        v_map(2, 2, T, 0.0, cfg)
    with pytest.raises(ParameterError):
        v_map(0, 0, T, 0.0, cfg)
    with pytest.raises(DomainError):
        v_map(1, 0, T, 1.5, cfg)


def test_spec_validation():
    with pytest.raises(ParameterError):
        ProliferationSpec(T, (), 3)
    with pytest.raises(ParameterError):
        ProliferationSpec(T, (0,), 3)
    with pytest.raises(ParameterError):
        ProliferationSpec(T, (1,), 0)
    with pytest.raises(ParameterError):
        ProliferationSpec(T, (1,), 3, quad_order=8)


def test_proliferate_single_factor(cfg):
    spec = ProliferationSpec(T, (1,), 2)
    T1 = reverse_tower(T, 1, cfg).levels[1]
    assert proliferate(0, spec, -1.0, cfg) == pytest.approx(z_tilde(T1, cfg), rel=1e-10)


def test_proliferate_vanishes_at_zero_of_z(cfg):
    spec = ProliferationSpec(T, (1,), 2)
    lo = reverse_tower(T, 1, cfg).levels[1]
    hi = reverse_tower(T + 2, 1, cfg).levels[1]
    a, b = lo, lo + 0.05
    while hardy_z(a) * hardy_z(b) > 0:
        a, b = b, b + 0.05
    for _ in range(100):
        m = 0.5 * (a + b)
        a, b = (m, b) if hardy_z(m) * hardy_z(a) > 0 else (a, m)
    t0 = 2 * (0.5 * (a + b) - lo) / (hi - lo) - 1
    assert abs(proliferate(1, spec, t0, cfg)) < 1e-6


def test_proliferate_sign_changes(cfg):
    spec = ProliferationSpec(T, (1,), 4)
    t = np.linspace(-1, 1, 10_000)
    f = proliferate(3, spec, t, cfg)
    changes = np.count_nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)
    assert changes >= 3


def test_proliferate_index_check(cfg):
    spec = ProliferationSpec(T, (1,), 2)
    with pytest.raises(DomainError):
        proliferate(2, spec, 0.0, cfg)


def test_z_tilde_in_window(cfg):
    # each factor carries |zeta| through Z~ ~ |Z| / sqrt(ln v)
    t = np.linspace(-1, 1, 400)
    v = v_map(1, 0, T, t, cfg)
    picked = [x for x in v if abs(hardy_z(x)) > 1][:10]
    assert len(picked) == 10
    for x in picked:
        ratio = z_tilde(x, cfg) * math.sqrt(math.log(x)) / abs(hardy_z(x))
        assert 0.97 <= ratio <= 1.03


def test_gram_s1(cfg):
    spec = ProliferationSpec(T, (1,), 6)
    g = gram_matrix(spec, cfg)
    G = g.matrix
    assert G.shape == (6, 6)
    assert g.max_offdiag_normalized < 1e-4
    sd = g.scaled_diag
    assert (max(sd) - min(sd)) / min(sd) <= 0.01
    assert np.all(np.abs(G - G.T) <= 1e-12 * np.abs(G).max())
    assert all(d > 0 for d in g.diag)


def test_gram_change_of_variables(cfg):
    spec = ProliferationSpec(T, (1,), 6)
    g = gram_matrix(spec, cfg)
    W = reverse_tower(T + 2, 1, cfg).levels[1] - reverse_tower(T, 1, cfg).levels[1]
    for n, d in enumerate(g.diag):
        assert d == pytest.approx(2 / W * 2 / (2 * n + 1), rel=0.01)


def test_gram_single_function(cfg):
    g = gram_matrix(ProliferationSpec(T, (1,), 1), cfg)
    assert g.matrix.shape == (1, 1)
    assert g.max_offdiag_normalized == 0.0


def test_gram_two_generations(cfg):
    # s = 2: diagonality and positive diagonal only; the scale is recorded
    g = gram_matrix(ProliferationSpec(T, (1, 1), 3), cfg)
    assert g.max_offdiag_normalized < 1e-4
    assert all(d > 0 for d in g.diag)
    assert g.predicted_scale > 0


def test_gram_summary(cfg):
    spec = ProliferationSpec(T, (1,), 2)
    s = gram_matrix(spec, cfg).summary(spec)
    assert set(s) >= {"max_offdiag_normalized", "diag", "spec"}
