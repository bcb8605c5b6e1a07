import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from ladderlab import (
    CheckpointError, CheckpointTable, DomainError, ParameterError, PrecisionUnreachable,
    hli_reference, integrate_zeta_sq, j_integral, load_checkpoints, save_checkpoints,
)
from ladderlab import quadrature
from ladderlab.quadrature import j_at_sorted, max_panel_width
import oracles


def test_empty_interval():
    r = integrate_zeta_sq(100.0, 100.0, 1e-8)
    assert (r.value, r.err_bound, r.panels) == (0.0, 0.0, 0)


def test_bad_arguments():
    with pytest.raises(DomainError):
        integrate_zeta_sq(-1.0, 5.0)
    with pytest.raises(DomainError):
        integrate_zeta_sq(5.0, 4.0)
    with pytest.raises(ParameterError):
        integrate_zeta_sq(0.0, 5.0, tol=0.0)


def test_interval_additivity_at_50():
    a = integrate_zeta_sq(0, 50, 1e-8)
    b = integrate_zeta_sq(50, 100, 1e-8)
    whole = integrate_zeta_sq(0, 100, 1e-8)
    assert abs(a.value + b.value - whole.value) <= a.err_bound + b.err_bound + whole.err_bound + 1e-12


def test_against_simpson_oracle():
    # h = 1e-4 composite Simpson over an independent Euler-Maclaurin zeta
    ref = oracles.simpson(oracles.zeta_sq_em, 0.0, 100.0, 1e-4)
    got = integrate_zeta_sq(0.0, 100.0, 1e-8).value
    assert abs(got / ref - 1) < 1e-6


def test_err_bound_within_tolerance():
    r = integrate_zeta_sq(1000.0, 3500.0, 1e-8)
    assert 0 <= r.err_bound <= 1e-8 * 2500
    assert r.panels >= 1


def test_panel_width_rule():
    for t in (20.0, 1e3, 1e5):
        assert max_panel_width(t) <= 0.5 * 2 * math.pi / math.log(t / (2 * math.pi))


def test_budget_exhaustion():
    with pytest.raises(PrecisionUnreachable):
        integrate_zeta_sq(0.0, 5000.0, 1e-8, max_evals=1000)


def test_deterministic():
    a = integrate_zeta_sq(123.4, 4567.8, 1e-8)
    b = integrate_zeta_sq(123.4, 4567.8, 1e-8)
    assert a == b


@settings(max_examples=10, deadline=None)
@given(st.lists(st.floats(0.0, 2000.0), min_size=3, max_size=3, unique=True))
def test_additivity_property(pts):
    a, b, c = sorted(pts)
    ab = integrate_zeta_sq(a, b)
    bc = integrate_zeta_sq(b, c)
    ac = integrate_zeta_sq(a, c)
    slack = ab.err_bound + bc.err_bound + ac.err_bound + 4e-16 * abs(ac.value)
    assert abs(ab.value + bc.value - ac.value) <= slack


# -- J and checkpoints -----------------------------------------------------------------


def test_j_zero():
    assert j_integral(0.0).value == 0.0


def test_j_reuse_has_zero_new_panels():
    table = CheckpointTable()
    first = j_integral(100.0, table)
    before = table.new_panels
    second = j_integral(100.0, table)
    assert table.new_panels == before
    assert second == first


def test_j_1000_near_main_term():
    J = j_integral(1000.0).value
    assert abs(J - hli_reference(1000.0)) < 0.05 * 1000


def test_j_matches_direct_quadrature():
    # checkpoint + remainder is the same number as one direct integral
    for T in (2500.0, 7777.7):
        assert j_integral(T).value == pytest.approx(integrate_zeta_sq(0.0, T).value, rel=1e-13)


def test_j_is_a_pure_function_of_T():
    fresh = CheckpointTable()
    assert j_integral(3456.5, fresh).value == j_integral(3456.5).value


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 2e4), st.floats(0.0, 2e3))
def test_j_monotone(T, d):
    assert j_integral(T).value <= j_integral(T + d).value


def test_j_at_sorted_matches_scalar():
    pts = np.array([1200.0, 1200.5, 3999.0, 4001.0, 9876.5])
    vals = j_at_sorted(pts)
    for t, v in zip(pts, vals):
        assert v == pytest.approx(j_integral(t).value, rel=1e-12)


def test_hli_reference():
    assert hli_reference(1.0) == pytest.approx(-1.6834457, abs=1e-7)
    root = math.exp(1 + math.log(2 * math.pi) - 2 * 0.577215664901533)
    assert abs(hli_reference(root)) < 1e-9
    with pytest.raises(DomainError):
        hli_reference(0.0)


def test_hli_residual_at_1e5():
    T = 1e5
    assert abs(j_integral(T).value - hli_reference(T)) < 0.01 * T


def test_table_invariants_after_build():
    table = quadrature.default_table()
    j_integral(5000.0, table)
    rows = table.entries
    assert rows[0] == (0.0, 0.0, 0.0)
    ts = [r[0] for r in rows]
    assert all(b - a <= 1000.0 for a, b in zip(ts, ts[1:]))
    quadrature.validate_entries(rows)


def test_save_load_round_trip(tmp_path):
    table = CheckpointTable([(0.0, 0.0, 0.0), (1000.0, 5912.123456789012, 1e-9 / 3),
                             (2000.0, 13852.000000000004, 0.1 + 0.2)])
    path = tmp_path / "t.csv"
    save_checkpoints(table, path)
    back = load_checkpoints(path)
    assert back == table
    assert back.entries == table.entries


def test_load_rejects_decreasing_t(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,j,err\n0,0,0\n2000,10,1e-9\n1000,20,2e-9\n")
    with pytest.raises(CheckpointError) as info:
        load_checkpoints(path)
    assert info.value.row == 2


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    table = load_checkpoints(path)
    assert len(table) == 0


def test_load_malformed(tmp_path):
    path = tmp_path / "junk.csv"
    path.write_text("t,j,err\n0,0,zero\n")
    with pytest.raises(CheckpointError):
        load_checkpoints(path)


def test_attached_table_resumes(tmp_path):
    path = tmp_path / "store.csv"
    t1 = CheckpointTable(path=str(path))
    j1 = j_integral(2500.0, t1).value
    t2 = load_checkpoints(path, attach=True)
    assert t2.entries == t1.entries
    j_integral(2500.0, t2)
    # only the remainder past the last checkpoint is integrated again
    assert t2.new_panels < t1.new_panels
    assert j_integral(2500.0, t2).value == j1
