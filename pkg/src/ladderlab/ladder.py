"""The ladder phi1, its inverse, iterations, derivative and Z-tilde.

phi1(T) is defined as the root y of

    y ln y + (c - ln 2pi) y + c0 = J(T),

with J the Hardy-Littlewood integral. The left side F(y) is convex with its
minimum at y* = exp(ln 2pi - 1 - c) ~ 2.9, so it is strictly increasing on
[y*, inf) and the root there is unique.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import BracketError, DomainError, ParameterError, PrecisionUnreachable
from .quadrature import (
    DEFAULT_TOL, CheckpointTable, default_table, j_at_sorted, j_integral,
)
from .roots import solve_increasing
from .special_functions import CONSTANTS, hardy_z

MAX_TOWER_DEPTH = 10


@dataclass(frozen=True)
class LadderConfig:
    c: float = CONSTANTS.euler_c
    c0: float = 0.0
    t_min: float = 100.0
    root_tol: float = 1e-10
    quad_tol: float = DEFAULT_TOL
    ln_two_pi: float = CONSTANTS.ln_two_pi
    table: CheckpointTable = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for name in ("c", "c0", "t_min", "root_tol", "quad_tol"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.root_tol <= 0 or self.quad_tol <= 0:
            raise ParameterError("root_tol and quad_tol must be positive")
        if self.t_min <= self.y_floor:
            raise ParameterError(
                f"t_min must exceed exp(ln 2pi - 1 - c) = {self.y_floor:.6g}")

    @property
    def y_floor(self):
        """Minimiser of the left side; it is increasing above this point."""
        return math.exp(self.ln_two_pi - 1.0 - self.c)

    @property
    def checkpoints(self):
        return self.table if self.table is not None else default_table(self.quad_tol)

    def j(self, T):
        return j_integral(T, self.checkpoints, self.quad_tol)

    def constants(self):
        return {
            "c": self.c,
            "c0": self.c0,
            "ln_two_pi": self.ln_two_pi,
            "one_minus_c": 1.0 - self.c,
        }


DEFAULT_CONFIG = LadderConfig()


def _cfg(cfg):
    return DEFAULT_CONFIG if cfg is None else cfg


def ladder_lhs(y, cfg=None):
    """F(y) = y ln y + (c - ln 2pi) y + c0."""
    cfg = _cfg(cfg)
    y = np.asarray(y, dtype=np.float64) if not isinstance(y, float) else y
    return y * np.log(y) + (cfg.c - cfg.ln_two_pi) * y + cfg.c0


def _lhs_slope(y, cfg):
    return np.log(y) + 1.0 + cfg.c - cfg.ln_two_pi


def _check_point(t, cfg, what):
    t = float(t)
    if not math.isfinite(t) or t < cfg.t_min:
        raise DomainError(f"{what} requires t >= t_min = {cfg.t_min:g}, got {t!r}")
    return t


def _invert_lhs(J, cfg, y_hint):
    """Scalar root of F(y) = J on [y_floor, inf) by bracketed Newton."""
    lo = cfg.y_floor
    f = lambda y: float(ladder_lhs(y, cfg)) - J
    if f(lo) > 0:
        raise BracketError(f"J = {J!r} lies below the minimum of the left side")
    hi = max(y_hint, 2 * lo)
    f_hi = f(hi)
    while f_hi < 0:
        lo, hi = hi, 2 * hi
        f_hi = f(hi)
    y = solve_increasing(f, lambda y: float(_lhs_slope(y, cfg)), lo, hi, f_hi=f_hi)
    if abs(f(y)) > cfg.root_tol * max(1.0, abs(J)):
        raise PrecisionUnreachable(f"ladder root residual {f(y):.3g} above tolerance")
    return y


def phi1(T, cfg=None):
    """phi1(T), the root of y ln y + (c - ln 2pi) y + c0 = J(T)."""
    cfg = _cfg(cfg)
    T = _check_point(T, cfg, "phi1")
    return _invert_lhs(cfg.j(T).value, cfg, T)


def phi1_array(t, cfg=None):
    """phi1 at many points, one batched quadrature over the sorted points.

    Equals :func:`phi1` at the smallest point; elsewhere J differs from the
    checkpointed value only by quadrature rounding.
    """
    cfg = _cfg(cfg)
    t = np.asarray(t, dtype=np.float64)
    flat = t.ravel()
    if flat.size == 0:
        return t.copy()
    if not np.all(np.isfinite(flat)) or flat.min() < cfg.t_min:
        raise DomainError(f"phi1 requires t >= t_min = {cfg.t_min:g}")
    order = np.argsort(flat, kind="stable")
    J = j_at_sorted(flat[order], cfg.checkpoints, cfg.quad_tol)
    # F is convex: Newton from a point with F(y) >= J decreases monotonically
    y = flat[order].copy()
    short = ladder_lhs(y, cfg) < J
    while short.any():
        y[short] *= 2
        short = ladder_lhs(y, cfg) < J
    for _ in range(100):
        step = (ladder_lhs(y, cfg) - J) / _lhs_slope(y, cfg)
        y_new = np.maximum(y - step, cfg.y_floor)
        done = np.abs(y_new - y) <= 2 * np.spacing(y)
        y = y_new
        if done.all():
            break
    else:
        raise PrecisionUnreachable("vectorised ladder solve did not converge")
    resid = np.abs(ladder_lhs(y, cfg) - J)
    if np.any(resid > cfg.root_tol * np.maximum(1.0, np.abs(J))):
        raise PrecisionUnreachable("ladder root residual above tolerance")
    out = np.empty_like(y)
    out[order] = y
    return out.reshape(t.shape)


def phi1_inverse(U, cfg=None):
    """T > U with phi1(T) = U, i.e. J(T) = F(U)."""
    cfg = _cfg(cfg)
    U = _check_point(U, cfg, "phi1_inverse")
    target = float(ladder_lhs(U, cfg))
    table = cfg.checkpoints
    # J(T) - J(U) ~ (1 - c) U near the root; overshoot a little, then walk on
    reach = U + 1.2 * (1 - cfg.c) * U / math.log(U) + 1000.0
    try:
        table.extend_to(reach)
        while table.entries[-1][1] < target:
            reach = table.entries[-1][0] + 1000.0
            table.extend_to(reach)
    except PrecisionUnreachable as exc:
        raise BracketError(f"could not extend J far enough to invert at U={U:g}: {exc}") from exc

    rows = table.entries
    i = next(i for i, row in enumerate(rows) if row[1] >= target) - 1
    t_lo, j_lo, _ = rows[i]
    hi, j_hi = rows[i + 1][0], rows[i + 1][1]
    g = lambda x: cfg.j(x).value - target
    if t_lo > U:
        lo, g_lo = t_lo, j_lo - target
    else:
        lo, g_lo = U, g(U)
    ftol = 64 * math.ulp(target)
    T = solve_increasing(g, lambda x: float(hardy_z(x)) ** 2, lo, hi,
                         f_lo=g_lo, f_hi=j_hi - target, ftol=ftol)
    return T


@dataclass(frozen=True)
class ReverseTower:
    """T = T^0 < T^1 < ... < T^k with T^r = phi1^{-1}(T^{r-1}).

    ``residuals[r] = |phi1(T^r) - T^{r-1}|`` with ``residuals[0] = 0``.
    """

    base_T: float
    k: int
    levels: tuple
    residuals: tuple
    root_tol: float

    def __post_init__(self):
        if len(self.levels) != self.k + 1 or len(self.residuals) != self.k + 1:
            raise ParameterError("tower must have k + 1 levels and residuals")
        if self.levels[0] != self.base_T:
            raise ParameterError("levels[0] must equal base_T")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ParameterError("tower levels must be strictly increasing")

    def residuals_ok(self, rtol=None):
        rtol = self.root_tol if rtol is None else rtol
        return all(res <= rtol * lev for res, lev in zip(self.residuals, self.levels))

    def level(self, r):
        return self.levels[r]


def _check_depth(k, low=1):
    if isinstance(k, bool) or int(k) != k or not low <= k <= MAX_TOWER_DEPTH:
        raise ParameterError(f"depth must be an integer in [{low}, {MAX_TOWER_DEPTH}]")
    return int(k)


def reverse_tower(T, k, cfg=None):
    cfg = _cfg(cfg)
    T = _check_point(T, cfg, "reverse_tower")
    k = _check_depth(k)
    levels = [T]
    residuals = [0.0]
    for _ in range(k):
        nxt = phi1_inverse(levels[-1], cfg)
        residuals.append(abs(phi1(nxt, cfg) - levels[-1]))
        levels.append(nxt)
    return ReverseTower(T, k, tuple(levels), tuple(residuals), cfg.root_tol)


def direct_iterate(t, k, cfg=None):
    """[t, phi1(t), phi1(phi1(t)), ...] with k applications."""
    cfg = _cfg(cfg)
    k = _check_depth(k, low=0)
    out = [_check_point(t, cfg, "direct_iterate")]
    for _ in range(k):
        out.append(phi1(_check_point(out[-1], cfg, "direct_iterate"), cfg))
    return out


def phi1_derivative(t, cfg=None):
    """phi1'(t) = Z(t)^2 / (ln phi1(t) + 1 + c - ln 2pi)."""
    cfg = _cfg(cfg)
    t = _check_point(t, cfg, "phi1_derivative")
    z = float(hardy_z(t))
    return z * z / float(_lhs_slope(phi1(t, cfg), cfg))


def z_tilde(t, cfg=None):
    """sqrt(phi1'(t)), asymptotically |zeta(1/2+it)| / sqrt(ln t)."""
    return math.sqrt(phi1_derivative(t, cfg))
