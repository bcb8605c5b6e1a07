"""Finite-tau functionals along rays, Fermat rationals, convergence fits.

For x > 0 and rho = x tau / (1 - c), two functionals tend to x as tau grows:

    zeta_integral:    (1/tau) int_rho^{phi1^{-1}(rho)} Z(t)^2 dt
    raabe_difference: (1/tau) [R(rho) - R(phi1(rho))]     (R = Raabe closed form)

At desk heights the raabe variant carries a residual close to
(ln 2pi - 1 - c) x / ln rho; the zeta variant a much smaller, oscillating one.
Nothing here decides anything about the limit: reports carry an error band
and a three-way flag.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import DomainError, ParameterError
from .ladder import _cfg, phi1, phi1_inverse
from .quadrature import integrate_zeta_sq
from .raabe import raabe_integral

VARIANTS = ("zeta_integral", "raabe_difference")

DISTINGUISHABLE = "distinguishable"
INDISTINGUISHABLE = "indistinguishable at desk scale"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class FermatRational:
    x: int
    y: int
    z: int
    n: int

    def __post_init__(self):
        for name in ("x", "y", "z", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ParameterError(f"{name} must be an integer")
        if self.n < 3 or min(self.x, self.y, self.z) < 1:
            raise ParameterError("need n >= 3 and x, y, z >= 1")
        if self.x ** self.n + self.y ** self.n == self.z ** self.n:
            raise ParameterError("x^n + y^n = z^n")

    @property
    def value(self):
        return Fraction(self.x ** self.n + self.y ** self.n, self.z ** self.n)

    def __float__(self):
        return float(self.value)

    def as_dict(self):
        v = self.value
        return {"x": self.x, "y": self.y, "z": self.z, "n": self.n,
                "num": v.numerator, "den": v.denominator}


def ray_start(x, tau, cfg=None):
    """rho = x tau / (1 - c), the lower end of the integration window."""
    cfg = _cfg(cfg)
    return x * tau / (1.0 - cfg.c)


def _rho(x, tau, cfg):
    x = float(x)
    tau = float(tau)
    if not (math.isfinite(x) and x > 0):
        raise DomainError("x must be positive")
    if not (math.isfinite(tau) and tau > 0):
        raise DomainError("tau must be positive")
    rho = ray_start(x, tau, cfg)
    if rho < cfg.t_min:
        raise DomainError(f"rho = {rho:g} below t_min = {cfg.t_min:g}")
    return rho, tau


def functional_zeta(x, tau, cfg=None):
    cfg = _cfg(cfg)
    rho, tau = _rho(x, tau, cfg)
    upper = phi1_inverse(rho, cfg)
    return integrate_zeta_sq(rho, upper, cfg.quad_tol).value / tau


def functional_raabe(x, tau, cfg=None):
    cfg = _cfg(cfg)
    rho, tau = _rho(x, tau, cfg)
    return (raabe_integral(rho, cfg) - raabe_integral(phi1(rho, cfg), cfg)) / tau


_FUNCTIONALS = {"zeta_integral": functional_zeta, "raabe_difference": functional_raabe}


@dataclass(frozen=True)
class TracePoint:
    tau: float
    value: float
    residual: float


@dataclass(frozen=True)
class Fit:
    C: float
    quality: float


@dataclass(frozen=True)
class FunctionalTrace:
    target_x: float
    variant: str
    points: tuple
    fit: Fit
    rhos: tuple

    def model(self, i):
        """Fitted residual at grid point i."""
        return self.fit.C * _shape(self.variant, self.rhos[i], self.points[i].tau)


def _shape(variant, rho, tau):
    if variant == "raabe_difference":
        return 1.0 / math.log(rho)
    return rho ** (1.0 / 3.0) / tau


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ParameterError(f"variant must be one of {VARIANTS}")


def _check_grid(tau_grid):
    grid = [float(t) for t in tau_grid]
    if len(grid) < 3:
        raise ParameterError("tau grid needs at least 3 points")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ParameterError("tau grid must be strictly increasing")
    return grid


def fit_residuals(residuals, shapes):
    """Least squares of log|res| = log|C| + log(shape) with unit slope.

    Quality is R^2 on the log scale clipped to [0, 1]; it is 0 when residual
    signs differ or magnitudes fail to decrease strictly.
    """
    res = np.asarray(residuals, dtype=np.float64)
    shp = np.asarray(shapes, dtype=np.float64)
    mag = np.abs(res)
    if np.any(mag == 0):
        return Fit(0.0, 0.0)
    log_c = float(np.mean(np.log(mag) - np.log(shp)))
    sign = 1.0 if np.sum(np.sign(res)) >= 0 else -1.0
    C = sign * math.exp(log_c)
    same_sign = np.all(np.sign(res) == np.sign(res[0]))
    decreasing = np.all(np.diff(mag) < 0)
    if not (same_sign and decreasing):
        return Fit(C, 0.0)
    y = np.log(mag)
    pred = log_c + np.log(shp)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum((y - pred) ** 2))
    if ss_tot == 0:
        return Fit(C, 1.0 if ss_res == 0 else 0.0)
    return Fit(C, min(1.0, max(0.0, 1.0 - ss_res / ss_tot)))


def convergence_trace(x, tau_grid, variant="raabe_difference", cfg=None):
    cfg = _cfg(cfg)
    _check_variant(variant)
    grid = _check_grid(tau_grid)
    x = float(x)
    func = _FUNCTIONALS[variant]
    points = []
    rhos = []
    for tau in grid:
        v = func(x, tau, cfg)
        points.append(TracePoint(tau, v, v - x))
        rhos.append(ray_start(x, tau, cfg))
    shapes = [_shape(variant, r, p.tau) for r, p in zip(rhos, points)]
    fit = fit_residuals([p.residual for p in points], shapes)
    return FunctionalTrace(x, variant, tuple(points), fit, tuple(rhos))


def fermat_rationals(eps, n_max, z_max=200):
    """All (x, y, z, n) with (x^n + y^n)/z^n in (1 - eps, 1 + eps).

    Enumerates 3 <= n <= n_max, 1 <= x <= y <= z <= z_max with exact integer
    arithmetic; each hit with x != y is also returned mirrored so the list is
    closed under x <-> y. Sorted by |value - 1|, then (x, y, z, n).
    """
    if not (0 < eps < 1):
        raise ParameterError("eps must lie in (0, 1)")
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 3:
        raise ParameterError("n_max must be an integer >= 3")
    if isinstance(z_max, bool) or int(z_max) != z_max or z_max < 1:
        raise ParameterError("z_max must be an integer >= 1")
    e = Fraction(eps)
    found = set()
    for n in range(3, int(n_max) + 1):
        for z in range(1, int(z_max) + 1):
            zn = z ** n
            lo = (1 - e) * zn
            hi = (1 + e) * zn
            for y in range(1, z + 1):
                yn = y ** n
                if yn + 1 >= hi:
                    break
                # candidate x from a float root, then widened and checked exactly
                need = float(lo - yn)
                x0 = 1 if need <= 1 else max(1, int(need ** (1.0 / n)) - 1)
                for x in range(x0, y + 1):
                    s = x ** n + yn
                    if s >= hi:
                        break
                    if s > lo and s != zn:
                        found.add((x, y, z, n))
    out = set()
    for x, y, z, n in found:
        out.add((x, y, z, n))
        out.add((y, x, z, n))
    rats = [FermatRational(*q) for q in out]
    rats.sort(key=lambda r: (abs(r.value - 1), r.x, r.y, r.z, r.n))
    return rats


@dataclass(frozen=True)
class EquivalenceEntry:
    rational: FermatRational
    trace: FunctionalTrace
    band: float
    limit: float
    flag: str

    def to_dict(self):
        return {
            "rational": self.rational.as_dict(),
            "variant": self.trace.variant,
            "points": [{"tau": p.tau, "value": p.value, "residual": p.residual}
                       for p in self.trace.points],
            "fit": {"C": self.trace.fit.C, "quality": self.trace.fit.quality},
            "band": self.band,
            "limit": self.limit,
            "flag": self.flag,
        }


def classify(trace, target):
    """(band, extrapolated limit, flag) for a trace aimed at ``target``.

    The band is the fitted residual model at the largest tau. The limit
    subtracts the fitted model from each point and averages.
    """
    sep = abs(target - 1.0)
    band = abs(trace.model(len(trace.points) - 1))
    limit = float(np.mean([p.value - trace.model(i) for i, p in enumerate(trace.points)]))
    if band >= sep:
        flag = INDISTINGUISHABLE
    elif trace.fit.quality > 0 and abs(limit - 1.0) >= sep / 2 and abs(limit - target) < sep / 2:
        flag = DISTINGUISHABLE
    else:
        flag = INCONCLUSIVE
    return band, limit, flag


def equivalence_report(rationals, tau_grid, variant="raabe_difference", cfg=None):
    """One :class:`EquivalenceEntry` per rational, in input order."""
    cfg = _cfg(cfg)
    rationals = list(rationals)
    if not rationals:
        raise ParameterError("need at least one rational")
    _check_variant(variant)
    grid = _check_grid(tau_grid)
    out = []
    for q in rationals:
        target = float(q.value)
        trace = convergence_trace(target, grid, variant, cfg)
        band, limit, flag = classify(trace, target)
        out.append(EquivalenceEntry(q, trace, band, limit, flag))
    return out
