"""Ladder-generated automorphisms of [-1, 1] acting on Legendre polynomials.

For a tower T < T^1 < ... and its companion for T + 2, generation p uses

    v_p^r(t) = phi1^r(x_p(t)),  x_p(t) = W_p/2 (t + 1) + T^p,  W_p = (T+2)^p - T^p
    u_p(t)   = phi1^p(x_p(t)) - T - 1

and multiplies by prod_r |Z~(v_p^r(t))|. Since |Z~|^2 = phi1', the product of
squared weights is (2/W_p) u_p'(t), so the Gram matrix of a generation chain
is prod_i (2/W_{p_i}) * diag(2/(2n+1)).
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .errors import DomainError, ParameterError, PrecisionUnreachable
from .ladder import MAX_TOWER_DEPTH, _cfg, _lhs_slope, phi1_array, reverse_tower
from .special_functions import hardy_z

ENDPOINT_SLACK = 1e-9
NOISE_FLOOR = 1e-10


def _check_n(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError("n must be a nonnegative integer")
    return int(n)


def _check_t(t):
    t = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(t)) or np.any(np.abs(t) > 1.0):
        raise DomainError("t must lie in [-1, 1]")
    return t


def legendre_table(n_max, t):
    """Rows P_0(t) .. P_{n_max}(t) by the three-term recurrence."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty((n_max + 1,) + t.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = t
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1) * t * out[k] - k * out[k - 1]) / (k + 1)
    return out


def legendre_eval(n, t):
    n = _check_n(n)
    t_arr = _check_t(t)
    val = legendre_table(n, t_arr)[n]
    return float(val) if np.ndim(t) == 0 else val


@dataclass(frozen=True)
class ProliferationSpec:
    base_T: float
    generations: tuple
    N: int
    quad_order: int = 16

    def __post_init__(self):
        gens = tuple(self.generations)
        object.__setattr__(self, "generations", gens)
        if not gens:
            raise ParameterError("need at least one generation")
        for p in gens:
            if isinstance(p, bool) or int(p) != p or not 1 <= p <= MAX_TOWER_DEPTH:
                raise ParameterError(f"generation index {p!r} outside [1, {MAX_TOWER_DEPTH}]")
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ParameterError("N must be a positive integer")
        if self.quad_order != 16:
            raise ParameterError("only 16-point Gauss-Legendre panels are supported")
        if not (math.isfinite(self.base_T) and self.base_T > 0):
            raise ParameterError("base_T must be positive")

    @property
    def depth(self):
        return max(self.generations)

    def as_dict(self):
        return {"base_T": self.base_T, "generations": list(self.generations),
                "N": self.N, "quad_order": self.quad_order}


_tower_cache = {}


def _towers(T, p, cfg):
    """(levels of the T tower, levels of the T + 2 tower) to depth >= p."""
    key = (float(T), cfg, id(cfg.checkpoints))
    hit = _tower_cache.get(key)
    if hit is None or len(hit[0]) <= p:
        a = reverse_tower(T, p, cfg).levels
        b = reverse_tower(T + 2.0, p, cfg).levels
        hit = (a, b)
        _tower_cache[key] = hit
    return hit


def _window(p, T, cfg):
    lo_tower, hi_tower = _towers(T, p, cfg)
    return lo_tower[p], hi_tower[p]


def _affine(p, T, t, cfg):
    lo, hi = _window(p, T, cfg)
    x = lo + 0.5 * (hi - lo) * (t + 1.0)
    return np.where(t == 1.0, hi, x)


def _check_p(p, r=None):
    if isinstance(p, bool) or int(p) != p or not 1 <= p <= MAX_TOWER_DEPTH:
        raise ParameterError(f"p must be an integer in [1, {MAX_TOWER_DEPTH}]")
    if r is not None and (isinstance(r, bool) or int(r) != r or not 0 <= r <= p - 1):
        raise ParameterError("r must be an integer in [0, p - 1]")


def _iterates(x, k, cfg):
    out = [x]
    for _ in range(k):
        out.append(phi1_array(out[-1], cfg))
    return out


def v_map(p, r, T, t, cfg=None):
    cfg = _cfg(cfg)
    _check_p(p, r)
    t_arr = _check_t(t)
    v = _iterates(_affine(p, T, t_arr, cfg), r, cfg)[-1]
    return float(v) if np.ndim(t) == 0 else v


def _clip_unit(w):
    if np.any(np.abs(w) > 1.0 + ENDPOINT_SLACK):
        raise PrecisionUnreachable("automorphism left [-1, 1] beyond rounding slack")
    return np.clip(w, -1.0, 1.0)


def u_map(p, T, t, cfg=None):
    cfg = _cfg(cfg)
    _check_p(p)
    t_arr = _check_t(t)
    u = _iterates(_affine(p, T, t_arr, cfg), p, cfg)[-1] - T - 1.0
    return float(u) if np.ndim(t) == 0 else u


def _chain(spec, t, cfg):
    """Innermost-first pass: (u argument for P_n, product of |Z~| factors, factor args)."""
    w = np.asarray(t, dtype=np.float64)
    weight = np.ones_like(w)
    args = []
    for p in reversed(spec.generations):
        its = _iterates(_affine(p, spec.base_T, w, cfg), p, cfg)
        for r in range(p):
            z = hardy_z(its[r])
            # |Z~(v)| = |Z(v)| / sqrt(F'(phi1(v)))
            weight = weight * np.abs(z) / np.sqrt(_lhs_slope(its[r + 1], cfg))
            args.append(its[r])
        w = _clip_unit(its[p] - spec.base_T - 1.0)
    return w, weight, args


def proliferate(n, spec, t, cfg=None):
    """P_n of the nested automorphisms times all |Z~| weight factors."""
    cfg = _cfg(cfg)
    n = _check_n(n)
    if n >= spec.N:
        raise DomainError(f"n must be < N = {spec.N}")
    t_arr = _check_t(t)
    flat = t_arr.ravel()
    w, weight, _ = _chain(spec, flat, cfg)
    val = (legendre_table(n, w)[n] * weight).reshape(t_arr.shape)
    return float(val) if np.ndim(t) == 0 else val


@dataclass(frozen=True)
class GramResult:
    matrix: np.ndarray
    max_offdiag_normalized: float
    diag: tuple
    predicted_scale: float
    err_estimate: float
    panels: int

    @property
    def scaled_diag(self):
        """G_nn (2n + 1); constant across n for an orthogonal generation."""
        return tuple(d * (2 * n + 1) for n, d in enumerate(self.diag))

    def summary(self, spec):
        return {
            "max_offdiag_normalized": self.max_offdiag_normalized,
            "diag": list(self.diag),
            "predicted_scale": self.predicted_scale,
            "err_estimate": self.err_estimate,
            "panels": self.panels,
            "spec": spec.as_dict(),
        }


def _zero_gap(x):
    return 2 * math.pi / math.log(x / (2 * math.pi))


def _base_width(spec, cfg):
    """Panel width in t: 1/20 of the smallest zero gap seen by any factor."""
    width = 2.0
    for p in spec.generations:
        lo_tower, hi_tower = _towers(spec.base_T, p, cfg)
        for r in range(p):
            lvl = p - r
            span = hi_tower[lvl] - lo_tower[lvl]
            width = min(width, _zero_gap(lo_tower[lvl]) / 20 * 2.0 / span)
    return width


def _split_at_sign_changes(edges, spec, cfg):
    """Insert breakpoints where a factor argument crosses a zero of Z."""
    _, _, args = _chain(spec, edges, cfg)
    extra = []
    for a in args:
        z = hardy_z(a)
        idx = np.flatnonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)
        if idx.size == 0:
            continue
        lo, hi = a[idx].copy(), a[idx + 1].copy()
        z_lo = z[idx]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            same = np.sign(hardy_z(mid)) == np.sign(z_lo)
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        root = 0.5 * (lo + hi)
        # the argument is monotone in t; place the break by linear interpolation
        frac = (root - a[idx]) / (a[idx + 1] - a[idx])
        extra.append(edges[idx] + frac * (edges[idx + 1] - edges[idx]))
    if not extra:
        return edges
    return np.unique(np.concatenate([edges] + extra))


def gram_matrix(spec, cfg=None, tol=1e-9, max_rounds=16):
    """G_nm = int_{-1}^{1} f_n f_m dt over panels split at Z sign changes.

    Panels carry 16- and 8-point values of all N^2 entries and are halved
    until every entry's difference is below ``tol`` times the predicted
    diagonal scale (pro rata by width), or below the evaluation noise floor.
    """
    cfg = _cfg(cfg)
    if spec.base_T < cfg.t_min:
        raise DomainError("base_T below t_min")
    N = spec.N
    scale = 1.0
    for p in spec.generations:
        lo, hi = _window(p, spec.base_T, cfg)
        scale *= 2.0 / (hi - lo)

    n_pan = max(1, math.ceil(2.0 / _base_width(spec, cfg)))
    edges = np.linspace(-1.0, 1.0, n_pan + 1)
    edges[-1] = 1.0
    edges = _split_at_sign_changes(edges, spec, cfg)
    lo, hi = edges[:-1], edges[1:]

    accepted = []
    err_total = 0.0
    for _ in range(max_rounds):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        nodes = np.concatenate([mid[:, None] + half[:, None] * kernels.X16,
                                mid[:, None] + half[:, None] * kernels.X8], axis=1)
        w, weight, _ = _chain(spec, nodes.ravel(), cfg)
        f = (legendre_table(N - 1, w) * weight).reshape(N, lo.size, 24)
        f16, f8 = f[:, :, :16], f[:, :, 16:]
        g16 = np.einsum("ipk,jpk,k->pij", f16, f16, kernels.W16) * half[:, None, None]
        g8 = np.einsum("ipk,jpk,k->pij", f8, f8, kernels.W8) * half[:, None, None]
        err = np.abs(g16 - g8).max(axis=(1, 2))
        # ladder solves leave ~1e-11 relative noise in f; never chase below it
        floor = NOISE_FLOOR * np.abs(g16).max(axis=(1, 2))
        ok = err <= np.maximum(tol * scale * (hi - lo), floor)
        for i in np.flatnonzero(ok):
            accepted.append((lo[i], g16[i]))
        err_total += float(err[ok].sum())
        if ok.all():
            break
        m = mid[~ok]
        lo, hi = np.concatenate([lo[~ok], m]), np.concatenate([m, hi[~ok]])
    else:
        raise PrecisionUnreachable("Gram quadrature did not converge")

    accepted.sort(key=lambda item: item[0])
    stack = np.array([g for _, g in accepted])
    G = np.empty((N, N))
    for i in range(N):
        for j in range(N):
            G[i, j] = math.fsum(stack[:, i, j])
    G = 0.5 * (G + G.T)
    d = np.diag(G).copy()
    off = 0.0
    if N > 1:
        norm = np.abs(G) / np.sqrt(np.outer(d, d))
        np.fill_diagonal(norm, 0.0)
        off = float(norm.max())
    return GramResult(G, off, tuple(float(v) for v in d), scale, err_total, len(accepted))
