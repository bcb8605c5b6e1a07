"""Numba kernels, same formulas as :mod:`numpy_kernels` written as scalar loops.

``gl_panels`` runs panels in parallel with ``prange``; each panel's sum has a
fixed internal order, so results do not depend on the thread count.
"""
import cmath
import math

import warnings

import numpy as np
from numba import njit, prange

# old system TBB: numba falls back to another threading layer, the warning is noise
warnings.filterwarnings("ignore", message=".*TBB.*")

from ._consts import (
    EM_TERMS, EM_WEIGHTS, INV_2PI_H, INV_2PI_L, LN2_H, LN2_L, LN_2PI_H,
    LN_2PI_L, LN_SQRT_2PI, LOG_TURNS, RS_CROSSOVER, RS_ODD, RS_TABLE,
    SQRT_HALF, STIRLING, THETA_EXACT_BELOW, THETA_TAIL, TWO_PI,
)

_JIT = dict(cache=True, nogil=True)
_SPLIT = 134217729.0


@njit(inline="always", **_JIT)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(inline="always", **_JIT)
def _fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


@njit(inline="always", **_JIT)
def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@njit(inline="always", **_JIT)
def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    return _fast_two_sum(s, e + (al + bl))


@njit(**_JIT)
def _ln_dd(t):
    m, e = math.frexp(t)
    if m < SQRT_HALF:
        m *= 2.0
        e -= 1
    fe = float(e)
    num = m - 1.0
    dh, dl = _two_sum(m, 1.0)
    sh = num / dh
    p, pe = _two_prod(sh, dh)
    sl = (((num - p) - pe) - sh * dl) / dh
    s2 = sh * sh
    poly = 1.0 / 27.0
    for k in range(25, 1, -2):
        poly = 1.0 / k + s2 * poly
    h, l = _two_sum(2.0 * sh, 2.0 * sh * s2 * poly)
    h, l = _fast_two_sum(h, l + 2.0 * sl)
    p, pe = _two_prod(fe, LN2_H)
    return _dd_add(p, pe + fe * LN2_L, h, l)


@njit(**_JIT)
def _theta_exact(t):
    z = complex(0.25, 0.5 * t)
    w = z + 10.0
    acc = 0j
    for j in range(10):
        acc += cmath.log(z + j)
    inv = 1.0 / w
    inv2 = inv * inv
    ser = complex(STIRLING[-1], 0.0)
    for i in range(STIRLING.size - 2, -1, -1):
        ser = STIRLING[i] + inv2 * ser
    lg = (w - 0.5) * cmath.log(w) - w + LN_SQRT_2PI + ser * inv - acc
    return lg.imag - 0.5 * t * (LN_2PI_H - LN2_H)


@njit(**_JIT)
def _theta_turns(t):
    if t < THETA_EXACT_BELOW:
        return _theta_exact(t) / TWO_PI, 0.0, 0.0
    lh, ll = _ln_dd(t)
    ah, al = _dd_add(lh, ll, -LN_2PI_H, -LN_2PI_L)
    ah, al = _dd_add(ah, al, -1.0, 0.0)
    half = 0.5 * t
    bh, bl = _two_prod(ah, half)
    bh, bl = _fast_two_sum(bh, bl + al * half)
    p, e = _two_prod(bh, INV_2PI_H)
    ch, cl = _fast_two_sum(p, e + (bh * INV_2PI_L + bl * INV_2PI_H))
    inv = 1.0 / t
    inv2 = inv * inv
    ser = THETA_TAIL[-1]
    for i in range(THETA_TAIL.size - 2, -1, -1):
        ser = THETA_TAIL[i] + inv2 * ser
    return ch, cl, -0.0625 + ser * inv / TWO_PI


@njit(**_JIT)
def theta_scalar(t):
    hi, lo, small = _theta_turns(t)
    return TWO_PI * (hi + (lo + small))


@njit(inline="always", **_JIT)
def _phase(t, th, tl, ts, lh, ll):
    ph, pl = _two_prod(t, lh)
    pl = pl + t * ll
    xh, xl = _dd_add(th, tl, -ph, -pl)
    return TWO_PI * ((xh - math.floor(xh)) + (xl + ts))


@njit(inline="always", **_JIT)
def _main_sum(t, n_end, th, tl, ts, lh, ll, lhh, lhl, rsq, buf):
    """sum_{n=1}^{n_end} cos(theta(t) - t ln n) / sqrt(n).

    Phases are reduced in a separate loop so the double-double arithmetic
    vectorises; cosines follow in a second pass.
    """
    u = _SPLIT * t
    t_hi = u - (u - t)
    t_lo = t - t_hi
    for n in range(1, n_end + 1):
        # two_prod(t, lh[n]) with both splits precomputed
        p = t * lh[n]
        e = ((t_hi * lhh[n] - p) + t_hi * lhl[n] + t_lo * lhh[n]) + t_lo * lhl[n]
        e = e + t * ll[n]
        s = th - p
        bb = s - th
        err = (th - (s - bb)) + (-p - bb) + (tl - e)
        xh = s + err
        xl = err - (xh - s)
        buf[n] = TWO_PI * ((xh - math.floor(xh)) + (xl + ts))
    acc = 0.0
    for n in range(1, n_end + 1):
        acc += math.cos(buf[n]) * rsq[n]
    return acc


@njit(**_JIT)
def _z_rs(t, lh, ll, lhh, lhl, rsq, buf):
    a = math.sqrt(t / TWO_PI)
    n_top = int(math.floor(a))
    th, tl, ts = _theta_turns(t)
    s = _main_sum(t, n_top, th, tl, ts, lh, ll, lhh, lhl, rsq, buf)
    z = a - n_top - 0.5
    w = z * z
    inv = 1.0 / a
    total = 0.0
    scale = 1.0
    for k in range(5):
        acc = 0.0
        for j in range(RS_TABLE.shape[1] - 1, -1, -1):
            acc = acc * w + RS_TABLE[k, j]
        if RS_ODD[k]:
            acc *= z
        total += acc * scale
        scale *= inv
    sign = 1.0 if n_top % 2 == 1 else -1.0
    return 2.0 * s + sign * total / math.sqrt(a)


@njit(**_JIT)
def _z_em(t, lh, ll, lhh, lhl, rsq, buf):
    n_cut = int(t / math.pi) + 20
    th, tl, ts = _theta_turns(t)
    s = _main_sum(t, n_cut - 1, th, tl, ts, lh, ll, lhh, lhl, rsq, buf)
    big_n = float(n_cut)
    ang = _phase(t, th, tl, ts, lh[n_cut], ll[n_cut])
    e = complex(math.cos(ang), math.sin(ang)) / math.sqrt(big_n)
    sv = complex(0.5, t)
    inv_n2 = 1.0 / (big_n * big_n)
    q = sv / big_n
    acc = EM_WEIGHTS[0] * q
    for k in range(1, EM_TERMS):
        q = q * (sv + (2 * k - 1)) * (sv + 2 * k) * inv_n2
        acc += EM_WEIGHTS[k] * q
    tail = e * (big_n / (sv - 1.0) + 0.5 + acc)
    return s + tail.real


@njit(**_JIT)
def z_scalar(t, lh, ll, lhh, lhl, rsq, buf):
    if t >= RS_CROSSOVER:
        return _z_rs(t, lh, ll, lhh, lhl, rsq, buf)
    return _z_em(t, lh, ll, lhh, lhl, rsq, buf)


@njit(parallel=True, **_JIT)
def _hardy_z_array(t, lh, ll, lhh, lhl, rsq):
    out = np.empty(t.size)
    for i in prange(t.size):
        buf = np.empty(lh.size)
        out[i] = z_scalar(t[i], lh, ll, lhh, lhl, rsq, buf)
    return out


@njit(parallel=True, **_JIT)
def _gl_panels(lo, hi, x16, w16, x8, w8, lh, ll, lhh, lhl, rsq):
    m = lo.size
    g16 = np.empty(m)
    g8 = np.empty(m)
    for i in prange(m):
        buf = np.empty(lh.size)
        mid = 0.5 * (lo[i] + hi[i])
        half = 0.5 * (hi[i] - lo[i])
        acc = 0.0
        for j in range(x16.size):
            z = z_scalar(mid + half * x16[j], lh, ll, lhh, lhl, rsq, buf)
            acc += w16[j] * (z * z)
        g16[i] = half * acc
        acc = 0.0
        for j in range(x8.size):
            z = z_scalar(mid + half * x8[j], lh, ll, lhh, lhl, rsq, buf)
            acc += w8[j] * (z * z)
        g8[i] = half * acc
    return g16, g8


_derived = {}


def _tables_for(tmax):
    """Log table plus its Dekker split and 1/sqrt(n), cached per table size."""
    nmax = max(int(math.sqrt(tmax / TWO_PI)), int(min(tmax, RS_CROSSOVER) / math.pi) + 20)
    lh, ll = LOG_TURNS.ensure(nmax + 2)
    key = id(lh)
    extra = _derived.get(key)
    if extra is None:
        u = _SPLIT * lh
        lhh = u - (u - lh)
        n = np.arange(lh.size, dtype=np.float64)
        n[0] = 1.0
        extra = (lh, ll, lhh, lh - lhh, 1.0 / np.sqrt(n))
        _derived.clear()
        _derived[key] = extra
    return extra


def hardy_z(t):
    t = np.ascontiguousarray(np.atleast_1d(t), dtype=np.float64)
    if t.size == 0:
        return t.copy()
    return _hardy_z_array(t, *_tables_for(float(t.max())))


def zeta_sq(t):
    z = hardy_z(t)
    return z * z


def theta(t):
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return np.array([theta_scalar(v) for v in t])


def gl_panels(lo, hi, x16, w16, x8, w8):
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    hi = np.ascontiguousarray(hi, dtype=np.float64)
    if lo.size == 0:
        return np.zeros(0), np.zeros(0)
    return _gl_panels(lo, hi, x16, w16, x8, w8, *_tables_for(float(hi.max())))
