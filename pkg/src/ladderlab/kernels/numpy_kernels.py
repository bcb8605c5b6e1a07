"""Pure-numpy kernels.

Vectorised over arrays of heights. Phases t*ln(n) and theta(t) are carried in
double-double arithmetic and reduced modulo one turn before the cosine is
taken; at t ~ 1e5 a plain double phase already loses ~1e-10 per term.
"""
import numpy as np

from ._consts import (
    EM_TERMS, EM_WEIGHTS, INV_2PI_H, INV_2PI_L, LANCZOS, LANCZOS_G,
    LN2_H, LN2_L, LN_2PI_H, LN_2PI_L, LN_SQRT_2PI, LOG_TURNS, RS_CROSSOVER,
    RS_ODD, RS_TABLE, SQRT_HALF, STIRLING, THETA_EXACT_BELOW, THETA_TAIL,
    TWO_PI,
)

_SPLIT = 134217729.0  # 2**27 + 1
_CHUNK = 1 << 18  # max elements of a (heights x terms) work array

# -- double-double helpers --------------------------------------------------


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    return fast_two_sum(s, e + (al + bl))


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    return fast_two_sum(p, e + (ah * bl + al * bh))


def ln_dd(t):
    """Natural log of positive doubles as a double-double pair."""
    m, e = np.frexp(t)
    small = m < SQRT_HALF
    m = np.where(small, 2.0 * m, m)
    e = np.where(small, e - 1, e).astype(np.float64)
    num = m - 1.0
    dh, dl = two_sum(m, 1.0)
    sh = num / dh
    p, pe = two_prod(sh, dh)
    sl = (((num - p) - pe) - sh * dl) / dh
    s2 = sh * sh
    poly = 1.0 / 27.0
    for k in range(25, 1, -2):
        poly = 1.0 / k + s2 * poly
    h, l = two_sum(2.0 * sh, 2.0 * sh * s2 * poly)
    h, l = fast_two_sum(h, l + 2.0 * sl)
    p, pe = two_prod(e, LN2_H)
    return dd_add(p, pe + e * LN2_L, h, l)


# -- log gamma ---------------------------------------------------------------


def ln_gamma(x):
    """Real log-gamma for x > 0 (Lanczos below 10, Stirling above)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    big = x >= 10.0
    if big.any():
        xb = x[big]
        inv = 1.0 / xb
        inv2 = inv * inv
        ser = STIRLING[-1]
        for c in STIRLING[-2::-1]:
            ser = c + inv2 * ser
        out[big] = (xb - 0.5) * np.log(xb) - xb + LN_SQRT_2PI + ser * inv
    low = ~big
    if low.any():
        xl = x[low]
        tiny = xl < 0.5
        shift = np.where(tiny, 1.0, 0.0)
        z = xl + shift - 1.0
        acc = np.full_like(z, LANCZOS[0])
        for i in range(1, len(LANCZOS)):
            acc = acc + LANCZOS[i] / (z + i)
        tt = z + LANCZOS_G + 0.5
        val = LN_SQRT_2PI + (z + 0.5) * np.log(tt) - tt + np.log(acc)
        out[low] = np.where(tiny, val - np.log(np.where(tiny, xl, 1.0)), val)
    return out


def _complex_ln_gamma(z):
    w = z + 10.0
    acc = np.zeros_like(z)
    for j in range(10):
        acc = acc + np.log(z + j)
    inv = 1.0 / w
    inv2 = inv * inv
    ser = STIRLING[-1] + 0j
    for c in STIRLING[-2::-1]:
        ser = c + inv2 * ser
    return (w - 0.5) * np.log(w) - w + LN_SQRT_2PI + ser * inv - acc


# -- theta -------------------------------------------------------------------


def theta_exact(t):
    """theta(t) = Im lnGamma(1/4 + it/2) - (t/2) ln(pi); valid for all t >= 0."""
    t = np.asarray(t, dtype=np.float64)
    return _complex_ln_gamma(0.25 + 0.5j * t).imag - 0.5 * t * (LN_2PI_H - LN2_H)


def _theta_tail(t):
    inv = 1.0 / t
    inv2 = inv * inv
    ser = THETA_TAIL[-1]
    for c in THETA_TAIL[-2::-1]:
        ser = c + inv2 * ser
    return ser * inv


def theta_turns(t):
    """theta(t)/(2 pi) as (hi, lo, small) with value hi + lo + small."""
    t = np.asarray(t, dtype=np.float64)
    hi = np.zeros_like(t)
    lo = np.zeros_like(t)
    small = np.zeros_like(t)
    exact = t < THETA_EXACT_BELOW
    if exact.any():
        hi[exact] = theta_exact(t[exact]) / TWO_PI
    asym = ~exact
    if asym.any():
        ta = t[asym]
        lh, ll = ln_dd(ta)
        ah, al = dd_add(lh, ll, -LN_2PI_H, -LN_2PI_L)
        ah, al = dd_add(ah, al, -1.0, 0.0)
        half = 0.5 * ta
        bh, bl = two_prod(ah, half)
        bh, bl = fast_two_sum(bh, bl + al * half)
        ch, cl = dd_mul(bh, bl, INV_2PI_H, INV_2PI_L)
        hi[asym] = ch
        lo[asym] = cl
        small[asym] = -0.0625 + _theta_tail(ta) / TWO_PI
    return hi, lo, small


def theta(t):
    hi, lo, small = theta_turns(t)
    return TWO_PI * (hi + (lo + small))


# -- Z(t) --------------------------------------------------------------------


def _phase_cos(t, th, tl, ts, n, lh, ll):
    """cos(theta(t) - t ln n) for broadcast t (column) against n (row)."""
    ph, pl = two_prod(t, lh[n])
    pl = pl + t * ll[n]
    xh, xl = dd_add(th, tl, -ph, -pl)
    frac = (xh - np.floor(xh)) + (xl + ts)
    return np.cos(TWO_PI * frac)


def _rs_remainder(a, n_top):
    p = a - n_top
    z = p - 0.5
    w = z * z
    inv = 1.0 / a
    total = np.zeros_like(a)
    scale = np.ones_like(a)
    for k in range(5):
        row = RS_TABLE[k]
        acc = np.zeros_like(a)
        for c in row[::-1]:
            acc = acc * w + c
        if RS_ODD[k]:
            acc = acc * z
        total = total + acc * scale
        scale = scale * inv
    sign = np.where(n_top.astype(np.int64) % 2 == 1, 1.0, -1.0)
    return sign * total / np.sqrt(a)


def _z_rs(t):
    a = np.sqrt(t / TWO_PI)
    n_top = np.floor(a)
    nmax = int(n_top.max())
    lh, ll = LOG_TURNS.ensure(nmax + 1)
    th, tl, ts = theta_turns(t)
    out = np.empty_like(t)
    rows = max(1, _CHUNK // nmax)
    n = np.arange(1, nmax + 1)
    inv_sqrt = 1.0 / np.sqrt(n)
    for i in range(0, t.size, rows):
        sl = slice(i, i + rows)
        tc = t[sl][:, None]
        c = _phase_cos(tc, th[sl][:, None], tl[sl][:, None], ts[sl][:, None], n, lh, ll)
        mask = n[None, :] <= n_top[sl][:, None]
        out[sl] = 2.0 * np.sum(np.where(mask, c * inv_sqrt, 0.0), axis=1)
    return out + _rs_remainder(a, n_top)


def em_terms(t):
    """Number of explicit Euler-Maclaurin terms used at height t."""
    return (np.asarray(t) / np.pi).astype(np.int64) + 20


def _z_em(t):
    n_cut = em_terms(t)
    nmax = int(n_cut.max())
    lh, ll = LOG_TURNS.ensure(nmax + 1)
    th, tl, ts = theta_turns(t)
    out = np.empty_like(t)
    rows = max(1, _CHUNK // nmax)
    n = np.arange(1, nmax + 1)
    inv_sqrt = 1.0 / np.sqrt(n)
    for i in range(0, t.size, rows):
        sl = slice(i, i + rows)
        tc = t[sl][:, None]
        c = _phase_cos(tc, th[sl][:, None], tl[sl][:, None], ts[sl][:, None], n, lh, ll)
        mask = n[None, :] < n_cut[sl][:, None]
        out[sl] = np.sum(np.where(mask, c * inv_sqrt, 0.0), axis=1)
    # tail: e^{i theta} [N^{1-s}/(s-1) + N^{-s}/2 + sum_k B2k/(2k)! s..(s+2k-2) N^{-s-2k+1}]
    big_n = n_cut.astype(np.float64)
    ph, pl = two_prod(t, lh[n_cut])
    pl = pl + t * ll[n_cut]
    xh, xl = dd_add(th, tl, -ph, -pl)
    ang = TWO_PI * ((xh - np.floor(xh)) + (xl + ts))
    e = (np.cos(ang) + 1j * np.sin(ang)) / np.sqrt(big_n)
    s = 0.5 + 1j * t
    inv_n2 = 1.0 / (big_n * big_n)
    q = s / big_n
    acc = EM_WEIGHTS[0] * q
    for k in range(1, EM_TERMS):
        q = q * (s + (2 * k - 1)) * (s + 2 * k) * inv_n2
        acc = acc + EM_WEIGHTS[k] * q
    tail = e * (big_n / (s - 1.0) + 0.5 + acc)
    return out + tail.real


def hardy_z(t):
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.empty_like(t)
    rs = t >= RS_CROSSOVER
    if rs.any():
        out[rs] = _z_rs(t[rs])
    if (~rs).any():
        out[~rs] = _z_em(t[~rs])
    return out


def zeta_sq(t):
    z = hardy_z(t)
    return z * z


def gl_panels(lo, hi, x16, w16, x8, w8):
    """Order-16 and order-8 Gauss-Legendre integrals of Z^2 on each panel."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = np.concatenate([mid[:, None] + half[:, None] * x16[None, :],
                            mid[:, None] + half[:, None] * x8[None, :]], axis=1)
    f = zeta_sq(nodes.ravel()).reshape(nodes.shape)
    g16 = half * (f[:, :16] @ w16)
    g8 = half * (f[:, 16:] @ w8)
    return g16, g8
