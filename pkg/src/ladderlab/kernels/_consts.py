"""Tables shared by both kernel backends.

Everything here is computed once at import from exact rationals or
high-precision decimals, so the numba and numpy paths see identical inputs.
"""
from decimal import Decimal, localcontext
from fractions import Fraction
import math
import threading

import numpy as np

from ._rs_coeffs import RS_COEFFS

# double-double splits of constants: value = hi + lo
LN2_H, LN2_L = 0.6931471805599453, 2.3190468138462996e-17
LN_2PI_H, LN_2PI_L = 1.8378770664093456, -7.756588316134483e-17
INV_2PI_H, INV_2PI_L = 0.15915494309189535, -9.839338337591243e-18
TWO_PI = 6.283185307179586
SQRT_HALF = 0.7071067811865476
LN_SQRT_2PI = 0.9189385332046728

_PI_DECIMAL = Decimal(
    "3.14159265358979323846264338327950288419716939937510582097494459")


def bernoulli_numbers(n):
    """B_0..B_n as Fractions (Akiyama-Tanigawa), with B_1 = +1/2."""
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


_B = bernoulli_numbers(44)

# theta(t) asymptotic tail: sum_k (1 - 2^(1-2k)) |B_2k| / (4k (2k-1)) t^(1-2k)
THETA_TAIL = np.array([
    float((1 - Fraction(1, 2 ** (2 * k - 1))) * abs(_B[2 * k]) / (4 * k * (2 * k - 1)))
    for k in range(1, 8)
])

# Euler-Maclaurin weights B_2k / (2k)!
EM_TERMS = 20
EM_WEIGHTS = np.array([float(_B[2 * k] / math.factorial(2 * k))
                       for k in range(1, EM_TERMS + 1)])

# Stirling series for real ln Gamma: B_2k / (2k (2k-1))
STIRLING = np.array([float(_B[2 * k] / (2 * k * (2 * k - 1))) for k in range(1, 10)])

# Lanczos g = 7, n = 9
LANCZOS_G = 7.0
LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


def _split_parity(poly):
    """Coefficients of C(z) = sum c_j z^j as a polynomial in w = z^2.

    Even C_k have only even powers; odd ones are stored as z * q(w).
    """
    poly = list(poly)
    if any(poly[j] != 0.0 for j in range(1, len(poly), 2)):
        return np.array(poly[1::2]), 1
    return np.array(poly[0::2]), 0


_RS = [_split_parity(c) for c in RS_COEFFS]
RS_DEG = max(len(c) for c, _ in _RS)
# rows of zero-padded coefficient arrays (highest degree unused tails are 0)
RS_TABLE = np.zeros((5, RS_DEG))
RS_ODD = np.zeros(5, dtype=np.int64)
for _k, (_c, _odd) in enumerate(_RS):
    RS_TABLE[_k, :len(_c)] = _c
    RS_ODD[_k] = _odd

# t below which Z is evaluated by Euler-Maclaurin rather than Riemann-Siegel
RS_CROSSOVER = 2000.0
THETA_EXACT_BELOW = 10.0


class _LogTable:
    """ln(n)/(2 pi) for n = 0..size-1 as double-double (hi, lo) arrays."""

    def __init__(self):
        self._lock = threading.Lock()
        self._tables = (np.zeros(1), np.zeros(1))

    def ensure(self, nmax):
        tables = self._tables
        if nmax < len(tables[0]):
            return tables
        with self._lock:
            hi_old, lo_old = self._tables
            size = len(hi_old)
            if nmax >= size:
                new = max(nmax + 1, 2 * size, 4096)
                hi = np.zeros(new)
                lo = np.zeros(new)
                hi[:size] = hi_old
                lo[:size] = lo_old
                with localcontext() as ctx:
                    ctx.prec = 45
                    two_pi = 2 * _PI_DECIMAL
                    for n in range(max(size, 2), new):
                        v = Decimal(n).ln() / two_pi
                        h = float(v)
                        hi[n] = h
                        lo[n] = float(v - Decimal(h))
                self._tables = (hi, lo)
            return self._tables


LOG_TURNS = _LogTable()
