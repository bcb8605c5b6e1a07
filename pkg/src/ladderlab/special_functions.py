"""Scalar kernels on the critical line: theta, Z, |zeta|^2, ln Gamma, pi(x).

All functions accept scalars or arrays and return the same shape.
"""
from dataclasses import dataclass
import math
import threading

import numpy as np

from . import kernels
from .errors import DomainError
from .kernels import numpy_kernels

EULER_C = 0.577215664901533
LN_TWO_PI = 1.837877066409345


@dataclass(frozen=True)
class Constants:
    euler_c: float = EULER_C
    ln_two_pi: float = LN_TWO_PI

    @property
    def ln_sqrt_two_pi(self):
        return self.ln_two_pi / 2

    @property
    def one_minus_c(self):
        return 1.0 - self.euler_c

    @property
    def raabe_slope(self):
        """ln 2pi - 1 - c, the rectangle height in the increment decomposition."""
        return self.ln_two_pi - 1.0 - self.euler_c

    def as_dict(self):
        return {
            "c": self.euler_c,
            "ln_two_pi": self.ln_two_pi,
            "ln_sqrt_two_pi": self.ln_sqrt_two_pi,
            "one_minus_c": self.one_minus_c,
        }


CONSTANTS = Constants()
LN_SQRT_TWO_PI = CONSTANTS.ln_sqrt_two_pi

PRIME_COUNT_MAX = 10**8


def _as_array(x):
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr.ndim == 0


def _finish(out, scalar):
    return float(out[0]) if scalar else out


def riemann_siegel_theta(t):
    """theta(t) for t >= 1.

    Asymptotic series (through t^-13) from t = 10 on, the exact
    Im lnGamma(1/4 + it/2) - (t/2) ln pi below that.
    """
    arr, scalar = _as_array(t)
    if not np.all(np.isfinite(arr)) or np.any(arr < 1.0):
        raise DomainError("riemann_siegel_theta requires finite t >= 1")
    return _finish(kernels.theta(np.atleast_1d(arr)), scalar)


def hardy_z(t):
    """Hardy's Z(t), real with |Z(t)| = |zeta(1/2 + it)|.

    Riemann-Siegel with C0..C4 corrections for t >= 2000; Euler-Maclaurin
    continuation below.
    """
    arr, scalar = _as_array(t)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError("hardy_z requires finite t >= 0")
    return _finish(kernels.hardy_z(np.atleast_1d(arr)), scalar)


def zeta_sq_modulus(t):
    """|zeta(1/2 + it)|^2 = Z(t)^2."""
    z = hardy_z(t)
    return z * z


def ln_gamma(x):
    """log Gamma(x) for real x > 0."""
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("ln_gamma requires finite x > 0")
    return _finish(numpy_kernels.ln_gamma(np.atleast_1d(arr)), scalar)


class _SmallPrimes:
    """Primes up to sqrt(PRIME_COUNT_MAX), built once on first use."""

    _lock = threading.Lock()
    _primes = None

    @classmethod
    def get(cls):
        if cls._primes is None:
            with cls._lock:
                if cls._primes is None:
                    limit = math.isqrt(PRIME_COUNT_MAX) + 1
                    sieve = np.ones(limit + 1, dtype=bool)
                    sieve[:2] = False
                    for p in range(2, math.isqrt(limit) + 1):
                        if sieve[p]:
                            sieve[p * p::p] = False
                    primes = np.flatnonzero(sieve)
                    primes.setflags(write=False)
                    cls._primes = primes
        return cls._primes


def prime_count(x, segment=1 << 20):
    """Exact pi(x) for 2 <= x <= 1e8 by an odd-only segmented sieve."""
    if not math.isfinite(x) or x < 2:
        raise DomainError("prime_count requires x >= 2")
    if x > PRIME_COUNT_MAX:
        raise DomainError(
            f"prime_count is exact only up to {PRIME_COUNT_MAX:.0e}; "
            "use the T/ln T asymptotic for larger heights")
    n = int(math.floor(x))
    base = _SmallPrimes.get()
    base = base[base.astype(np.int64) ** 2 <= n]
    count = 1  # the prime 2
    low = 3
    span = 2 * segment
    while low <= n:
        high = min(low + span, n + 1)
        mask = np.ones((high - low + 1) // 2, dtype=bool)
        for p in base[1:]:
            p = int(p)
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < high:
                mask[(start - low) // 2::p] = False
        count += int(np.count_nonzero(mask))
        low = high if high % 2 == 1 else high + 1
    return count
