"""Safeguarded Newton iteration for increasing functions on a bracket."""
import math

from .errors import BracketError, PrecisionUnreachable


def solve_increasing(f, fprime, lo, hi, f_lo=None, f_hi=None, ftol=0.0,
                     maxiter=200):
    """Root of an increasing ``f`` on ``[lo, hi]``.

    Newton steps are taken when they stay strictly inside the current
    bracket; otherwise a secant step on the bracket ends, and bisection if
    that also fails to shrink the bracket fast enough. Stops when
    ``|f(x)| <= ftol`` or the bracket collapses to a few ulps.
    """
    if f_lo is None:
        f_lo = f(lo)
    if f_hi is None:
        f_hi = f(hi)
    if f_lo > 0 or f_hi < 0:
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]")
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi

    x = lo - f_lo * (hi - lo) / (f_hi - f_lo)
    if not lo < x < hi:
        x = 0.5 * (lo + hi)
    last_width = hi - lo
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0 or abs(fx) <= ftol:
            return x
        if fx < 0:
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx
        if hi - lo <= 4 * math.ulp(max(abs(lo), abs(hi))):
            return lo if -f_lo < f_hi else hi

        width = hi - lo
        d = fprime(x)
        x_new = x - fx / d if d > 0 else math.nan
        if not lo < x_new < hi:
            x_new = lo - f_lo * (hi - lo) / (f_hi - f_lo)
            # fall back to bisection when the secant stalls on one side
            if not lo < x_new < hi or width > 0.5 * last_width:
                x_new = 0.5 * (lo + hi)
        last_width = width
        x = x_new
    raise PrecisionUnreachable(f"root not converged after {maxiter} iterations")
