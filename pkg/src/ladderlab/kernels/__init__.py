"""Hot numeric kernels with a selectable backend.

``LADDERLAB_BACKEND=numba`` (default) uses the JIT-compiled loops in
:mod:`numba_kernels`; ``LADDERLAB_BACKEND=numpy`` uses the vectorised fallback
in :mod:`numpy_kernels`. If numba cannot be imported the numpy path is used.
"""
import importlib
import logging
import os

import numpy as np

log = logging.getLogger(__name__)

BACKENDS = ("numba", "numpy")

# Gauss-Legendre rules used per quadrature panel
X16, W16 = np.polynomial.legendre.leggauss(16)
X8, W8 = np.polynomial.legendre.leggauss(8)


def load_backend(name):
    if name not in BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; expected one of {BACKENDS}")
    return importlib.import_module(f"{__name__}.{name}_kernels")


def _select():
    name = os.environ.get("LADDERLAB_BACKEND", "numba").strip().lower() or "numba"
    try:
        return name, load_backend(name)
    except ImportError as exc:
        if name != "numba":
            raise
        log.warning("numba unavailable (%s); falling back to numpy kernels", exc)
        return "numpy", load_backend("numpy")


BACKEND, _impl = _select()


def set_threads(n):
    """Cap worker threads for the numba backend (no-op for numpy)."""
    if BACKEND == "numba" and n:
        import numba
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def hardy_z(t):
    return _impl.hardy_z(np.asarray(t, dtype=np.float64))


def zeta_sq(t):
    return _impl.zeta_sq(np.asarray(t, dtype=np.float64))


def theta(t):
    return _impl.theta(np.asarray(t, dtype=np.float64))


def gl_panels(lo, hi):
    """(order-16, order-8) Gauss-Legendre integrals of Z^2 over each [lo, hi]."""
    return _impl.gl_panels(lo, hi, X16, W16, X8, W8)
