"""Integrals of |zeta(1/2+it)|^2 and the checkpointed Hardy-Littlewood integral.

Intervals are cut into Gauss-Legendre panels whose layout depends only on the
endpoints: the line is split at multiples of ``BLOCK`` and each block gets
equal panels no wider than the local zero-gap bound. Each panel carries an
order-16 value and an order-8 estimate; panels whose difference exceeds their
share of the tolerance are halved. Accepted panel values are summed with
``math.fsum``, which is exact-rounded and therefore independent of the order
(and the thread) in which panels were evaluated.
"""
from collections import OrderedDict
from dataclasses import dataclass
import math
import os
import tempfile
import threading

import numpy as np

from . import kernels
from .errors import CheckpointError, DomainError, ParameterError, PrecisionUnreachable
from .special_functions import CONSTANTS

BLOCK = 1000.0
CHECKPOINT_SPACING = 1000.0
DEFAULT_TOL = 1e-8
DEFAULT_MAX_EVALS = 10**8
MAX_HALVINGS = 40
EVALS_PER_PANEL = 24  # 16 + 8 nodes


@dataclass(frozen=True)
class IntegralResult:
    value: float
    err_bound: float
    panels: int


def max_panel_width(t):
    """Half the mean zero gap 2 pi / ln(t / 2 pi), capped at 1."""
    t = np.asarray(t, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        gap = 2 * math.pi / np.log(np.maximum(t, 1.0) / (2 * math.pi))
    return np.where(t > 2 * math.pi * math.e, np.minimum(1.0, 0.5 * gap), 1.0)


def _layout(a, b):
    """Initial panel edges for [a, b] as (lo, hi) arrays."""
    cuts = [a]
    k = math.floor(a / BLOCK) + 1
    while k * BLOCK < b:
        cuts.append(k * BLOCK)
        k += 1
    cuts.append(b)
    los, his = [], []
    for u, v in zip(cuts[:-1], cuts[1:]):
        # width bound is decreasing in t, so the right end is the binding one
        n = max(1, math.ceil((v - u) / float(max_panel_width(v))))
        edges = np.linspace(u, v, n + 1)
        edges[-1] = v
        los.append(edges[:-1])
        his.append(edges[1:])
    return np.concatenate(los), np.concatenate(his)


def _check_tol(tol):
    if not (tol > 0 and math.isfinite(tol)):
        raise ParameterError("tol must be positive and finite")


def integrate_segments(edges, tol=DEFAULT_TOL, max_evals=DEFAULT_MAX_EVALS):
    """Integrals of Z^2 over consecutive intervals [edges[i], edges[i+1]].

    All segments are processed in one batch of kernel calls. Returns a list of
    :class:`IntegralResult`, one per segment.
    """
    _check_tol(tol)
    edges = np.asarray(edges, dtype=np.float64)
    if edges.ndim != 1 or edges.size < 2:
        raise ParameterError("need at least two edges")
    if np.any(np.diff(edges) < 0) or edges[0] < 0 or not np.all(np.isfinite(edges)):
        raise DomainError("edges must be finite, nonnegative and nondecreasing")

    n_seg = edges.size - 1
    lo_parts, hi_parts, id_parts = [], [], []
    for i in range(n_seg):
        a, b = float(edges[i]), float(edges[i + 1])
        if b > a:
            lo, hi = _layout(a, b)
            lo_parts.append(lo)
            hi_parts.append(hi)
            id_parts.append(np.full(lo.size, i, dtype=np.int64))
    if not lo_parts:
        return [IntegralResult(0.0, 0.0, 0) for _ in range(n_seg)]
    lo = np.concatenate(lo_parts)
    hi = np.concatenate(hi_parts)
    seg = np.concatenate(id_parts)

    length = np.diff(edges)
    # each panel may spend its share of tol * max(1, L) proportional to width
    density = tol * np.maximum(1.0, length) / np.where(length > 0, length, 1.0)

    acc_vals = [[] for _ in range(n_seg)]
    acc_errs = [[] for _ in range(n_seg)]
    acc_count = np.zeros(n_seg, dtype=np.int64)
    evals = 0
    for _ in range(MAX_HALVINGS + 1):
        evals += EVALS_PER_PANEL * lo.size
        if evals > max_evals:
            raise PrecisionUnreachable(
                f"evaluation budget {max_evals:.3g} exhausted before reaching tol={tol:g}")
        g16, g8 = kernels.gl_panels(lo, hi)
        err = np.abs(g16 - g8)
        ok = err <= density[seg] * (hi - lo)
        for i, v, e in zip(seg[ok], g16[ok], err[ok]):
            acc_vals[i].append(v)
            acc_errs[i].append(e)
        acc_count += np.bincount(seg[ok], minlength=n_seg)
        if ok.all():
            break
        bad = ~ok
        lo_b, hi_b, seg_b = lo[bad], hi[bad], seg[bad]
        mid = 0.5 * (lo_b + hi_b)
        lo = np.concatenate([lo_b, mid])
        hi = np.concatenate([mid, hi_b])
        seg = np.concatenate([seg_b, seg_b])
    else:
        raise PrecisionUnreachable(f"panel halving limit reached at tol={tol:g}")

    return [IntegralResult(math.fsum(acc_vals[i]), math.fsum(acc_errs[i]), int(acc_count[i]))
            for i in range(n_seg)]


def integrate_zeta_sq(a, b, tol=DEFAULT_TOL, max_evals=DEFAULT_MAX_EVALS):
    """Adaptive Gauss-Legendre integral of |zeta(1/2+it)|^2 over [a, b].

    ``err_bound`` is the summed |G16 - G8| of accepted panels and never exceeds
    ``tol * max(1, b - a)``.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or a < 0 or b < a:
        raise DomainError("integrate_zeta_sq requires 0 <= a <= b")
    _check_tol(tol)
    if a == b:
        return IntegralResult(0.0, 0.0, 0)
    return integrate_segments([a, b], tol, max_evals)[0]


def hli_reference(T):
    """Main term T ln T - (1 + ln 2pi - 2c) T of the Hardy-Littlewood integral."""
    T = float(T)
    if not T > 0:
        raise DomainError("hli_reference requires T > 0")
    k = 1.0 + CONSTANTS.ln_two_pi - 2.0 * CONSTANTS.euler_c
    return T * math.log(T) - k * T


# -- checkpoint table --------------------------------------------------------

_HEADER = "t,j,err"
_MEMO_SIZE = 4096


def _fmt(x):
    return format(x, ".17g")


class CheckpointTable:
    """Monotone grid of (t, J(t), err) values.

    Appends go through :meth:`extend_to`, serialized by a lock; readers
    see either the old or the new row list, never a partial row. If the table
    is backed by a file every new row is appended and flushed immediately.
    """

    def __init__(self, entries=(), source_tol=DEFAULT_TOL, path=None,
                 max_evals=DEFAULT_MAX_EVALS):
        _check_tol(source_tol)
        self.source_tol = float(source_tol)
        self.path = path
        self.max_evals = max_evals
        self._rows = tuple((float(t), float(j), float(e)) for t, j, e in entries)
        self._lock = threading.Lock()
        self._memo = OrderedDict()
        self.new_panels = 0
        validate_entries(self._rows)

    @property
    def entries(self):
        return list(self._rows)

    def __len__(self):
        return len(self._rows)

    def __eq__(self, other):
        if not isinstance(other, CheckpointTable):
            return NotImplemented
        return self._rows == other._rows and self.source_tol == other.source_tol

    def __repr__(self):
        return f"CheckpointTable({len(self._rows)} rows, source_tol={self.source_tol:g})"

    def _append_file(self, rows):
        if self.path is None or not rows:
            return
        fresh = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
        with open(self.path, "a", encoding="ascii") as fh:
            if fresh:
                fh.write(_HEADER + "\n")
            for t, j, e in rows:
                fh.write(f"{_fmt(t)},{_fmt(j)},{_fmt(e)}\n")
            fh.flush()
            os.fsync(fh.fileno())

    def extend_to(self, T):
        """Append checkpoints at multiples of the spacing up to T."""
        rows = self._rows
        if rows and rows[-1][0] + CHECKPOINT_SPACING > T:
            return
        with self._lock:
            rows = self._rows
            if not rows:
                rows = ((0.0, 0.0, 0.0),)
                self._append_file(rows)
                self._rows = rows
            while True:
                t0, j0, e0 = rows[-1]
                t1 = (math.floor(t0 / CHECKPOINT_SPACING) + 1) * CHECKPOINT_SPACING
                if t1 > T:
                    break
                res = integrate_zeta_sq(t0, t1, self.source_tol, self.max_evals)
                self.new_panels += res.panels
                row = (t1, j0 + res.value, e0 + res.err_bound)
                self._append_file([row])
                rows = rows + (row,)
                self._rows = rows

    def floor_row(self, T):
        """Largest checkpoint row with t <= T."""
        rows = self._rows
        lo, hi = 0, len(rows)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if rows[mid][0] <= T:
                lo = mid
            else:
                hi = mid
        return rows[lo]

    def remainder(self, t0, T, tol):
        key = (t0, T, tol)
        with self._lock:
            hit = self._memo.get(key)
            if hit is not None:
                self._memo.move_to_end(key)
                return hit
        res = integrate_zeta_sq(t0, T, tol, self.max_evals)
        with self._lock:
            self.new_panels += res.panels
            self._memo[key] = res
            if len(self._memo) > _MEMO_SIZE:
                self._memo.popitem(last=False)
        return res


def validate_entries(rows):
    prev = None
    for i, (t, j, e) in enumerate(rows):
        if not (math.isfinite(t) and math.isfinite(j) and math.isfinite(e)):
            raise CheckpointError(f"row {i}: non-finite value", row=i)
        if e < 0 or t < 0:
            raise CheckpointError(f"row {i}: negative t or err", row=i)
        if prev is not None:
            pt, pj, pe = prev
            if not t > pt:
                raise CheckpointError(f"row {i}: t not strictly increasing", row=i)
            if j < pj:
                raise CheckpointError(f"row {i}: j decreasing", row=i)
            if e < pe:
                raise CheckpointError(f"row {i}: err decreasing", row=i)
        prev = (t, j, e)


def save_checkpoints(table, path):
    """Write the table as CSV atomically (temporary file + rename)."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ckpt-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(_HEADER + "\n")
            for t, j, e in table.entries:
                fh.write(f"{_fmt(t)},{_fmt(j)},{_fmt(e)}\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_checkpoints(path, source_tol=DEFAULT_TOL, attach=False):
    """Read and validate a checkpoint CSV.

    With ``attach=True`` the returned table appends new rows to ``path``.
    """
    path = os.fspath(path)
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    rows = []
    if lines:
        if lines[0].strip() != _HEADER:
            raise CheckpointError(f"bad header {lines[0]!r}", row=None)
        for i, line in enumerate(lines[1:]):
            if not line.strip():
                continue
            parts = line.split(",")
            try:
                t, j, e = (float(p) for p in parts)
            except ValueError:
                raise CheckpointError(f"row {i}: malformed line {line!r}", row=i) from None
            rows.append((t, j, e))
    validate_entries(rows)
    return CheckpointTable(rows, source_tol, path=path if attach else None)


_registry = {}
_registry_lock = threading.Lock()


def default_table(tol=DEFAULT_TOL, directory=None):
    """Process-wide table for ``tol``.

    Persisted under ``directory``, else LADDERLAB_CHECKPOINT_DIR if set, else
    kept in memory only.
    """
    directory = directory or os.environ.get("LADDERLAB_CHECKPOINT_DIR")
    key = (directory, tol)
    with _registry_lock:
        table = _registry.get(key)
        if table is None:
            if directory:
                os.makedirs(directory, exist_ok=True)
                path = os.path.join(directory, f"jtable_tol{tol:g}.csv")
                if os.path.exists(path):
                    table = load_checkpoints(path, tol, attach=True)
                else:
                    table = CheckpointTable(source_tol=tol, path=path)
            else:
                table = CheckpointTable(source_tol=tol)
            _registry[key] = table
    return table


def j_integral(T, table=None, tol=DEFAULT_TOL):
    """J(T) = integral of |zeta(1/2+it)|^2 over [0, T].

    Uses the largest checkpoint <= T plus a (memoised) remainder integral, so
    J is a deterministic function of T for a given table.
    """
    T = float(T)
    if not math.isfinite(T) or T < 0:
        raise DomainError("j_integral requires finite T >= 0")
    if T == 0:
        return IntegralResult(0.0, 0.0, 0)
    if table is None:
        table = default_table(tol)
    table.extend_to(T)
    t0, j0, e0 = table.floor_row(T)
    if t0 == T:
        return IntegralResult(j0, e0, 0)
    rem = table.remainder(t0, T, tol)
    return IntegralResult(j0 + rem.value, e0 + rem.err_bound, rem.panels)


def j_at_sorted(points, table=None, tol=DEFAULT_TOL):
    """J at an ascending array of points.

    J at the first point is the checkpointed value; the rest accumulate
    integrals between neighbours in one batched call.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return pts.copy()
    if np.any(np.diff(pts) < 0):
        raise ParameterError("points must be ascending")
    first = j_integral(float(pts[0]), table, tol).value
    if pts.size == 1:
        return np.array([first])
    parts = integrate_segments(pts, tol)
    cum = np.concatenate([[0.0], np.cumsum([p.value for p in parts])])
    return first + cum
