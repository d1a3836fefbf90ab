"""Hot numeric kernels for observation abstraction.

Each kernel is written as a plain-loop function so it can be compiled
with numba when available.  Set HEXSTRAT_NO_NUMBA=1 to force the
uncompiled pure-Python/numpy path (same functions, no jit); the
benchmark in benchmarks/bench_kernels.py compares both.
"""

from __future__ import annotations

import math
import os

import numpy as np

ROW_PITCH = math.sqrt(3.0) / 2.0


def numba_enabled() -> bool:
    if os.environ.get("HEXSTRAT_NO_NUMBA", "").strip().lower() in ("1", "true", "yes"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _maybe_jit(fn):
    if not numba_enabled():
        return fn
    from numba import njit

    return njit(cache=True)(fn)


def decay_weight(d: float, n_d: float, m_d: float, f_d: float, w_min: float) -> float:
    """Piecewise-linear distance decay: 1 inside n_d, down to 0.1 at m_d,
    down to w_min at f_d, flat w_min beyond."""
    if d <= n_d:
        return 1.0
    if d < m_d:
        return 1.0 - 0.9 * (d - n_d) / (m_d - n_d)
    if d < f_d:
        return 0.1 - (0.1 - w_min) * (d - m_d) / (f_d - m_d)
    return w_min


def localized_kernel(
    src,  # (C, R, Cols) float64
    crow: int,
    ccol: int,
    perim_rows,  # (24,) int64: sector k -> output row
    perim_cols,  # (24,) int64: sector k -> output col
    n_d: float,
    m_d: float,
    f_d: float,
    w_min: float,
):
    """7x7 localized abstraction: verbatim inner 5x5 crop around (crow, ccol)
    plus 24 perimeter cells accumulating decay-weighted sector sums,
    clamped at 1.0.  Constant-fill channels are the caller's business."""
    n_ch, n_rows, n_cols = src.shape
    out = np.zeros((n_ch, 7, 7))
    two_pi = 2.0 * math.pi
    sector_step = two_pi / 24.0
    c_parity = 0.5 * (crow & 1)
    for r in range(n_rows):
        dr = r - crow
        # offsets from integer differences so translation is exact in fp
        dy_row = -dr * ROW_PITCH  # north positive
        x_shift = 0.5 * (r & 1) - c_parity
        for c in range(n_cols):
            dc = c - ccol
            if -2 <= dr <= 2 and -2 <= dc <= 2:
                for ch in range(n_ch):
                    out[ch, 3 + dr, 3 + dc] = src[ch, r, c]
                continue
            dx = dc + x_shift
            d = math.sqrt(dx * dx + dy_row * dy_row)
            w = decay_weight(d, n_d, m_d, f_d, w_min)
            angle = math.atan2(dy_row, dx)
            if angle < 0.0:
                angle += two_pi
            k = int(angle / sector_step)
            if k >= 24:
                k = 0
            pr = perim_rows[k]
            pc = perim_cols[k]
            for ch in range(n_ch):
                v = src[ch, r, c]
                if v != 0.0:
                    out[ch, pr, pc] += v * w
    # clamp perimeter cells at 1.0
    for ch in range(n_ch):
        for i in range(7):
            for j in range(7):
                if (i == 0 or i == 6 or j == 0 or j == 6) and out[ch, i, j] > 1.0:
                    out[ch, i, j] = 1.0
    return out


def coarse_proportional_kernel(src, out_rows: int, out_cols: int):
    """Mass-conserving grid reduction: each input cell's value split among
    output cells in proportion to overlap area (cells as unit squares)."""
    n_ch, n_rows, n_cols = src.shape
    out = np.zeros((n_ch, out_rows, out_cols))
    sy = out_rows / n_rows
    sx = out_cols / n_cols
    for r in range(n_rows):
        y0 = r * sy
        y1 = y0 + sy
        j0 = int(y0)
        j1 = min(int(math.ceil(y1)), out_rows)
        for c in range(n_cols):
            x0 = c * sx
            x1 = x0 + sx
            k0 = int(x0)
            k1 = min(int(math.ceil(x1)), out_cols)
            for j in range(j0, j1):
                oy = min(y1, j + 1.0) - max(y0, float(j))
                if oy <= 0.0:
                    continue
                for k in range(k0, k1):
                    ox = min(x1, k + 1.0) - max(x0, float(k))
                    if ox <= 0.0:
                        continue
                    frac = (oy * ox) / (sy * sx)
                    for ch in range(n_ch):
                        out[ch, j, k] += src[ch, r, c] * frac
    return out


def coarse_nearest_kernel(src, out_rows: int, out_cols: int):
    """Whole-value grid reduction: each input cell's full value goes to the
    output cell whose center is nearest (ties to the lower index)."""
    n_ch, n_rows, n_cols = src.shape
    out = np.zeros((n_ch, out_rows, out_cols))
    for r in range(n_rows):
        oy = (r + 0.5) * out_rows / n_rows
        bj = 0
        bd = abs(oy - 0.5)
        for j in range(1, out_rows):
            d = abs(oy - (j + 0.5))
            if d < bd:
                bd = d
                bj = j
        for c in range(n_cols):
            ox = (c + 0.5) * out_cols / n_cols
            bk = 0
            bdx = abs(ox - 0.5)
            for k in range(1, out_cols):
                d = abs(ox - (k + 0.5))
                if d < bdx:
                    bdx = d
                    bk = k
            for ch in range(n_ch):
                out[ch, bj, bk] += src[ch, r, c]
    return out


decay_weight = _maybe_jit(decay_weight)
localized_kernel = _maybe_jit(localized_kernel)
coarse_proportional_kernel = _maybe_jit(coarse_proportional_kernel)
coarse_nearest_kernel = _maybe_jit(coarse_nearest_kernel)
