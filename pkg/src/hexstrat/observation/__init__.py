"""Observation tensors and abstractions.

All tensors are channel-major numpy arrays with values in [0, 1].
The 18-channel global layout follows the fixed channel table below; the
17-channel manager/commander layout drops the legal-move channel and
repurposes channels 0 and 1 for the acting group and for other groups'
assigned areas.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ..engine import BLUE, RED, GameState, TERRAIN_URBAN
from ..hexgrid import AreaRect, HexCoord
from . import kernels

# 18-channel global layout
CH_ON_MOVE = 0
CH_CAN_MOVE = 1
CH_LEGAL = 2
CH_BLUE_HP = 3
CH_RED_HP = 4
CH_TYPE_INFANTRY = 5  # 5-8 unit-type one-hots; only infantry is implemented
CH_TERRAIN_CLEAR = 9  # 9-13 terrain one-hots
CH_TERRAIN_URBAN = 10
CH_CITY_BLUE = 14
CH_CITY_RED = 15
CH_PHASE = 16
CH_SCORE = 17
GLOBAL_CHANNELS = 18
GLOBAL_CONST_CHANNELS = (CH_PHASE, CH_SCORE)

# 17-channel manager/commander layout
MCH_GROUP = 0
MCH_OTHER_AREAS = 1
MCH_BLUE_HP = 2
MCH_RED_HP = 3
MCH_TYPE_INFANTRY = 4  # 4-7
MCH_TERRAIN_CLEAR = 8  # 8-12
MCH_TERRAIN_URBAN = 9
MCH_CITY_BLUE = 13
MCH_CITY_RED = 14
MCH_PHASE = 15
MCH_SCORE = 16
MANAGER_CHANNELS = 17
MANAGER_CONST_CHANNELS = (MCH_PHASE, MCH_SCORE)


@dataclass(frozen=True)
class DecayParams:
    n_d: float = 3.0
    m_d: float = 7.0
    f_d: float = 100.0
    w_min: float = 0.01

    def __post_init__(self):
        if not 0 < self.n_d < self.m_d < self.f_d:
            raise ValueError("need 0 < n_d < m_d < f_d")
        if not 0 < self.w_min < 0.1:
            raise ValueError("need 0 < w_min < 0.1")


def decay_weight(d: float, p: DecayParams = DecayParams()) -> float:
    if d < 0:
        raise ValueError("distance must be >= 0")
    return float(kernels.decay_weight(float(d), p.n_d, p.m_d, p.f_d, p.w_min))


def _perimeter_walk() -> list[tuple[int, int]]:
    # 24 boundary cells of the 7x7, counter-clockwise from the middle-right
    # cell (3,6); row 0 is north.
    cells = [(3, 6), (2, 6), (1, 6), (0, 6)]
    cells += [(0, c) for c in range(5, -1, -1)]
    cells += [(r, 0) for r in range(1, 7)]
    cells += [(6, c) for c in range(1, 7)]
    cells += [(5, 6), (4, 6)]
    return cells


_PERIM_CELLS = _perimeter_walk()
_PERIM_ROWS = np.array([r for r, _ in _PERIM_CELLS], dtype=np.int64)
_PERIM_COLS = np.array([c for _, c in _PERIM_CELLS], dtype=np.int64)


def perimeter_cell_of_sector(k: int) -> tuple[int, int]:
    return _PERIM_CELLS[k % 24]


def normalized_score(s: GameState) -> float:
    """Game score mapped into [0,1]; +-100 per initially-present unit bounds it."""
    bound = 100.0 * max(s.initial_unit_count, 1)
    x = max(-1.0, min(1.0, s.game_score() / bound))
    return (x + 1.0) / 2.0


def build_global(s: GameState, mover_id: int) -> np.ndarray:
    """18 x rows x cols observation tensor for the unit on move."""
    mover = s.units[mover_id]
    R, C = s.dims.n_rows, s.dims.n_cols
    t = np.zeros((GLOBAL_CHANNELS, R, C))
    t[CH_ON_MOVE, mover.pos.row, mover.pos.col] = 1.0
    for u in s.units.values():
        if u.faction == mover.faction and u.can_move_this_phase:
            t[CH_CAN_MOVE, u.pos.row, u.pos.col] = 1.0
        hp_ch = CH_BLUE_HP if u.faction == BLUE else CH_RED_HP
        t[hp_ch, u.pos.row, u.pos.col] = u.strength / 100.0
        t[CH_TYPE_INFANTRY, u.pos.row, u.pos.col] = 1.0
    for a in s.legal_actions(mover_id):
        if a.kind == "move":
            t[CH_LEGAL, a.target_hex.row, a.target_hex.col] = 1.0
        elif a.kind == "attack":
            p = s.units[a.target_unit].pos
            t[CH_LEGAL, p.row, p.col] = 1.0
        else:  # pass: staying put is always legal
            t[CH_LEGAL, mover.pos.row, mover.pos.col] = 1.0
    t[CH_TERRAIN_CLEAR, :, :] = 1.0
    for h in s.urban_hexes:
        t[CH_TERRAIN_URBAN, h.row, h.col] = 1.0
        t[CH_TERRAIN_CLEAR, h.row, h.col] = 0.0
        owner = s.city_owner[h]
        if owner == BLUE:
            t[CH_CITY_BLUE, h.row, h.col] = 1.0
        elif owner == RED:
            t[CH_CITY_RED, h.row, h.col] = 1.0
    t[CH_PHASE, :, :] = s.phase / max(s.num_phases, 1)
    t[CH_SCORE, :, :] = normalized_score(s)
    return t


def localized_decay(
    t: np.ndarray,
    center: HexCoord,
    p: DecayParams = DecayParams(),
    const_channels: tuple[int, ...] = GLOBAL_CONST_CHANNELS,
) -> np.ndarray:
    """7x7 localized abstraction around `center`: inner 5x5 verbatim crop,
    24 decay-weighted sector sums on the perimeter, clamped at 1.0.
    Constant-fill channels are copied as constants, never summed."""
    out = kernels.localized_kernel(
        np.ascontiguousarray(t, dtype=np.float64),
        center.row,
        center.col,
        _PERIM_ROWS,
        _PERIM_COLS,
        p.n_d,
        p.m_d,
        p.f_d,
        p.w_min,
    )
    for ch in const_channels:
        out[ch, :, :] = t[ch, 0, 0]
    return out


def coarse_proportional(
    t: np.ndarray,
    out_shape: tuple[int, int],
    const_channels: tuple[int, ...] = (),
) -> np.ndarray:
    rows, cols = out_shape
    if rows > t.shape[1] or cols > t.shape[2]:
        raise ValueError("output dims must not exceed input dims")
    out = kernels.coarse_proportional_kernel(
        np.ascontiguousarray(t, dtype=np.float64), rows, cols
    )
    for ch in const_channels:
        out[ch, :, :] = t[ch, 0, 0]
    return out


def coarse_nearest(
    t: np.ndarray,
    out_shape: tuple[int, int],
    const_channels: tuple[int, ...] = (),
    clamp_channels: tuple[int, ...] | None = None,
) -> np.ndarray:
    rows, cols = out_shape
    if rows > t.shape[1] or cols > t.shape[2]:
        raise ValueError("output dims must not exceed input dims")
    out = kernels.coarse_nearest_kernel(
        np.ascontiguousarray(t, dtype=np.float64), rows, cols
    )
    if clamp_channels is not None:
        for ch in clamp_channels:
            np.minimum(out[ch], 1.0, out=out[ch])
    for ch in const_channels:
        out[ch, :, :] = t[ch, 0, 0]
    return out


def _area_tensor(
    s: GameState,
    window: AreaRect,
    group_units: list,
    other_areas: list[AreaRect],
) -> np.ndarray:
    """17-channel tensor over a rectangular window of the board."""
    t = np.zeros((MANAGER_CHANNELS, window.height, window.width))

    def loc(h: HexCoord) -> tuple[int, int]:
        return h.row - window.min_row, h.col - window.min_col

    for u in group_units:
        if window.contains(u.pos):
            r, c = loc(u.pos)
            t[MCH_GROUP, r, c] = 1.0
    for area in other_areas:
        for h in area.hexes():
            if window.contains(h):
                r, c = loc(h)
                t[MCH_OTHER_AREAS, r, c] = 1.0
    for u in s.units.values():
        if not window.contains(u.pos):
            continue
        r, c = loc(u.pos)
        hp_ch = MCH_BLUE_HP if u.faction == BLUE else MCH_RED_HP
        t[hp_ch, r, c] = u.strength / 100.0
        t[MCH_TYPE_INFANTRY, r, c] = 1.0
    t[MCH_TERRAIN_CLEAR, :, :] = 1.0
    for h in s.urban_hexes:
        if not window.contains(h):
            continue
        r, c = loc(h)
        t[MCH_TERRAIN_URBAN, r, c] = 1.0
        t[MCH_TERRAIN_CLEAR, r, c] = 0.0
        owner = s.city_owner[h]
        if owner == BLUE:
            t[MCH_CITY_BLUE, r, c] = 1.0
        elif owner == RED:
            t[MCH_CITY_RED, r, c] = 1.0
    t[MCH_PHASE, :, :] = s.phase / max(s.num_phases, 1)
    t[MCH_SCORE, :, :] = normalized_score(s)
    return t


def build_manager_obs(
    s: GameState,
    manager_id: int,
    operating_area: AreaRect,
    other_objective_areas: list[AreaRect] = (),
) -> np.ndarray:
    """17 x 5 x 5 manager observation: the operating-area window reduced
    with the nearest-grid abstraction, clamped to [0,1]."""
    group = [u for u in s.units.values() if u.parent_manager == manager_id]
    t = _area_tensor(s, operating_area, group, list(other_objective_areas))
    out = coarse_nearest(t, (5, 5), const_channels=MANAGER_CONST_CHANNELS)
    np.clip(out, 0.0, 1.0, out=out)
    return out


def build_commander_obs(
    s: GameState,
    commander_id: int,
    other_operating_areas: list[AreaRect] = (),
) -> np.ndarray:
    """17 x 5 x 5 commander observation over the whole board."""
    board = AreaRect(0, 0, s.dims.n_cols, s.dims.n_rows)
    group = [u for u in s.units.values() if u.parent_commander == commander_id]
    t = _area_tensor(s, board, group, list(other_operating_areas))
    out = coarse_nearest(t, (5, 5), const_channels=MANAGER_CONST_CHANNELS)
    np.clip(out, 0.0, 1.0, out=out)
    return out


# -- binary serialization ---------------------------------------------------

_HEADER = struct.Struct("<HHHxx")


def obs_to_bytes(t: np.ndarray) -> bytes:
    c, r, w = t.shape
    return _HEADER.pack(c, r, w) + np.asarray(t, dtype="<f4").tobytes()


def obs_from_bytes(buf: bytes) -> np.ndarray:
    c, r, w = _HEADER.unpack_from(buf)
    data = np.frombuffer(buf, dtype="<f4", offset=_HEADER.size)
    if data.size != c * r * w:
        raise ValueError(f"payload size {data.size} != {c}x{r}x{w}")
    return data.reshape(c, r, w).astype(np.float64)
