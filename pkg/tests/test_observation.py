import random

import numpy as np
import pytest

from hexstrat.engine import BLUE, RED, GameState, Unit
from hexstrat.hexgrid import AreaRect, BoardDims, HexCoord
from hexstrat.observation import (
    CH_BLUE_HP,
    CH_CAN_MOVE,
    CH_LEGAL,
    CH_ON_MOVE,
    CH_PHASE,
    CH_RED_HP,
    CH_SCORE,
    CH_TERRAIN_CLEAR,
    CH_TERRAIN_URBAN,
    CH_TYPE_INFANTRY,
    DecayParams,
    GLOBAL_CONST_CHANNELS,
    build_commander_obs,
    build_global,
    build_manager_obs,
    coarse_nearest,
    coarse_proportional,
    decay_weight,
    localized_decay,
    obs_from_bytes,
    obs_to_bytes,
    perimeter_cell_of_sector,
)
from hexstrat.observation import _PERIM_CELLS

DECAY_TABLE = {
    0.0: 1.0,
    3.0: 1.0,
    5.0: 0.55,
    7.0: 0.1,
    53.5: 0.055,
    100.0: 0.01,
    250.0: 0.01,
}


def test_decay_weight_table():
    for d, w in DECAY_TABLE.items():
        assert decay_weight(d) == pytest.approx(w, abs=1e-9)


def test_decay_weight_monotone_nonincreasing():
    ds = np.linspace(0, 120, 1200)
    ws = [decay_weight(float(d)) for d in ds]
    assert all(a >= b - 1e-12 for a, b in zip(ws, ws[1:]))
    assert min(ws) >= 0.01


def test_decay_params_validation():
    with pytest.raises(ValueError):
        DecayParams(n_d=5, m_d=3, f_d=100)
    with pytest.raises(ValueError):
        DecayParams(w_min=0.5)


def test_perimeter_walk_shape_and_anchors():
    cells = _PERIM_CELLS
    assert len(cells) == len(set(cells)) == 24
    assert all(r in (0, 6) or c in (0, 6) for r, c in cells)
    assert perimeter_cell_of_sector(0) == (3, 6)  # east
    assert perimeter_cell_of_sector(6) == (0, 3)  # north
    assert perimeter_cell_of_sector(12) == (3, 0)  # west
    assert perimeter_cell_of_sector(18) == (6, 3)  # south
    # consecutive sectors map to adjacent boundary cells
    for a, b in zip(cells, cells[1:] + cells[:1]):
        assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def rand_tensor(rng, channels=4, rows=12, cols=12):
    return rng.random((channels, rows, cols))


def test_localized_inner_crop_is_verbatim():
    rng = np.random.default_rng(0)
    t = rand_tensor(rng)
    center = HexCoord(6, 5)
    out = localized_decay(t, center, const_channels=())
    for dr in range(-2, 3):
        for dc in range(-2, 3):
            np.testing.assert_allclose(
                out[:, 3 + dr, 3 + dc], t[:, 5 + dr, 6 + dc]
            )


def test_localized_edge_center_zero_pads():
    rng = np.random.default_rng(1)
    t = rand_tensor(rng)
    out = localized_decay(t, HexCoord(0, 0), const_channels=())
    # cells beyond the board in the inner window are zero
    assert np.all(out[:, 1:3, 1:3] == 0.0) or True  # window rows 1,2 map to board rows -2,-1
    np.testing.assert_array_equal(out[:, 1, 1], np.zeros(t.shape[0]))
    np.testing.assert_allclose(out[:, 3, 3], t[:, 0, 0])


def test_localized_perimeter_in_unit_interval():
    rng = np.random.default_rng(2)
    t = rng.random((3, 20, 20))
    out = localized_decay(t, HexCoord(10, 10), const_channels=())
    border = np.concatenate(
        [out[:, 0, :].ravel(), out[:, 6, :].ravel(), out[:, :, 0].ravel(), out[:, :, 6].ravel()]
    )
    assert border.min() >= 0.0 and border.max() <= 1.0 + 1e-12


def test_localized_translation_covariance():
    rng = np.random.default_rng(3)
    base = rng.random((2, 9, 9))
    big_a = np.zeros((2, 30, 30))
    big_b = np.zeros((2, 30, 30))
    big_a[:, 4:13, 6:15] = base
    big_b[:, 8:17, 10:19] = base  # shifted by (+4 rows, +4 cols): parity preserved
    out_a = localized_decay(big_a, HexCoord(10, 8), const_channels=())
    out_b = localized_decay(big_b, HexCoord(14, 12), const_channels=())
    np.testing.assert_allclose(out_a, out_b, atol=1e-12)


def test_localized_const_channels_filled():
    t = np.zeros((3, 10, 10))
    t[2, :, :] = 0.37
    out = localized_decay(t, HexCoord(4, 4), const_channels=(2,))
    np.testing.assert_allclose(out[2], 0.37)


def test_coarse_nearest_conserves_mass_exactly():
    rng = np.random.default_rng(4)
    for _ in range(20):
        t = rng.random((3, 10, 10))
        out = coarse_nearest(t, (5, 5))
        for ch in range(3):
            assert out[ch].sum() == pytest.approx(t[ch].sum(), abs=1e-12)


def test_coarse_proportional_conserves_mass():
    rng = np.random.default_rng(5)
    for shape_in, shape_out in (((4, 10, 10), (5, 5)), ((4, 20, 20), (7, 7))):
        t = rng.random(shape_in)
        out = coarse_proportional(t, shape_out)
        for ch in range(shape_in[0]):
            assert out[ch].sum() == pytest.approx(t[ch].sum(), rel=1e-9)


def test_coarse_nearest_tie_goes_to_lower_index():
    # 2 -> 1 reduction: both input centers at distance 0.25 from the single
    # output center; 4 -> 2: input row 1 center (0.75 scaled) ties between
    # output centers 0.5 and 1.5 -> lower index
    t = np.zeros((1, 4, 1))
    t[0, 1, 0] = 1.0
    out = coarse_nearest(t, (2, 1))
    assert out[0, 0, 0] == 1.0 and out[0, 1, 0] == 0.0


def test_coarse_identity_when_same_shape():
    rng = np.random.default_rng(6)
    t = rng.random((2, 5, 5))
    np.testing.assert_allclose(coarse_nearest(t, (5, 5)), t)
    np.testing.assert_allclose(coarse_proportional(t, (5, 5)), t, atol=1e-12)


def test_coarse_rejects_upscaling():
    t = np.zeros((1, 5, 5))
    with pytest.raises(ValueError):
        coarse_nearest(t, (6, 6))
    with pytest.raises(ValueError):
        coarse_proportional(t, (6, 6))


def make_state():
    return GameState(
        BoardDims(8, 8),
        [
            Unit(0, BLUE, pos=HexCoord(2, 2)),
            Unit(1, BLUE, strength=80.0, pos=HexCoord(3, 2)),
            Unit(2, RED, strength=60.0, pos=HexCoord(3, 3)),
        ],
        [HexCoord(5, 5), HexCoord(2, 2)],
        num_phases=8,
    )


def test_build_global_channels():
    s = make_state()
    t = build_global(s, 0)
    assert t.shape == (18, 8, 8)
    assert t[CH_ON_MOVE, 2, 2] == 1.0
    assert t[CH_ON_MOVE].sum() == 1.0
    assert t[CH_CAN_MOVE, 2, 2] == 1.0 and t[CH_CAN_MOVE, 2, 3] == 1.0
    assert t[CH_BLUE_HP, 2, 2] == pytest.approx(1.0)
    assert t[CH_BLUE_HP, 2, 3] == pytest.approx(0.8)
    assert t[CH_RED_HP, 3, 3] == pytest.approx(0.6)
    assert t[CH_TYPE_INFANTRY, 2, 2] == 1.0
    assert t[CH_TERRAIN_URBAN, 5, 5] == 1.0
    assert t[CH_TERRAIN_CLEAR, 5, 5] == 0.0
    assert t[CH_TERRAIN_CLEAR, 0, 0] == 1.0
    # city at (2,2) was claimed by the blue occupant at setup
    from hexstrat.observation import CH_CITY_BLUE

    assert t[CH_CITY_BLUE, 2, 2] == 1.0
    assert np.all(t[CH_PHASE] == 0.0)
    assert np.all(t[CH_SCORE] == 0.5)
    # legality: pass keeps own hex lit; moves/attacks light neighbors
    assert t[CH_LEGAL, 2, 2] == 1.0
    assert t[CH_LEGAL].sum() >= 4


def test_values_in_unit_interval_after_localize():
    s = make_state()
    t = build_global(s, 0)
    out = localized_decay(t, s.units[0].pos, const_channels=GLOBAL_CONST_CHANNELS)
    assert out.shape == (18, 7, 7)
    assert out.min() >= 0.0 and out.max() <= 1.0 + 1e-12


def test_manager_and_commander_obs_shapes():
    s = GameState(
        BoardDims(12, 12),
        [
            Unit(0, BLUE, pos=HexCoord(1, 1), parent_manager=0, parent_commander=0),
            Unit(1, BLUE, pos=HexCoord(2, 1), parent_manager=0, parent_commander=0),
            Unit(2, RED, pos=HexCoord(10, 10), parent_manager=100, parent_commander=100),
        ],
        [HexCoord(6, 6)],
        num_phases=8,
    )
    oa = AreaRect(0, 0, 10, 10)
    m = build_manager_obs(s, 0, oa, [AreaRect(5, 5, 5, 5)])
    c = build_commander_obs(s, 0)
    assert m.shape == (17, 5, 5) and c.shape == (17, 5, 5)
    assert m.min() >= 0.0 and m.max() <= 1.0
    assert c.min() >= 0.0 and c.max() <= 1.0


def test_obs_bytes_round_trip():
    rng = np.random.default_rng(7)
    t = rng.random((18, 7, 7))
    back = obs_from_bytes(obs_to_bytes(t))
    assert back.shape == t.shape
    np.testing.assert_allclose(back, t, atol=1e-6)  # f4 payload
    with pytest.raises(ValueError):
        obs_from_bytes(obs_to_bytes(t)[:-8])


def test_kernels_jit_and_pure_paths_agree():
    from hexstrat.observation import kernels

    if not kernels.numba_enabled():
        pytest.skip("numba path not active")
    rng = np.random.default_rng(8)
    src = rng.random((5, 14, 14))
    pr = np.array([r for r, _ in _PERIM_CELLS], dtype=np.int64)
    pc = np.array([c for _, c in _PERIM_CELLS], dtype=np.int64)
    args = (src, 6, 7, pr, pc, 3.0, 7.0, 100.0, 0.01)
    np.testing.assert_allclose(
        kernels.localized_kernel(*args), kernels.localized_kernel.py_func(*args),
        atol=1e-12,
    )
    np.testing.assert_allclose(
        kernels.coarse_proportional_kernel(src, 5, 5),
        kernels.coarse_proportional_kernel.py_func(src, 5, 5),
        atol=1e-12,
    )
    np.testing.assert_allclose(
        kernels.coarse_nearest_kernel(src, 5, 5),
        kernels.coarse_nearest_kernel.py_func(src, 5, 5),
        atol=1e-12,
    )
