import math

import pytest
from hypothesis import given, strategies as st

from hexstrat.hexgrid import (
    AreaRect,
    BoardDims,
    HexCoord,
    clamp_rect,
    clamp_rect_into,
    euclid_dist,
    neighbors,
    neighbors_by_direction,
    sector_index,
    to_cartesian,
)

BIG = BoardDims(100, 100)

hexes = st.builds(
    HexCoord, st.integers(0, 99), st.integers(0, 99)
)


def test_direction_order_even_row():
    # E, NE, NW, W, SW, SE around (5, 4)
    out = neighbors_by_direction(HexCoord(5, 4), BIG)
    assert out == [
        HexCoord(6, 4),
        HexCoord(5, 3),
        HexCoord(4, 3),
        HexCoord(4, 4),
        HexCoord(4, 5),
        HexCoord(5, 5),
    ]


def test_direction_order_odd_row():
    out = neighbors_by_direction(HexCoord(5, 3), BIG)
    assert out == [
        HexCoord(6, 3),
        HexCoord(6, 2),
        HexCoord(5, 2),
        HexCoord(4, 3),
        HexCoord(5, 4),
        HexCoord(6, 4),
    ]


def test_corner_has_fewer_neighbors():
    dims = BoardDims(5, 5)
    assert len(neighbors(HexCoord(0, 0), dims)) == 2  # only E and SE exist
    assert all(dims.contains(n) for n in neighbors(HexCoord(0, 0), dims))


@given(hexes)
def test_neighbor_symmetry(a):
    for b in neighbors(a, BIG):
        assert a in neighbors(b, BIG)


@given(hexes)
def test_neighbors_at_unit_distance(a):
    for b in neighbors(a, BIG):
        assert euclid_dist(a, b) == pytest.approx(1.0)


@given(hexes, hexes, hexes)
def test_triangle_inequality(a, b, c):
    assert euclid_dist(a, c) <= euclid_dist(a, b) + euclid_dist(b, c) + 1e-9


def test_cartesian_offsets():
    assert to_cartesian(HexCoord(2, 0)) == (2.0, 0.0)
    x, y = to_cartesian(HexCoord(2, 1))
    assert x == pytest.approx(2.5)
    assert y == pytest.approx(math.sqrt(3) / 2)


def test_sector_index_cardinal_anchors():
    c = HexCoord(10, 10)
    # due east is sector 0; north (decreasing row) is sector 6 of 24
    assert sector_index(c, HexCoord(15, 10), 24) == 0
    assert sector_index(c, HexCoord(10, 4), 24) == 6
    assert sector_index(c, HexCoord(4, 10), 24) == 12
    assert sector_index(c, HexCoord(10, 16), 24) == 18


def test_sector_index_rejects_center():
    with pytest.raises(ValueError):
        sector_index(HexCoord(3, 3), HexCoord(3, 3), 24)


@given(hexes, hexes, st.integers(4, 48))
def test_sector_partition(a, b, n):
    if a == b:
        return
    k = sector_index(a, b, n)
    assert 0 <= k < n


def test_area_rect_basics():
    r = AreaRect(2, 3, 5, 4)
    assert r.max_col == 6 and r.max_row == 6
    assert r.contains(HexCoord(2, 3)) and r.contains(HexCoord(6, 6))
    assert not r.contains(HexCoord(7, 6))
    assert len(list(r.hexes())) == 20
    assert r.center() == HexCoord(4, 4)


def test_clamp_rect_translates_minimally():
    dims = BoardDims(10, 10)
    r = clamp_rect(AreaRect(-2, 8, 5, 5), dims)
    assert (r.min_col, r.min_row) == (0, 5)
    assert (r.width, r.height) == (5, 5)


def test_clamp_rect_rejects_oversize():
    with pytest.raises(ValueError):
        clamp_rect(AreaRect(0, 0, 11, 5), BoardDims(10, 10))


@given(
    st.integers(-20, 30), st.integers(-20, 30), st.integers(1, 10), st.integers(1, 10)
)
def test_clamp_rect_idempotent_and_inside(c, r, w, h):
    dims = BoardDims(12, 12)
    out = clamp_rect(AreaRect(c, r, w, h), dims)
    assert clamp_rect(out, dims) == out
    assert 0 <= out.min_col and out.max_col < 12
    assert 0 <= out.min_row and out.max_row < 12


def test_clamp_rect_into_parent():
    parent = AreaRect(5, 5, 10, 10)
    out = clamp_rect_into(AreaRect(2, 13, 5, 5), parent)
    assert (out.min_col, out.min_row) == (5, 10)
    assert parent.contains_rect(out)
