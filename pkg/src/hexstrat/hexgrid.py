"""Hex coordinate system, geometry and rectangular region math.

Layout convention used across the whole package: pointy-top hexes with
odd rows shifted +0.5 columns ("odd-r" offset indexing), unit horizontal
spacing between hex centers.  Row 0 is the northern edge: "north" means
decreasing cartesian y as returned by :func:`to_cartesian`, so angular
math below negates dy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

ROW_PITCH = math.sqrt(3.0) / 2.0

# Direction order is fixed package-wide: E, NE, NW, W, SW, SE.
DIRECTION_NAMES = ("E", "NE", "NW", "W", "SW", "SE")

# (dcol, drow) neighbor offsets indexed by [row parity][direction].
_NEIGHBOR_OFFSETS = (
    # even rows
    ((1, 0), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1)),
    # odd rows
    ((1, 0), (1, -1), (0, -1), (-1, 0), (0, 1), (1, 1)),
)


@dataclass(frozen=True, order=True)
class HexCoord:
    col: int
    row: int


@dataclass(frozen=True)
class BoardDims:
    n_rows: int
    n_cols: int

    def __post_init__(self) -> None:
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError(f"board dims must be >= 1, got {self.n_rows}x{self.n_cols}")

    def contains(self, c: HexCoord) -> bool:
        return 0 <= c.col < self.n_cols and 0 <= c.row < self.n_rows

    def all_hexes(self):
        for row in range(self.n_rows):
            for col in range(self.n_cols):
                yield HexCoord(col, row)


@dataclass(frozen=True)
class AreaRect:
    """Axis-aligned rectangle of hexes, in hex-index units."""

    min_col: int
    min_row: int
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"rect dims must be >= 1, got {self.width}x{self.height}")

    @property
    def max_col(self) -> int:
        return self.min_col + self.width - 1

    @property
    def max_row(self) -> int:
        return self.min_row + self.height - 1

    def contains(self, c: HexCoord) -> bool:
        return (
            self.min_col <= c.col <= self.max_col
            and self.min_row <= c.row <= self.max_row
        )

    def contains_rect(self, other: "AreaRect") -> bool:
        return (
            self.min_col <= other.min_col
            and self.min_row <= other.min_row
            and other.max_col <= self.max_col
            and other.max_row <= self.max_row
        )

    def hexes(self):
        for row in range(self.min_row, self.min_row + self.height):
            for col in range(self.min_col, self.min_col + self.width):
                yield HexCoord(col, row)

    def center(self) -> HexCoord:
        # floor midpoint
        return HexCoord(
            (self.min_col + self.max_col) // 2,
            (self.min_row + self.max_row) // 2,
        )


def neighbors_by_direction(c: HexCoord, dims: BoardDims) -> list[HexCoord | None]:
    """All six direction slots in fixed order; off-board slots are None."""
    out: list[HexCoord | None] = []
    offsets = _NEIGHBOR_OFFSETS[c.row & 1]
    for dcol, drow in offsets:
        n = HexCoord(c.col + dcol, c.row + drow)
        out.append(n if dims.contains(n) else None)
    return out


def neighbors(c: HexCoord, dims: BoardDims) -> list[HexCoord]:
    """On-board neighbors of c, in fixed direction order (E, NE, NW, W, SW, SE)."""
    return [n for n in neighbors_by_direction(c, dims) if n is not None]


def to_cartesian(c: HexCoord) -> tuple[float, float]:
    """Hex-center point; odd rows shifted +0.5, row pitch sqrt(3)/2."""
    return (c.col + 0.5 * (c.row & 1), c.row * ROW_PITCH)


def euclid_dist(a: HexCoord, b: HexCoord) -> float:
    ax, ay = to_cartesian(a)
    bx, by = to_cartesian(b)
    return math.hypot(ax - bx, ay - by)


def sector_index(center: HexCoord, target: HexCoord, n_sectors: int) -> int:
    """Angular sector of target around center.

    Sector 0 starts due east; sectors advance counter-clockwise (toward
    north, i.e. decreasing row).  Bins are half-open: sector k covers
    [k*step, (k+1)*step).
    """
    if target == center:
        raise ValueError("sector_index undefined for target == center")
    cx, cy = to_cartesian(center)
    tx, ty = to_cartesian(target)
    # negate dy so that north (decreasing row) is +90 degrees
    angle = math.atan2(cy - ty, tx - cx)
    if angle < 0.0:
        angle += 2.0 * math.pi
    k = int(angle / (2.0 * math.pi / n_sectors))
    return k % n_sectors


def clamp_rect(r: AreaRect, dims: BoardDims) -> AreaRect:
    """Translate r minimally so it lies within the board; size preserved."""
    if r.width > dims.n_cols or r.height > dims.n_rows:
        raise ValueError(
            f"rect {r.width}x{r.height} larger than board {dims.n_cols}x{dims.n_rows}"
        )
    min_col = min(max(r.min_col, 0), dims.n_cols - r.width)
    min_row = min(max(r.min_row, 0), dims.n_rows - r.height)
    if min_col == r.min_col and min_row == r.min_row:
        return r
    return AreaRect(min_col, min_row, r.width, r.height)


def clamp_rect_into(r: AreaRect, parent: AreaRect) -> AreaRect:
    """clamp_rect generalized to an arbitrary parent rectangle."""
    if r.width > parent.width or r.height > parent.height:
        raise ValueError(f"rect {r.width}x{r.height} larger than parent area")
    min_col = min(max(r.min_col, parent.min_col), parent.max_col - r.width + 1)
    min_row = min(max(r.min_row, parent.min_row), parent.max_row - r.height + 1)
    if min_col == r.min_col and min_row == r.min_row:
        return r
    return AreaRect(min_col, min_row, r.width, r.height)
