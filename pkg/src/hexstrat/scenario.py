"""Seeded random scenario generation.

Sizing laws: per-faction unit count uniform in [ceil(L/2), L] on an LxL
board, horizon num_phases = 4L.  Factions start on opposite sides of a
randomly chosen north-south or east-west split; cities are placed on the
weaker faction's side (or on the middle axis for equal forces).
Hierarchical scenarios group units 3 operators per manager, 3 managers
per commander, clustered with a Gaussian spread.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .engine import BLUE, RED, GameState, Unit
from .hexgrid import AreaRect, BoardDims, HexCoord, neighbors

GAUSSIAN_SIGMA = 1.5  # hex units; keeps a manager's units near one 5x5 area
MIN_CLUSTER_SEPARATION = 4.0


@dataclass(frozen=True)
class PaperFormula:
    pass


@dataclass(frozen=True)
class Fixed:
    n_blue: int
    n_red: int


@dataclass(frozen=True)
class HierarchyCounts:
    n_commanders: int  # 1..3; each commander owns 3 managers of 3 operators


@dataclass(frozen=True)
class ScenarioParams:
    board_length: int
    n_cities: int = 1
    unit_count_mode: object = PaperFormula()
    city_placement: str = "force_ratio"  # or "uniform"
    hierarchy_grouping: bool = False
    max_phases_override: int | None = None

    def __post_init__(self):
        if isinstance(self.unit_count_mode, PaperFormula) and self.board_length < 3:
            raise ValueError("paper-formula sizing requires board length >= 3")
        if not 0 <= self.n_cities <= 2:
            raise ValueError("n_cities must be 0..2")
        if isinstance(self.unit_count_mode, HierarchyCounts):
            if not 1 <= self.unit_count_mode.n_commanders <= 3:
                raise ValueError("n_commanders must be 1..3")


@dataclass
class ScenarioSpec:
    dims: BoardDims
    units: list[dict]  # faction, kind, strength, col, row, manager, commander
    urban_hexes: list[HexCoord]
    num_phases: int
    seed_used: int

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "dims": [self.dims.n_rows, self.dims.n_cols],
            "units": self.units,
            "cities": [[h.col, h.row] for h in self.urban_hexes],
            "phases": self.num_phases,
            "seed": self.seed_used,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ScenarioSpec":
        return cls(
            dims=BoardDims(doc["dims"][0], doc["dims"][1]),
            units=list(doc["units"]),
            urban_hexes=[HexCoord(c, r) for c, r in doc["cities"]],
            num_phases=doc["phases"],
            seed_used=doc["seed"],
        )

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=2)

    @classmethod
    def load(cls, path) -> "ScenarioSpec":
        with open(path) as f:
            return cls.from_json(json.load(f))

    def make_state(
        self,
        deterministic: bool = True,
        seed: int | None = None,
        early_termination: bool | None = None,
    ) -> GameState:
        units = [
            Unit(
                id=i,
                faction=u["faction"],
                kind=u.get("kind", "infantry"),
                strength=u.get("strength", 100.0),
                pos=HexCoord(u["col"], u["row"]),
                parent_manager=u.get("manager"),
                parent_commander=u.get("commander"),
            )
            for i, u in enumerate(self.units)
        ]
        if early_termination is None:
            # a game that starts one-sided would otherwise be terminal at phase 0
            factions = {u.faction for u in units}
            early_termination = len(factions) == 2
        return GameState(
            dims=self.dims,
            units=units,
            urban_hexes=list(self.urban_hexes),
            num_phases=self.num_phases,
            seed=self.seed_used if seed is None else seed,
            deterministic_mode=deterministic,
            early_termination=early_termination,
        )


def _side_hexes(L: int, axis: str, side: str) -> list[HexCoord]:
    lo = range(0, L // 2)
    hi = range((L + 1) // 2, L)
    if axis == "ns":
        rows = lo if side == "north" else hi
        return [HexCoord(c, r) for r in rows for c in range(L)]
    cols = lo if side == "west" else hi
    return [HexCoord(c, r) for r in cols for c in range(L)]


def _middle_hexes(L: int, axis: str) -> list[HexCoord]:
    mid = [(L - 1) // 2] if L % 2 else [L // 2 - 1, L // 2]
    if axis == "ns":
        return [HexCoord(c, r) for r in mid for c in range(L)]
    return [HexCoord(c, r) for c in mid for r in range(L)]


def _unit_counts(mode, L: int, rng: random.Random) -> tuple[int, int]:
    if isinstance(mode, PaperFormula):
        lo, hi = math.ceil(L / 2), L
        return rng.randint(lo, hi), rng.randint(lo, hi)
    if isinstance(mode, Fixed):
        return mode.n_blue, mode.n_red
    if isinstance(mode, HierarchyCounts):
        n = 9 * mode.n_commanders
        return n, n
    raise TypeError(f"unknown unit count mode {mode!r}")


def place_city_by_force_ratio(
    L: int,
    axis: str,
    blue_side: str,
    n_blue: int,
    n_red: int,
    taken: set[HexCoord],
    rng: random.Random,
) -> HexCoord:
    """One city on the weaker faction's side, or on the middle axis if equal."""
    other = {"north": "south", "south": "north", "west": "east", "east": "west"}
    if n_blue == n_red:
        candidates = _middle_hexes(L, axis)
    elif n_blue < n_red:
        candidates = _side_hexes(L, axis, blue_side)
    else:
        candidates = _side_hexes(L, axis, other[blue_side])
    candidates = [h for h in candidates if h not in taken]
    if not candidates:  # degenerate board: fall back to uniform placement
        candidates = [
            HexCoord(c, r) for r in range(L) for c in range(L) if HexCoord(c, r) not in taken
        ]
    return candidates[rng.randrange(len(candidates))]


def _spiral_to_free(
    start: HexCoord, dims: BoardDims, taken: set[HexCoord], prefer: set[HexCoord] | None
) -> HexCoord:
    """Nearest free hex by BFS ring search; prefers staying within `prefer`."""
    for restrict in (prefer, None) if prefer is not None else (None,):
        seen = {start}
        frontier = [start]
        while frontier:
            for h in frontier:
                if h not in taken and (restrict is None or h in restrict):
                    return h
            nxt = []
            for h in frontier:
                for n in neighbors(h, dims):
                    if n not in seen:
                        seen.add(n)
                        nxt.append(n)
            frontier = sorted(nxt, key=lambda h: (h.col, h.row))
    raise ValueError("no free hex available")


def place_hierarchical_groups(
    L: int,
    axis: str,
    side: str,
    faction: str,
    n_commanders: int,
    taken: set[HexCoord],
    rng: random.Random,
    manager_id_base: int = 0,
    commander_id_base: int = 0,
    sigma: float = GAUSSIAN_SIGMA,
) -> list[dict]:
    side_hexes = _side_hexes(L, axis, side)
    side_set = set(side_hexes)
    n_managers = 3 * n_commanders
    if len(side_set) < 9 * n_commanders:
        raise ValueError("faction side too small for hierarchical placement")
    # cluster centers: keep them spread out when the side allows it
    centers: list[HexCoord] = []
    for _ in range(n_managers):
        best = None
        for _attempt in range(64):
            cand = side_hexes[rng.randrange(len(side_hexes))]
            d = min(
                (math.dist((cand.col, cand.row), (c.col, c.row)) for c in centers),
                default=math.inf,
            )
            if d >= MIN_CLUSTER_SEPARATION:
                best = cand
                break
            if best is None or d > 0:
                best = cand
        centers.append(best)
    units: list[dict] = []
    dims = BoardDims(L, L)
    for m, center in enumerate(centers):
        manager = manager_id_base + m
        commander = commander_id_base + m // 3
        for _ in range(3):
            col = int(round(center.col + rng.gauss(0.0, sigma)))
            row = int(round(center.row + rng.gauss(0.0, sigma)))
            col = min(max(col, 0), L - 1)
            row = min(max(row, 0), L - 1)
            pos = _spiral_to_free(HexCoord(col, row), dims, taken, side_set)
            taken.add(pos)
            units.append(
                {
                    "faction": faction,
                    "kind": "infantry",
                    "strength": 100.0,
                    "col": pos.col,
                    "row": pos.row,
                    "manager": manager,
                    "commander": commander,
                }
            )
    return units


def generate(params: ScenarioParams, rng: random.Random, seed_used: int = 0) -> ScenarioSpec:
    L = params.board_length
    axis = rng.choice(["ns", "ew"])
    blue_side = rng.choice(["north", "south"] if axis == "ns" else ["west", "east"])
    other = {"north": "south", "south": "north", "west": "east", "east": "west"}
    red_side = other[blue_side]
    n_blue, n_red = _unit_counts(params.unit_count_mode, L, rng)

    taken: set[HexCoord] = set()
    units: list[dict] = []
    if isinstance(params.unit_count_mode, HierarchyCounts) or params.hierarchy_grouping:
        nc = (
            params.unit_count_mode.n_commanders
            if isinstance(params.unit_count_mode, HierarchyCounts)
            else 1
        )
        units += place_hierarchical_groups(L, axis, blue_side, BLUE, nc, taken, rng)
        units += place_hierarchical_groups(
            L, axis, red_side, RED, nc, taken, rng,
            manager_id_base=100, commander_id_base=100,
        )
    else:
        for faction, side, count in ((BLUE, blue_side, n_blue), (RED, red_side, n_red)):
            free = [h for h in _side_hexes(L, axis, side) if h not in taken]
            if count > len(free):
                raise ValueError(
                    f"board {L}x{L} too small: {count} {faction} units, "
                    f"{len(free)} free hexes on side"
                )
            for _ in range(count):
                pos = free.pop(rng.randrange(len(free)))
                taken.add(pos)
                units.append(
                    {
                        "faction": faction,
                        "kind": "infantry",
                        "strength": 100.0,
                        "col": pos.col,
                        "row": pos.row,
                    }
                )

    cities: list[HexCoord] = []
    for _ in range(params.n_cities):
        if params.city_placement == "force_ratio":
            h = place_city_by_force_ratio(
                L, axis, blue_side, n_blue, n_red, taken | set(cities), rng
            )
        else:
            free = [
                HexCoord(c, r)
                for r in range(L)
                for c in range(L)
                if HexCoord(c, r) not in taken and HexCoord(c, r) not in cities
            ]
            h = free[rng.randrange(len(free))]
        cities.append(h)

    num_phases = (
        params.max_phases_override
        if params.max_phases_override is not None
        else 4 * L
    )
    return ScenarioSpec(
        dims=BoardDims(L, L),
        units=units,
        urban_hexes=cities,
        num_phases=num_phases,
        seed_used=seed_used,
    )


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def child_seed(master_seed: int, index: int) -> int:
    return _splitmix64(_splitmix64(master_seed & 0xFFFFFFFFFFFFFFFF) ^ _splitmix64(index))


class ScenarioStream:
    """cycle = 0: fresh scenario per draw (reproducible child seeds);
    cycle = k: the first k scenarios are cached and reused in sequence."""

    def __init__(self, seed: int, cycle: int, params: ScenarioParams):
        if cycle < 0:
            raise ValueError("cycle must be >= 0")
        self.seed = seed
        self.cycle = cycle
        self.params = params
        self.cached: list[ScenarioSpec] = []
        if cycle > 0:
            for i in range(cycle):
                self.cached.append(self._fresh(i))

    def _fresh(self, index: int) -> ScenarioSpec:
        s = child_seed(self.seed, index)
        return generate(self.params, random.Random(s), seed_used=s)

    def draw(self, index: int) -> ScenarioSpec:
        if self.cycle > 0:
            return self.cached[index % self.cycle]
        return self._fresh(index)


def scenario_stream(seed: int, cycle: int, params: ScenarioParams) -> ScenarioStream:
    return ScenarioStream(seed, cycle, params)
