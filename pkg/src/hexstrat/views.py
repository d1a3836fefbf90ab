"""Read-only views over game state for agent decision functions.

A culled view hides units and cities outside an assigned area.  The one
exception is target acquisition: fire targets are looked up against the
full state, so a unit may attack an adjacent enemy standing just outside
its area.  Occupancy checks always consult the full state, otherwise an
agent could try to move onto an invisible unit.
"""

from __future__ import annotations

from .engine import GameState, Unit, opponent
from .hexgrid import AreaRect, HexCoord, neighbors


class FullView:
    """View of the entire board."""

    def __init__(self, state: GameState):
        self._s = state

    @property
    def dims(self):
        return self._s.dims

    @property
    def deterministic(self) -> bool:
        return self._s.deterministic_mode

    def visible_units(self, faction: str) -> list[Unit]:
        return self._s.roster(faction)

    def visible_cities(self) -> list[HexCoord]:
        return list(self._s.urban_hexes)

    def city_owner(self, h: HexCoord):
        return self._s.city_owner.get(h)

    def is_free(self, h: HexCoord) -> bool:
        return self._s.is_free(h)

    def fire_targets(self, unit: Unit) -> list[Unit]:
        out = []
        for n in neighbors(unit.pos, self._s.dims):
            other = self._s.unit_at(n)
            if other is not None and other.faction != unit.faction:
                out.append(other)
        return out

    def combat_power(self, faction: str) -> float:
        return sum(u.strength for u in self.visible_units(faction))

    def choose(self, items: list):
        return self._s.choose(items)


class CulledView(FullView):
    """View restricted to an area, with the fire-target exception."""

    def __init__(self, state: GameState, area: AreaRect):
        super().__init__(state)
        self.area = area

    def visible_units(self, faction: str) -> list[Unit]:
        return [u for u in self._s.roster(faction) if self.area.contains(u.pos)]

    def visible_cities(self) -> list[HexCoord]:
        return [h for h in self._s.urban_hexes if self.area.contains(h)]

    # fire_targets intentionally inherited: adjacency sees the full state.


def cull_to_area(state: GameState, area: AreaRect) -> CulledView:
    return CulledView(state, area)


__all__ = ["FullView", "CulledView", "cull_to_area", "opponent"]
