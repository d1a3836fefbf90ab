"""Commander -> Manager -> Operator hierarchy.

Commanders pick a 10x10 operating area from a 3x3 overlay of their
observation space; managers pick a 5x5 objective area the same way
inside their operating area.  The construction is self-similar: one
parameterized `make_area` serves every level.  Managers decide
event-driven (when all effective operators have gathered inside the
assigned objective area); commanders decide on a fixed phase cadence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import agents
from .engine import ATTACK, MOVE, PASS, Action, GameState, Unit, opponent
from .hexgrid import AreaRect, HexCoord, clamp_rect_into, euclid_dist, neighbors
from .views import CulledView, FullView

OPERATOR = "operator"
MANAGER = "manager"
COMMANDER = "commander"

OBJECTIVE_DIM = 5
OPERATING_DIM = 10
COMMANDER_CADENCE = 40
GRID = 3  # 3x3 overlay, row-major choice indices 0..8
CENTER_CHOICE = 4


@dataclass
class EchelonNode:
    id: int
    level: str
    faction: str
    children: list[int] = field(default_factory=list)
    parent: int | None = None
    assigned_area: AreaRect | None = None  # objective (manager) / operating (commander)
    last_choice: int | None = None
    prev_gathered: bool = False
    last_commander_phase: int | None = None


class Hierarchy:
    """Echelon forest built from unit hierarchy labels."""

    def __init__(self, state: GameState):
        self.managers: dict[int, EchelonNode] = {}
        self.commanders: dict[int, EchelonNode] = {}
        for u in state.units.values():
            if u.parent_manager is None:
                continue
            m = self.managers.get(u.parent_manager)
            if m is None:
                m = EchelonNode(u.parent_manager, MANAGER, u.faction, parent=u.parent_commander)
                self.managers[u.parent_manager] = m
            if m.faction != u.faction or m.parent != u.parent_commander:
                raise ValueError(f"inconsistent hierarchy labels for unit {u.id}")
            m.children.append(u.id)
            if u.parent_commander is not None:
                c = self.commanders.get(u.parent_commander)
                if c is None:
                    c = EchelonNode(u.parent_commander, COMMANDER, u.faction)
                    self.commanders[u.parent_commander] = c
                if u.parent_manager not in c.children:
                    c.children.append(u.parent_manager)
        for node in list(self.managers.values()) + list(self.commanders.values()):
            node.children.sort()

    def effective_operators(self, state: GameState, manager_id: int) -> list[Unit]:
        node = self.managers[manager_id]
        return [state.units[uid] for uid in node.children if uid in state.units]

    def effective_units_of_commander(self, state: GameState, commander_id: int) -> list[Unit]:
        out = []
        for mid in self.commanders[commander_id].children:
            out.extend(self.effective_operators(state, mid))
        return out

    def manager_of(self, unit: Unit) -> EchelonNode | None:
        return self.managers.get(unit.parent_manager) if unit.parent_manager is not None else None

    def commander_of(self, unit: Unit) -> EchelonNode | None:
        return (
            self.commanders.get(unit.parent_commander)
            if unit.parent_commander is not None
            else None
        )


def build_hierarchy(state: GameState) -> Hierarchy:
    return Hierarchy(state)


def _axis_cells(start: int, length: int) -> list[tuple[int, int]]:
    """Split length into 3 near-equal spans (first spans take the remainder)."""
    q, r = divmod(length, GRID)
    sizes = [q + 1] * r + [q] * (GRID - r)
    out = []
    pos = start
    for s in sizes:
        out.append((pos, s))
        pos += s
    return out


def grid_cells(obs_space: AreaRect) -> list[AreaRect]:
    """The 9 cells of the 3x3 overlay, row-major."""
    rows = _axis_cells(obs_space.min_row, obs_space.height)
    cols = _axis_cells(obs_space.min_col, obs_space.width)
    cells = []
    for r0, rh in rows:
        for c0, cw in cols:
            cells.append(AreaRect(c0, r0, cw, rh))
    return cells


def cell_index_of(obs_space: AreaRect, h: HexCoord) -> int:
    for i, cell in enumerate(grid_cells(obs_space)):
        if cell.contains(h):
            return i
    raise ValueError(f"{h} outside observation space {obs_space}")


def make_area(obs_space: AreaRect, choice: int, out_dim: int) -> AreaRect:
    """Build an out_dim x out_dim rect centered on the chosen grid cell,
    shifted minimally to fit inside obs_space."""
    if not 0 <= choice < GRID * GRID:
        raise ValueError(f"choice must be in [0,9), got {choice}")
    if out_dim > min(obs_space.width, obs_space.height):
        raise ValueError(f"out_dim {out_dim} exceeds observation space")
    center = grid_cells(obs_space)[choice].center()
    raw = AreaRect(
        center.col - out_dim // 2, center.row - out_dim // 2, out_dim, out_dim
    )
    return clamp_rect_into(raw, obs_space)


def centroid(units: list[Unit]) -> HexCoord:
    """Hex nearest the cartesian mean of unit positions (floor rounding)."""
    n = len(units)
    col = int(math.floor(sum(u.pos.col for u in units) / n + 0.5))
    row = int(math.floor(sum(u.pos.row for u in units) / n + 0.5))
    return HexCoord(col, row)


def manager_needs_decision(state: GameState, hierarchy: Hierarchy, manager_id: int) -> bool:
    node = hierarchy.managers[manager_id]
    ops = hierarchy.effective_operators(state, manager_id)
    if not ops:
        return False
    if node.assigned_area is None:
        return True
    return all(node.assigned_area.contains(u.pos) for u in ops)


def commander_needs_decision(
    state: GameState, node: EchelonNode, cadence: int = COMMANDER_CADENCE
) -> bool:
    if state.faction_on_move != node.faction:
        return False
    if state.phase % cadence != 0:
        return False
    return node.last_commander_phase != state.phase


# -- operator move/fight modules ---------------------------------------------


def _area_dist(h: HexCoord, area: AreaRect) -> float:
    return min(euclid_dist(h, a) for a in area.hexes())


def operator_step(
    state: GameState,
    unit: Unit,
    area: AreaRect | None,
    fight_model: str = "pass_agg",
) -> Action:
    """Move Module outside the assigned area, Fight Module (culled behavior
    model) inside it; falls back to the standalone model with no area."""
    view = FullView(state)
    if area is None:
        return agents.resolve(fight_model)(view, unit)
    targets = view.fire_targets(unit)
    if targets:
        return Action(unit.id, ATTACK, target_unit=view.choose(targets).id)
    if not area.contains(unit.pos):
        cands = [unit.pos] + [n for n in neighbors(unit.pos, state.dims) if view.is_free(n)]
        best = cands[0]
        best_d = _area_dist(best, area)
        for h in cands[1:]:
            d = _area_dist(h, area)
            if d < best_d:
                best, best_d = h, d
        if best == unit.pos:
            return Action(unit.id, PASS)
        return Action(unit.id, MOVE, target_hex=best)
    return agents.resolve(fight_model)(CulledView(state, area), unit)


# -- scripted manager / commander models --------------------------------------

MANAGER_VARIANTS = ("balanced", "prioritized_city", "seize_red_city", "killer", "hold")
COMMANDER_VARIANTS = ("balanced", "city", "kill", "hold")

_COMMANDER_TO_MANAGER_VARIANT = {
    "balanced": "balanced",
    "city": "prioritized_city",
    "kill": "killer",
    "hold": "hold",
}


def _nearest_hex(origin: HexCoord, hexes: list[HexCoord]) -> HexCoord:
    return min(hexes, key=lambda h: (euclid_dist(origin, h), h.col, h.row))


def scripted_area_choice(
    state: GameState,
    obs_space: AreaRect,
    units: list[Unit],
    faction: str,
    variant: str,
    current_area: AreaRect | None,
    last_choice: int | None,
) -> int:
    """Priority cascade shared by scripted managers and commanders.

    balanced: hold-city / unowned city / enemy-owned city / nearest enemy /
    own-owned city / center.  prioritized_city drops the enemy-unit step;
    seize_red_city and killer keep a single step with a center fallback;
    hold picks the cell containing the unit centroid.
    """
    origin = centroid(units)
    if variant == "hold":
        probe = origin if obs_space.contains(origin) else _nearest_hex(origin, list(obs_space.hexes()))
        return cell_index_of(obs_space, probe)

    enemy = opponent(faction)
    cities = [h for h in state.urban_hexes if obs_space.contains(h)]
    unowned = [h for h in cities if state.city_owner[h] is None]
    enemy_owned = [h for h in cities if state.city_owner[h] == enemy]
    own_owned = [h for h in cities if state.city_owner[h] == faction]
    enemies = [
        u.pos for u in state.units.values()
        if u.faction == enemy and obs_space.contains(u.pos)
    ]

    if variant == "seize_red_city":
        if enemy_owned:
            return cell_index_of(obs_space, _nearest_hex(origin, enemy_owned))
        return CENTER_CHOICE
    if variant == "killer":
        if enemies:
            return cell_index_of(obs_space, _nearest_hex(origin, enemies))
        return CENTER_CHOICE

    # balanced / prioritized_city cascade
    if current_area is not None and last_choice is not None:
        unit_on_city = any(
            u.pos in state.city_owner and obs_space.contains(u.pos) for u in units
        )
        if unit_on_city:
            return last_choice
    if unowned:
        return cell_index_of(obs_space, _nearest_hex(origin, unowned))
    if enemy_owned:
        return cell_index_of(obs_space, _nearest_hex(origin, enemy_owned))
    if variant == "balanced" and enemies:
        return cell_index_of(obs_space, _nearest_hex(origin, enemies))
    if own_owned:
        return cell_index_of(obs_space, _nearest_hex(origin, own_owned))
    return CENTER_CHOICE


def scripted_manager(
    state: GameState,
    hierarchy: Hierarchy,
    manager_id: int,
    operating_area: AreaRect,
    variant: str = "balanced",
) -> int:
    if variant not in MANAGER_VARIANTS:
        raise ValueError(f"unknown manager variant {variant!r}")
    node = hierarchy.managers[manager_id]
    units = hierarchy.effective_operators(state, manager_id)
    return scripted_area_choice(
        state, operating_area, units, node.faction, variant,
        node.assigned_area, node.last_choice,
    )


def scripted_commander(
    state: GameState,
    hierarchy: Hierarchy,
    commander_id: int,
    variant: str = "balanced",
) -> int:
    if variant not in COMMANDER_VARIANTS:
        raise ValueError(f"unknown commander variant {variant!r}")
    node = hierarchy.commanders[commander_id]
    units = hierarchy.effective_units_of_commander(state, commander_id)
    board = AreaRect(0, 0, state.dims.n_cols, state.dims.n_rows)
    return scripted_area_choice(
        state, board, units, node.faction,
        _COMMANDER_TO_MANAGER_VARIANT[variant],
        node.assigned_area, node.last_choice,
    )


# -- orchestration -------------------------------------------------------------


class HrlController:
    """Drives one faction's hierarchy: invokes commander/manager policies at
    their decision points and produces a game action per unit via the
    operator modules.  Policies may be scripted variant names or callables
    (state, hierarchy, node_id, obs_space) -> choice index."""

    def __init__(
        self,
        state: GameState,
        faction: str,
        manager_policy="balanced",
        commander_policy="balanced",
        operator_model: str = "pass_agg",
        cadence: int = COMMANDER_CADENCE,
        hierarchy: Hierarchy | None = None,
    ):
        self.hierarchy = hierarchy if hierarchy is not None else build_hierarchy(state)
        self.faction = faction
        self.manager_policy = manager_policy
        self.commander_policy = commander_policy
        self.operator_model = operator_model
        self.cadence = cadence
        self.trace: list[dict] = []
        self.step_index = 0

    def _board(self, state: GameState) -> AreaRect:
        return AreaRect(0, 0, state.dims.n_cols, state.dims.n_rows)

    def _operating_area(self, state: GameState, manager: EchelonNode) -> AreaRect:
        if manager.parent is not None:
            com = self.hierarchy.commanders[manager.parent]
            if com.assigned_area is not None:
                return com.assigned_area
        return self._board(state)

    def _choose_commander(self, state: GameState, node: EchelonNode) -> int:
        if callable(self.commander_policy):
            return self.commander_policy(state, self.hierarchy, node.id, self._board(state))
        return scripted_commander(state, self.hierarchy, node.id, self.commander_policy)

    def _choose_manager(self, state: GameState, node: EchelonNode, oa: AreaRect) -> int:
        if callable(self.manager_policy):
            return self.manager_policy(state, self.hierarchy, node.id, oa)
        return scripted_manager(state, self.hierarchy, node.id, oa, self.manager_policy)

    def _assign_commander(self, state: GameState, node: EchelonNode, choice: int) -> None:
        board = self._board(state)
        out_dim = min(OPERATING_DIM, board.width, board.height)
        node.assigned_area = make_area(board, choice, out_dim)
        node.last_choice = choice
        node.last_commander_phase = state.phase
        self.trace.append(
            {
                "kind": "operating_area",
                "commander": node.id,
                "phase": state.phase,
                "step": self.step_index,
                "choice": choice,
                "area": _rect_json(node.assigned_area),
            }
        )

    def _assign_manager(
        self, state: GameState, node: EchelonNode, choice: int, oa: AreaRect, reason: str
    ) -> None:
        out_dim = min(OBJECTIVE_DIM, oa.width, oa.height)
        node.assigned_area = make_area(oa, choice, out_dim)
        node.last_choice = choice
        ops = self.hierarchy.effective_operators(state, node.id)
        node.prev_gathered = all(node.assigned_area.contains(u.pos) for u in ops)
        self.trace.append(
            {
                "kind": "objective_area",
                "manager": node.id,
                "phase": state.phase,
                "step": self.step_index,
                "choice": choice,
                "reason": reason,
                "area": _rect_json(node.assigned_area),
                "operating_area": _rect_json(oa),
                "unit_positions": [[u.pos.col, u.pos.row] for u in ops],
            }
        )

    def decide(self, state: GameState, unit: Unit) -> Action:
        """Called once per unit action of this faction."""
        self.step_index += 1
        commander = self.hierarchy.commander_of(unit)
        if commander is not None and commander_needs_decision(state, commander, self.cadence):
            self._assign_commander(state, commander, self._choose_commander(state, commander))
        manager = self.hierarchy.manager_of(unit)
        if manager is None:
            return agents.resolve(self.operator_model)(FullView(state), unit)
        oa = self._operating_area(state, manager)
        ops = self.hierarchy.effective_operators(state, manager.id)
        if ops:
            if manager.assigned_area is not None and not oa.contains_rect(manager.assigned_area):
                # manager fell outside its (new) operating area: snap to the
                # nearest in-area objective before anything else
                probe = centroid(ops)
                target = _nearest_hex(probe, list(oa.hexes()))
                self._assign_manager(state, manager, cell_index_of(oa, target), oa, "snap")
            elif manager.assigned_area is None:
                self._assign_manager(
                    state, manager, self._choose_manager(state, manager, oa), oa, "start"
                )
            else:
                gathered = all(manager.assigned_area.contains(u.pos) for u in ops)
                if gathered and not manager.prev_gathered:
                    self._assign_manager(
                        state, manager, self._choose_manager(state, manager, oa), oa, "gathered"
                    )
                else:
                    manager.prev_gathered = gathered
        return operator_step(state, unit, manager.assigned_area, self.operator_model)


def _rect_json(r: AreaRect | None):
    if r is None:
        return None
    return [r.min_col, r.min_row, r.width, r.height]
