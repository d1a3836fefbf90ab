"""Game rules: state, legal actions, movement, combat, city control, scoring.

A phase is one entire turn for one faction; each of its units takes one
action per phase, in ascending unit-id order.  Blue moves first.  City
points (24 / n_cities per owned city) accrue at the end of every phase
to the current owner.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .hexgrid import BoardDims, HexCoord, neighbors

BLUE = "blue"
RED = "red"

TERRAIN_CLEAR = "clear"
TERRAIN_URBAN = "urban"

CITY_POINTS_PER_PHASE = 24.0
REMOVAL_THRESHOLD = 50.0
DEFAULT_ATTACK_DAMAGE = 10.0

PASS = "pass"
MOVE = "move"
ATTACK = "attack"


def opponent(faction: str) -> str:
    return RED if faction == BLUE else BLUE


@dataclass
class Unit:
    id: int
    faction: str
    kind: str = "infantry"
    strength: float = 100.0
    pos: HexCoord = HexCoord(0, 0)
    can_move_this_phase: bool = True
    parent_manager: int | None = None
    parent_commander: int | None = None


@dataclass(frozen=True)
class Action:
    unit_id: int
    kind: str  # PASS | MOVE | ATTACK
    target_hex: HexCoord | None = None  # MOVE
    target_unit: int | None = None  # ATTACK


@dataclass(frozen=True)
class Event:
    kind: str
    data: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.data}


@dataclass
class ScoreBreakdown:
    blue_city: float = 0.0
    blue_combat: float = 0.0
    red_city: float = 0.0
    red_combat: float = 0.0

    def total(self) -> float:
        return self.blue_city + self.blue_combat - (self.red_city + self.red_combat)

    def copy(self) -> "ScoreBreakdown":
        return replace(self)


class IllegalActionError(ValueError):
    pass


class GameState:
    """Full mutable simulation state, exclusively owned by one game loop."""

    def __init__(
        self,
        dims: BoardDims,
        units: list[Unit],
        urban_hexes: list[HexCoord],
        num_phases: int,
        seed: int = 0,
        deterministic_mode: bool = True,
        attack_damage: float = DEFAULT_ATTACK_DAMAGE,
        early_termination: bool = True,
    ):
        self.dims = dims
        self.units: dict[int, Unit] = {u.id: u for u in units}
        if len(self.units) != len(units):
            raise ValueError("duplicate unit ids")
        self.occupied: dict[HexCoord, int] = {}
        for u in units:
            if not dims.contains(u.pos):
                raise ValueError(f"unit {u.id} off board at {u.pos}")
            if u.pos in self.occupied:
                raise ValueError(f"units share hex {u.pos}")
            if u.strength < REMOVAL_THRESHOLD:
                raise ValueError(f"unit {u.id} below removal threshold at creation")
            self.occupied[u.pos] = u.id
        self.urban_hexes = list(urban_hexes)
        self.city_owner: dict[HexCoord, str | None] = {h: None for h in urban_hexes}
        # initial occupation claims the city
        for h in urban_hexes:
            if h in self.occupied:
                self.city_owner[h] = self.units[self.occupied[h]].faction
        self.num_phases = num_phases
        self.phase = 0
        self.faction_on_move = BLUE
        self.score = ScoreBreakdown()
        self.rng = random.Random(seed)
        self.seed = seed
        self.deterministic_mode = deterministic_mode
        self.attack_damage = attack_damage
        self.early_termination = early_termination
        self.initial_strength = {
            BLUE: sum(u.strength for u in units if u.faction == BLUE),
            RED: sum(u.strength for u in units if u.faction == RED),
        }
        self.initial_unit_count = len(units)
        self._phase_order: list[int] = []
        self._cursor = 0
        self._begin_phase()
        self._skip_empty_phases()

    # -- phase bookkeeping ------------------------------------------------

    def _begin_phase(self) -> None:
        self._phase_order = sorted(
            uid for uid, u in self.units.items() if u.faction == self.faction_on_move
        )
        self._cursor = 0
        for uid in self._phase_order:
            self.units[uid].can_move_this_phase = True

    def _end_phase(self, events: list[Event]) -> None:
        n_cities = len(self.urban_hexes)
        pts_blue = pts_red = 0.0
        if n_cities:
            per_city = CITY_POINTS_PER_PHASE / n_cities
            for h in self.urban_hexes:
                owner = self.city_owner[h]
                if owner == BLUE:
                    pts_blue += per_city
                elif owner == RED:
                    pts_red += per_city
        self.score.blue_city += pts_blue
        self.score.red_city += pts_red
        events.append(
            Event(
                "phase_ended",
                {
                    "phase": self.phase,
                    "city_points_blue": pts_blue,
                    "city_points_red": pts_red,
                },
            )
        )
        self.phase += 1
        self.faction_on_move = opponent(self.faction_on_move)
        self._begin_phase()
        if self.is_terminal():
            events.append(Event("game_ended", {"score": self.game_score()}))

    def _skip_empty_phases(self, events: list[Event] | None = None) -> None:
        # A faction with no units forfeits its phase; city points still accrue.
        ev = events if events is not None else []
        while not self.is_terminal() and not self._phase_order:
            self._end_phase(ev)

    # -- queries -----------------------------------------------------------

    def roster(self, faction: str) -> list[Unit]:
        return [u for u in self.units.values() if u.faction == faction]

    def combat_power(self, faction: str) -> float:
        return sum(u.strength for u in self.units.values() if u.faction == faction)

    def game_score(self) -> float:
        return self.score.total()

    def is_terminal(self) -> bool:
        if self.phase >= self.num_phases:
            return True
        if self.early_termination:
            blue_alive = red_alive = False
            for u in self.units.values():
                if u.faction == BLUE:
                    blue_alive = True
                else:
                    red_alive = True
            if not blue_alive or not red_alive:
                return True
        return False

    def current_unit(self) -> Unit | None:
        """The next unit that must act, or None if the game is terminal."""
        if self.is_terminal():
            return None
        while self._cursor < len(self._phase_order):
            uid = self._phase_order[self._cursor]
            u = self.units.get(uid)
            if u is not None and u.can_move_this_phase:
                return u
            self._cursor += 1
        return None

    def is_free(self, h: HexCoord) -> bool:
        return self.dims.contains(h) and h not in self.occupied

    def unit_at(self, h: HexCoord) -> Unit | None:
        uid = self.occupied.get(h)
        return self.units.get(uid) if uid is not None else None

    def legal_actions(self, unit_id: int) -> list[Action]:
        u = self.units.get(unit_id)
        if u is None:
            raise IllegalActionError(f"unknown unit id {unit_id}")
        if u.faction != self.faction_on_move or not u.can_move_this_phase:
            raise IllegalActionError(f"unit {unit_id} is not on move")
        actions: list[Action] = []
        for n in neighbors(u.pos, self.dims):
            other = self.unit_at(n)
            if other is None:
                actions.append(Action(unit_id, MOVE, target_hex=n))
            elif other.faction != u.faction:
                actions.append(Action(unit_id, ATTACK, target_unit=other.id))
        actions.append(Action(unit_id, PASS))
        return actions

    # -- mutation ----------------------------------------------------------

    def choose(self, items: list):
        """Uniform choice via the engine RNG; lowest-id under deterministic mode."""
        if self.deterministic_mode:
            return min(items, key=lambda u: u.id)
        return self.rng.choice(items)

    def resolve_attack(self, attacker_id: int, defender_id: int) -> list[Event]:
        attacker = self.units.get(attacker_id)
        defender = self.units.get(defender_id)
        if attacker is None or defender is None:
            raise IllegalActionError("unknown combatant")
        if defender.faction == attacker.faction:
            raise IllegalActionError("cannot attack friendly unit")
        if defender.pos not in neighbors(attacker.pos, self.dims):
            raise IllegalActionError("target not adjacent")
        events: list[Event] = []
        dealt = min(self.attack_damage, defender.strength)
        defender.strength -= dealt
        self._award_combat(attacker.faction, dealt)
        events.append(
            Event("damaged", {"unit": defender_id, "amount": dealt, "by": attacker_id})
        )
        if defender.strength < REMOVAL_THRESHOLD:
            remaining = defender.strength
            self._award_combat(attacker.faction, remaining)
            del self.units[defender_id]
            del self.occupied[defender.pos]
            events.append(
                Event(
                    "removed",
                    {"unit": defender_id, "awarded_strength": remaining, "by": attacker_id},
                )
            )
        return events

    def _award_combat(self, scoring_faction: str, points: float) -> None:
        if scoring_faction == BLUE:
            self.score.blue_combat += points
        else:
            self.score.red_combat += points

    def apply_action(self, a: Action) -> list[Event]:
        if self.is_terminal():
            raise IllegalActionError("game is terminal")
        u = self.units.get(a.unit_id)
        if u is None:
            raise IllegalActionError(f"unknown unit id {a.unit_id}")
        cur = self.current_unit()
        if cur is None or cur.id != a.unit_id:
            raise IllegalActionError(f"unit {a.unit_id} is not on move")
        events: list[Event] = []
        if a.kind == PASS:
            events.append(Event("passed", {"unit": u.id}))
        elif a.kind == MOVE:
            dest = a.target_hex
            if dest is None or dest not in neighbors(u.pos, self.dims) or not self.is_free(dest):
                raise IllegalActionError(f"illegal move target {dest}")
            del self.occupied[u.pos]
            self.occupied[dest] = u.id
            u.pos = dest
            events.append(Event("moved", {"unit": u.id, "to": [dest.col, dest.row]}))
            if dest in self.city_owner and self.city_owner[dest] != u.faction:
                self.city_owner[dest] = u.faction
                events.append(
                    Event(
                        "city_captured",
                        {"hex": [dest.col, dest.row], "new_owner": u.faction, "by": u.id},
                    )
                )
        elif a.kind == ATTACK:
            if a.target_unit is None:
                raise IllegalActionError("attack requires a target unit")
            events.extend(self.resolve_attack(u.id, a.target_unit))
        else:
            raise IllegalActionError(f"unknown action kind {a.kind!r}")

        u.can_move_this_phase = False
        self._cursor += 1
        if self.early_termination and self.is_terminal():
            events.append(Event("game_ended", {"score": self.game_score()}))
            return events
        if self.current_unit() is None and not self.is_terminal():
            self._end_phase(events)
            self._skip_empty_phases(events)
        return events

    # -- cloning -----------------------------------------------------------

    def clone(self) -> "GameState":
        """Deep copy for rollouts; RNG state is copied too."""
        g = object.__new__(GameState)
        g.dims = self.dims
        g.units = {uid: replace(u) for uid, u in self.units.items()}
        g.occupied = dict(self.occupied)
        g.urban_hexes = list(self.urban_hexes)
        g.city_owner = dict(self.city_owner)
        g.num_phases = self.num_phases
        g.phase = self.phase
        g.faction_on_move = self.faction_on_move
        g.score = self.score.copy()
        g.rng = random.Random()
        g.rng.setstate(self.rng.getstate())
        g.seed = self.seed
        g.deterministic_mode = self.deterministic_mode
        g.attack_damage = self.attack_damage
        g.early_termination = self.early_termination
        g.initial_strength = dict(self.initial_strength)
        g.initial_unit_count = self.initial_unit_count
        g._phase_order = list(self._phase_order)
        g._cursor = self._cursor
        return g


def game_score(s: GameState) -> float:
    return s.game_score()


def is_terminal(s: GameState) -> bool:
    return s.is_terminal()


def combat_power(s: GameState, faction: str) -> float:
    return s.combat_power(faction)
