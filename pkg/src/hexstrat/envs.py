"""RL environment facades over the game engine.

One echelon is exposed to the external caller; everything else (the
adversary, subordinate operators, other friendly managers) runs under
configured scripted policies.  Operator steps are per unit action;
manager and commander steps span their whole decision interval (SMDP),
so one step can cover many unit actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import ATTACK, BLUE, MOVE, PASS, RED, Action, GameState, Unit
from .hexgrid import AreaRect, neighbors_by_direction
from .hierarchy import (
    COMMANDER,
    HrlController,
    MANAGER,
    OBJECTIVE_DIM,
    OPERATING_DIM,
    OPERATOR,
    make_area,
    scripted_commander,
    scripted_manager,
)
from .multimodel import RewardSpec, reward_boron, reward_manager
from .observation import build_commander_obs, build_global, build_manager_obs, localized_decay
from .play import flat_policy
from .replay import ReplayWriter
from .scenario import HierarchyCounts, ScenarioParams, ScenarioStream

OPERATOR_ACTIONS = 7  # 0 = pass, 1..6 = neighbor direction
AREA_ACTIONS = 9  # row-major 3x3 grid cell


@dataclass
class EnvConfig:
    echelon: str = OPERATOR
    board_length: int = 10
    scenario: ScenarioParams | None = None
    seed: int = 0
    cycle: int = 0
    adversary: str = "pass_agg"
    reward: RewardSpec | None = None
    operator_model: str = "pass_agg"
    manager_variant: str = "balanced"
    commander_variant: str = "balanced"
    deterministic: bool = True
    strict: bool = False  # raise on illegal actions instead of mapping to Pass
    replay_path: str | None = None

    def resolved_scenario(self) -> ScenarioParams:
        if self.scenario is not None:
            return self.scenario
        if self.echelon == OPERATOR:
            return ScenarioParams(self.board_length)
        return ScenarioParams(
            self.board_length,
            unit_count_mode=HierarchyCounts(1),
            hierarchy_grouping=True,
        )

    def resolved_reward(self) -> RewardSpec:
        if self.reward is not None:
            return self.reward
        return RewardSpec(echelon=self.echelon)

    def to_json(self) -> dict:
        return {
            "echelon": self.echelon,
            "board_length": self.board_length,
            "seed": self.seed,
            "cycle": self.cycle,
            "adversary": self.adversary,
            "operator_model": self.operator_model,
            "manager_variant": self.manager_variant,
            "commander_variant": self.commander_variant,
            "deterministic": self.deterministic,
        }


@dataclass
class StepResult:
    obs: np.ndarray
    reward: float
    done: bool
    info: dict = field(default_factory=dict)


def operator_action(state: GameState, unit: Unit, a: int) -> Action | None:
    """Decode a discrete operator action; None if illegal here."""
    if not 0 <= a < OPERATOR_ACTIONS:
        raise ValueError(f"operator action must be in [0,{OPERATOR_ACTIONS}), got {a}")
    if a == 0:
        return Action(unit.id, PASS)
    n = neighbors_by_direction(unit.pos, state.dims)[a - 1]
    if n is None:
        return None
    other = state.unit_at(n)
    if other is None:
        return Action(unit.id, MOVE, target_hex=n)
    if other.faction != unit.faction:
        return Action(unit.id, ATTACK, target_unit=other.id)
    return None


class _BaseEnv:
    def __init__(self, cfg: EnvConfig):
        self.cfg = cfg
        self.stream = ScenarioStream(cfg.seed, cfg.cycle, cfg.resolved_scenario())
        self.reward_spec = cfg.resolved_reward()
        self.episode = 0
        self.state: GameState | None = None
        self.steps = 0
        self._writer: ReplayWriter | None = None
        self._last_obs: np.ndarray | None = None

    def _new_game(self) -> None:
        if self._writer is not None:
            self._writer.close()
            self._writer = None
        spec = self.stream.draw(self.episode)
        self.episode += 1
        self.state = spec.make_state(deterministic=self.cfg.deterministic)
        self.steps = 0
        self._record_index = 0
        if self.cfg.replay_path is not None:
            path = self.cfg.replay_path
            if self.episode > 1:
                path = f"{path}.{self.episode - 1}"
            self._writer = ReplayWriter(path, spec.to_json(), self.cfg.to_json())

    def _log(self, unit: Unit, action: Action, events) -> None:
        if self._writer is None:
            return
        s = self.state
        self._writer.append(
            {
                "kind": "step",
                "step": self._record_index,
                "phase": s.phase,
                "unit": unit.id,
                "faction": unit.faction,
                "action": {
                    "kind": action.kind,
                    "hex": [action.target_hex.col, action.target_hex.row]
                    if action.target_hex
                    else None,
                    "target": action.target_unit,
                },
                "events": [e.to_json() for e in events],
                "score": {
                    "blue_city": s.score.blue_city,
                    "blue_combat": s.score.blue_combat,
                    "red_city": s.score.red_city,
                    "red_combat": s.score.red_combat,
                    "total": s.game_score(),
                },
            }
        )
        self._record_index += 1

    def _apply(self, unit: Unit, action: Action) -> None:
        events = self.state.apply_action(action)
        self._log(unit, action, events)

    def close(self) -> None:
        if self._writer is not None:
            self._writer.close()
            self._writer = None


class OperatorEnv(_BaseEnv):
    """One decision per friendly unit, in engine order; 18x7x7 observations."""

    action_space_n = OPERATOR_ACTIONS

    def __init__(self, cfg: EnvConfig):
        super().__init__(cfg)
        self._adversary = flat_policy(cfg.adversary)
        self._score_mark = 0.0
        self._s_o = 1.0

    def _advance_adversary(self) -> None:
        s = self.state
        while not s.is_terminal():
            unit = s.current_unit()
            if unit is None or unit.faction == BLUE:
                break
            self._apply(unit, self._adversary(s, unit))

    def _obs(self) -> np.ndarray:
        unit = self.state.current_unit()
        t = build_global(self.state, unit.id)
        return localized_decay(t, unit.pos)

    def reset(self) -> np.ndarray:
        self._new_game()
        self._advance_adversary()
        self._score_mark = self.state.game_score()
        self._s_o = max(self.state.combat_power(BLUE), 1e-9)
        self._last_obs = self._obs()
        return self._last_obs

    def step(self, a: int) -> StepResult:
        s = self.state
        unit = s.current_unit()
        if unit is None:
            raise RuntimeError("step() after episode end; call reset()")
        action = operator_action(s, unit, a)
        illegal = action is None
        if illegal:
            if self.cfg.strict:
                raise ValueError(f"illegal action {a} for unit {unit.id} at {unit.pos}")
            action = Action(unit.id, PASS)
        self._apply(unit, action)
        self._advance_adversary()
        self.steps += 1
        done = s.is_terminal()
        delta = s.game_score() - self._score_mark
        self._score_mark = s.game_score()
        reward = reward_boron(
            delta, s.combat_power(BLUE), self._s_o, done, self.reward_spec
        )
        if not done:
            self._last_obs = self._obs()
        info = {
            "raw_delta": delta,
            "phase": s.phase,
            "illegal": illegal,
            "unit": unit.id,
        }
        return StepResult(self._last_obs, reward, done, info)


class _DecisionRequired(Exception):
    def __init__(self, node_id: int, obs_space: AreaRect):
        self.node_id = node_id
        self.obs_space = obs_space


class ManagerEnv(_BaseEnv):
    """Exposes the lowest-id blue manager; 17x5x5 observations, 9 actions.
    One step spans the whole interval until that manager's next decision."""

    action_space_n = AREA_ACTIONS
    _out_dim = OBJECTIVE_DIM

    def __init__(self, cfg: EnvConfig):
        super().__init__(cfg)
        self._adversary = flat_policy(cfg.adversary)
        self._pending: int | None = None

    # -- policy callbacks handed to the controller -------------------------

    def _manager_policy(self, state, hierarchy, mid, oa):
        if mid == self.exposed_id:
            if self._pending is None:
                raise _DecisionRequired(mid, oa)
            choice = self._pending
            self._pending = None
            return choice
        return scripted_manager(state, hierarchy, mid, oa, self.cfg.manager_variant)

    def _commander_policy(self, state, hierarchy, cid, board):
        return scripted_commander(state, hierarchy, cid, self.cfg.commander_variant)

    # -- game plumbing ------------------------------------------------------

    def _make_controller(self) -> HrlController:
        return HrlController(
            self.state,
            BLUE,
            manager_policy=self._manager_policy,
            commander_policy=self._commander_policy,
            operator_model=self.cfg.operator_model,
        )

    def _pick_exposed(self) -> int:
        ids = sorted(
            u.parent_manager
            for u in self.state.units.values()
            if u.faction == BLUE and u.parent_manager is not None
        )
        if not ids:
            raise ValueError("manager env requires a hierarchical scenario")
        return ids[0]

    def _group_strength(self) -> float:
        return sum(
            u.strength
            for u in self.state.units.values()
            if u.parent_manager == self.exposed_id
        )

    def _other_areas(self) -> list[AreaRect]:
        out = []
        for mid, node in self._ctl.hierarchy.managers.items():
            if mid != self.exposed_id and node.faction == BLUE and node.assigned_area:
                out.append(node.assigned_area)
        return out

    def _obs(self, oa: AreaRect) -> np.ndarray:
        return build_manager_obs(self.state, self.exposed_id, oa, self._other_areas())

    def _advance(self):
        """Play until the exposed echelon must decide, or terminal.
        Returns the pending _DecisionRequired or None if terminal."""
        s = self.state
        while not s.is_terminal():
            unit = s.current_unit()
            if unit is None:
                break
            if unit.faction == RED:
                self._apply(unit, self._adversary(s, unit))
                continue
            try:
                action = self._ctl.decide(s, unit)
            except _DecisionRequired as need:
                return need
            self._apply(unit, action)
        return None

    def _duplicate_area(self) -> bool:
        mine = self._ctl.hierarchy.managers[self.exposed_id].assigned_area
        return any(area == mine for area in self._other_areas())

    def reset(self) -> np.ndarray:
        self._new_game()
        self.exposed_id = self._pick_exposed()
        self._ctl = self._make_controller()
        self._pending = None
        need = self._advance()
        if need is None:
            raise RuntimeError("game ended before the exposed manager's first decision")
        self._need = need
        self._s_o = max(self._group_strength(), 1e-9)
        self._score_mark = self.state.game_score()
        self._last_obs = self._obs(need.obs_space)
        return self._last_obs

    def _planned_area(self, choice: int) -> AreaRect:
        oa = self._need.obs_space
        out_dim = min(self._out_dim, oa.width, oa.height)
        return make_area(oa, choice, out_dim)

    def step(self, a: int) -> StepResult:
        if not 0 <= a < AREA_ACTIONS:
            raise ValueError(f"area action must be in [0,{AREA_ACTIONS}), got {a}")
        # duplication is judged at assignment time, against the areas the
        # other group leaders hold right now
        duplicate = any(
            area == self._planned_area(a) for area in self._other_areas()
        )
        self._pending = a
        need = self._advance()
        self.steps += 1
        s = self.state
        done = need is None
        r_m = s.game_score() - self._score_mark
        self._score_mark = s.game_score()
        reward = reward_manager(
            r_m, duplicate, self._group_strength(), self._s_o, done, self.reward_spec
        )
        if not done:
            self._need = need
            self._last_obs = self._obs(need.obs_space)
        info = {
            "raw_delta": r_m,
            "phase": s.phase,
            "duplicate": duplicate,
            "manager": self.exposed_id,
        }
        return StepResult(self._last_obs, reward, done, info)


class CommanderEnv(ManagerEnv):
    """Exposes the lowest-id blue commander; decisions on the phase cadence."""

    _out_dim = OPERATING_DIM

    def _manager_policy(self, state, hierarchy, mid, oa):
        return scripted_manager(state, hierarchy, mid, oa, self.cfg.manager_variant)

    def _commander_policy(self, state, hierarchy, cid, board):
        if cid == self.exposed_id:
            if self._pending is None:
                raise _DecisionRequired(cid, board)
            choice = self._pending
            self._pending = None
            return choice
        return scripted_commander(state, hierarchy, cid, self.cfg.commander_variant)

    def _pick_exposed(self) -> int:
        ids = sorted(
            u.parent_commander
            for u in self.state.units.values()
            if u.faction == BLUE and u.parent_commander is not None
        )
        if not ids:
            raise ValueError("commander env requires a hierarchical scenario")
        return ids[0]

    def _group_strength(self) -> float:
        return sum(
            u.strength
            for u in self.state.units.values()
            if u.parent_commander == self.exposed_id
        )

    def _other_areas(self) -> list[AreaRect]:
        out = []
        for cid, node in self._ctl.hierarchy.commanders.items():
            if cid != self.exposed_id and node.faction == BLUE and node.assigned_area:
                out.append(node.assigned_area)
        return out

    def _duplicate_area(self) -> bool:
        mine = self._ctl.hierarchy.commanders[self.exposed_id].assigned_area
        return any(area == mine for area in self._other_areas())

    def _obs(self, board: AreaRect) -> np.ndarray:
        return build_commander_obs(self.state, self.exposed_id, self._other_areas())


def make_env(cfg: EnvConfig) -> _BaseEnv:
    if cfg.echelon == OPERATOR:
        return OperatorEnv(cfg)
    if cfg.echelon == MANAGER:
        return ManagerEnv(cfg)
    if cfg.echelon == COMMANDER:
        return CommanderEnv(cfg)
    raise ValueError(f"unknown echelon {cfg.echelon!r}")
