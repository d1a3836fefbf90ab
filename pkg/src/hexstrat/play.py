"""Policy adapters and game playout.

A policy is a callable (state, unit) -> Action for one faction.  This
module provides adapters over the scripted behavior models and the
hierarchy controller, plus a loop that runs a game to termination.
"""

from __future__ import annotations

from . import agents
from .engine import Action, GameState, Unit
from .hierarchy import HrlController
from .views import FullView


def flat_policy(model: str):
    """Every unit runs the same standalone behavior model."""
    fn = agents.resolve(model)

    def policy(state: GameState, unit: Unit) -> Action:
        return fn(FullView(state), unit)

    return policy


def hrl_policy(
    state: GameState,
    faction: str,
    manager_policy="balanced",
    commander_policy="balanced",
    operator_model: str = "pass_agg",
):
    """Stateful hierarchy controller bound to one game."""
    ctl = HrlController(
        state,
        faction,
        manager_policy=manager_policy,
        commander_policy=commander_policy,
        operator_model=operator_model,
    )

    def policy(s: GameState, unit: Unit) -> Action:
        return ctl.decide(s, unit)

    policy.controller = ctl
    return policy


def playout(state: GameState, blue_policy, red_policy, max_steps: int | None = None) -> GameState:
    """Run the game to termination in place and return the same state."""
    steps = 0
    while not state.is_terminal():
        unit = state.current_unit()
        if unit is None:
            break
        policy = blue_policy if unit.faction == "blue" else red_policy
        state.apply_action(policy(state, unit))
        steps += 1
        if max_steps is not None and steps >= max_steps:
            break
    return state
