"""Multi-model selection: score predictors, argmax model choice, rewards.

A multi-model carries an ordered registry of (behavior model, score
predictor) pairs.  At each decision it asks every predictor for the
predicted final blue score and delegates to the behavior model with the
highest prediction (ties break to the lowest registry index).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import agents
from .engine import Action, GameState, Unit
from .play import flat_policy, playout
from .views import FullView

OPERATOR = "operator"
MANAGER = "manager"
COMMANDER = "commander"


class ConstantPredictor:
    def __init__(self, value: float):
        self.value = float(value)

    def predict(self, s) -> float:
        return self.value


class LinearPredictor:
    """bias + dot(weights, flattened observation).

    Accepts a prebuilt observation tensor, or a game state when an
    obs_builder callable was supplied.
    """

    def __init__(self, echelon: str, obs_shape, bias: float, weights, obs_builder=None):
        self.echelon = echelon
        self.obs_shape = tuple(int(x) for x in obs_shape)
        self.bias = float(bias)
        self.weights = np.asarray(weights, dtype=np.float64).ravel()
        expected = int(np.prod(self.obs_shape))
        if self.weights.size != expected:
            raise ValueError(
                f"weight length {self.weights.size} != observation size {expected} "
                f"for shape {self.obs_shape}"
            )
        self.obs_builder = obs_builder

    def predict(self, s) -> float:
        if isinstance(s, np.ndarray):
            obs = s
        elif self.obs_builder is not None:
            obs = self.obs_builder(s)
        else:
            raise TypeError("LinearPredictor needs an observation tensor or an obs_builder")
        flat = np.asarray(obs, dtype=np.float64).ravel()
        if flat.size != self.weights.size:
            raise ValueError(
                f"observation size {flat.size} != weight length {self.weights.size}"
            )
        return self.bias + float(self.weights @ flat)


def save_linear_predictor(p: LinearPredictor, path) -> None:
    with open(path, "w") as f:
        json.dump(
            {
                "echelon": p.echelon,
                "obs_shape": list(p.obs_shape),
                "bias": p.bias,
                "weights": p.weights.tolist(),
            },
            f,
        )


def load_linear_predictor(path, obs_builder=None) -> LinearPredictor:
    with open(path) as f:
        doc = json.load(f)
    return LinearPredictor(
        doc["echelon"], doc["obs_shape"], doc["bias"], doc["weights"], obs_builder
    )


class RolloutOracle:
    """Exact score predictor: clone the state and play the game out with
    blue following `model` and red following `adversary`.

    `policy_factory(model, clone)` may override the default flat-policy
    pairing (for manager or commander echelon rollouts).
    """

    def __init__(
        self,
        model: str,
        adversary: str = "pass_agg",
        policy_factory=None,
        max_steps: int | None = None,
    ):
        self.model = model
        self.adversary = adversary
        self.policy_factory = policy_factory
        self.max_steps = max_steps

    def predict(self, s: GameState) -> float:
        clone = s.clone()
        if self.policy_factory is not None:
            blue, red = self.policy_factory(self.model, clone)
        else:
            blue, red = flat_policy(self.model), flat_policy(self.adversary)
        playout(clone, blue, red, max_steps=self.max_steps)
        return clone.game_score()


class ModelRegistry:
    """Ordered (behavior model id, predictor) pairs for one echelon."""

    def __init__(self, entries, echelon: str = OPERATOR):
        entries = list(entries)
        if not entries:
            raise ValueError("registry must be nonempty")
        ids = [mid for mid, _ in entries]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate model ids in registry: {ids}")
        self.entries = entries
        self.echelon = echelon

    def __len__(self) -> int:
        return len(self.entries)

    def ids(self) -> list[str]:
        return [mid for mid, _ in self.entries]


def select_model(registry: ModelRegistry, s) -> int:
    """Index of the highest prediction; ties break to the lowest index."""
    best = 0
    best_y = registry.entries[0][1].predict(s)
    for i in range(1, len(registry.entries)):
        y = registry.entries[i][1].predict(s)
        if y > best_y:
            best, best_y = i, y
    return best


class MultiModel:
    """Behavior model that re-selects a constituent at every decision."""

    def __init__(self, registry: ModelRegistry):
        self.registry = registry
        self.usage: Counter = Counter()

    def decide(self, state: GameState, unit: Unit) -> Action:
        idx = select_model(self.registry, state)
        mid = self.registry.entries[idx][0]
        self.usage[mid] += 1
        return agents.resolve(mid)(FullView(state), unit)

    def policy(self):
        def fn(state: GameState, unit: Unit) -> Action:
            return self.decide(state, unit)

        return fn


def multimodel_decide(registry: ModelRegistry, state: GameState, unit: Unit,
                      usage: Counter | None = None) -> Action:
    idx = select_model(registry, state)
    mid = registry.entries[idx][0]
    if usage is not None:
        usage[mid] += 1
    return agents.resolve(mid)(FullView(state), unit)


# -- engineered rewards -------------------------------------------------------


@dataclass(frozen=True)
class RewardSpec:
    b_t: float = 25.0  # terminal bonus
    p_g: float = 25.0  # duplicate-objective penalty
    echelon: str = OPERATOR
    kill_weight: float = 0.0
    city_weight: float = 0.0
    loss_weight: float = 0.0
    terminal_kill_bonus: float = 0.0
    terminal_capture_bonus: float = 0.0
    scale_by_preservation: bool = True

    def __post_init__(self):
        if self.b_t < 0 or self.p_g < 0:
            raise ValueError("bonus and penalty must be >= 0")


def reward_boron(r_raw: float, s_c: float, s_o: float, terminal: bool,
                 spec: RewardSpec = RewardSpec()) -> float:
    """max(R_raw, 0) * (S_c / S_o) + B_t * I_t"""
    if s_o <= 0:
        raise ValueError("original strength must be > 0")
    return max(r_raw, 0.0) * (s_c / s_o) + (spec.b_t if terminal else 0.0)


def reward_manager(r_m: float, duplicate: bool, s_mc: float, s_mo: float,
                   terminal: bool, spec: RewardSpec = RewardSpec(echelon=MANAGER)) -> float:
    """max(R_m - P_g * dup, 0) * (S_mc / S_mo) + B_t * I_t"""
    if s_mo <= 0:
        raise ValueError("original group strength must be > 0")
    base = r_m - (spec.p_g if duplicate else 0.0)
    return max(base, 0.0) * (s_mc / s_mo) + (spec.b_t if terminal else 0.0)


def reward_variant(
    kill_points: float,
    capture_points: float,
    loss_points: float,
    s_c: float,
    s_o: float,
    eliminated_all: bool,
    captured_all: bool,
    spec: RewardSpec,
) -> float:
    """Weighted interval components, optionally scaled by the force
    preservation ratio, plus terminal objective bonuses."""
    if s_o <= 0:
        raise ValueError("original strength must be > 0")
    base = (
        spec.kill_weight * kill_points
        + spec.city_weight * capture_points
        - spec.loss_weight * loss_points
    )
    base = max(base, 0.0)
    if spec.scale_by_preservation:
        base *= s_c / s_o
    if eliminated_all:
        base += spec.terminal_kill_bonus
    if captured_all:
        base += spec.terminal_capture_bonus
    return base


# Named weight tables for the qualitative reward variants; the exact
# numbers are this package's defaults, not sourced values.
VARIANT_PRESETS = {
    "rl_kill": RewardSpec(kill_weight=1.0, terminal_kill_bonus=25.0),
    "rl_occupy_city": RewardSpec(city_weight=1.0, terminal_capture_bonus=25.0),
    "rl_kamikaze": RewardSpec(kill_weight=1.0, terminal_kill_bonus=25.0,
                              scale_by_preservation=False),
    "rl_preserve": RewardSpec(kill_weight=0.5, city_weight=0.5, loss_weight=1.0),
}
