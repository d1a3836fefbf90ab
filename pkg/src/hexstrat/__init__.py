"""Deterministic hex-board combat simulation with hierarchical agents.

Modules:
  hexgrid     hex coordinates, neighbors, distances, rectangles
  engine      game rules, legal actions, combat, scoring
  scenario    seeded scenario generation and the scenario stream
  observation observation tensors and spatial abstractions
  agents      scripted operator behavior models
  hierarchy   commander/manager/operator orchestration
  multimodel  score predictors, argmax model selection, rewards
  envs        RL environment facades (reset/step)
  replay      JSONL replay logs
  harness     batch evaluation CLI and the play/replay HTTP service
"""

__version__ = "0.1.0"

from .engine import BLUE, RED, Action, GameState, Unit  # noqa: F401
from .hexgrid import AreaRect, BoardDims, HexCoord  # noqa: F401
from .scenario import ScenarioParams, ScenarioSpec  # noqa: F401
