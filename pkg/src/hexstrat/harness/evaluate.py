"""Batch match evaluation: policy resolution, N-game runs, CSV reports.

A policy spec is either a behavior-model name ("pass_agg", "city", ...),
a JSON config path ending in .json describing a multi-model or an HRL
stack, or one of the shorthands "multimodel" and "hrl" with default
compositions.  Games are independent; HEXSTRAT_WORKERS > 1 runs them in
a process pool, with results merged in submission order.
"""

from __future__ import annotations

import json
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .. import agents
from ..engine import BLUE, RED, GameState
from ..multimodel import (
    ConstantPredictor,
    ModelRegistry,
    MultiModel,
    RolloutOracle,
    load_linear_predictor,
)
from ..play import flat_policy, hrl_policy
from ..replay import ReplayWriter
from ..scenario import ScenarioParams, ScenarioSpec, ScenarioStream

CSV_SCHEMA = "index,seed,score,phases,blue_losses,red_losses"

DEFAULT_MULTIMODEL = ("pass", "agg", "city", "shootback")


# -- policy resolution --------------------------------------------------------


def _predictor_from_doc(doc: dict, adversary: str):
    kind = doc.get("predictor", "rollout")
    if kind == "rollout":
        return RolloutOracle(doc["model"], doc.get("adversary", adversary))
    if kind == "constant":
        return ConstantPredictor(doc["value"])
    if kind == "linear":
        return load_linear_predictor(doc["path"])
    raise ValueError(f"unknown predictor kind {kind!r}")


def make_policy(spec, state: GameState, faction: str):
    """Instantiate a per-game policy callable (state, unit) -> Action.
    Returns (policy, usage_counter_or_None)."""
    if isinstance(spec, str) and spec in agents.REGISTRY:
        return flat_policy(spec), None
    doc = None
    if isinstance(spec, dict):
        doc = spec
    elif spec == "multimodel":
        doc = {"kind": "multimodel", "models": list(DEFAULT_MULTIMODEL)}
    elif spec == "hrl":
        doc = {"kind": "hrl"}
    elif isinstance(spec, str) and spec.endswith(".json"):
        with open(spec) as f:
            doc = json.load(f)
    if doc is None:
        raise ValueError(
            f"unresolvable policy spec {spec!r}; expected a model name "
            f"({sorted(agents.REGISTRY)}), 'multimodel', 'hrl', or a .json path"
        )
    kind = doc.get("kind")
    if kind == "multimodel":
        adversary = doc.get("adversary", "pass_agg")
        entries = []
        for m in doc["models"]:
            if isinstance(m, str):
                entries.append((m, RolloutOracle(m, adversary)))
            else:
                entries.append((m["model"], _predictor_from_doc(m, adversary)))
        mm = MultiModel(ModelRegistry(entries))
        return mm.policy(), mm.usage
    if kind == "hrl":
        policy = hrl_policy(
            state,
            faction,
            manager_policy=doc.get("manager", "balanced"),
            commander_policy=doc.get("commander", "balanced"),
            operator_model=doc.get("operator", "pass_agg"),
        )
        return policy, None
    raise ValueError(f"unknown policy config kind {kind!r}")


# -- single match -------------------------------------------------------------


def run_match(
    blue_spec,
    red_spec,
    scenario: ScenarioSpec,
    deterministic: bool = True,
    replay_path=None,
) -> dict:
    state = scenario.make_state(deterministic=deterministic)
    blue, blue_usage = make_policy(blue_spec, state, BLUE)
    red, red_usage = make_policy(red_spec, state, RED)
    initial = dict(state.initial_strength)
    writer = None
    if replay_path is not None:
        writer = ReplayWriter(
            replay_path,
            scenario.to_json(),
            {"blue": str(blue_spec), "red": str(red_spec), "deterministic": deterministic},
        )
    trace_cursors = {BLUE: 0, RED: 0}

    def flush_assignments(faction, policy):
        # HRL area assignments go into the log so the UI can draw overlays
        ctl = getattr(policy, "controller", None)
        if ctl is None or writer is None:
            return
        for rec in ctl.trace[trace_cursors[faction]:]:
            writer.append({**rec, "kind": "assignment", "area_kind": rec["kind"],
                           "faction": faction})
        trace_cursors[faction] = len(ctl.trace)

    idx = 0
    while not state.is_terminal():
        unit = state.current_unit()
        if unit is None:
            break
        policy = blue if unit.faction == BLUE else red
        action = policy(state, unit)
        flush_assignments(unit.faction, policy)
        events = state.apply_action(action)
        if writer is not None:
            writer.append(
                {
                    "kind": "step",
                    "step": idx,
                    "phase": state.phase,
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
                        "blue_city": state.score.blue_city,
                        "blue_combat": state.score.blue_combat,
                        "red_city": state.score.red_city,
                        "red_combat": state.score.red_combat,
                        "total": state.game_score(),
                    },
                }
            )
        idx += 1
    result = {
        "score": state.game_score(),
        "phases": state.phase,
        "blue_losses": initial[BLUE] - state.combat_power(BLUE),
        "red_losses": initial[RED] - state.combat_power(RED),
        "usage": dict(blue_usage) if blue_usage is not None else None,
    }
    if writer is not None:
        writer.append({"kind": "end", "score": state.game_score(), "phases": state.phase})
        writer.close()
        result["replay"] = str(replay_path)
    return result


# -- batch evaluation ---------------------------------------------------------


@dataclass
class EvalConfig:
    blue: object = "pass_agg"
    red: object = "pass_agg"
    games: int = 100
    seed: int = 0
    cycle: int = 0
    board_length: int = 10
    deterministic: bool = True
    out_csv: str | None = None
    scenario: ScenarioParams | None = None

    def resolved_scenario(self) -> ScenarioParams:
        return self.scenario if self.scenario is not None else ScenarioParams(self.board_length)


@dataclass
class EvalReport:
    scores: list[float]
    phases: list[int]
    mean: float
    sem: float
    sem_defined: bool
    usage_percent: dict[str, float]
    config: dict
    wall_time: float
    csv_path: str | None = None
    rows: list[tuple] = field(default_factory=list)


def mean_and_sem(scores: list[float]) -> tuple[float, float, bool]:
    n = len(scores)
    mean = sum(scores) / n
    if n < 2:
        return mean, 0.0, False  # SEM undefined for one sample; 0 by convention
    var = sum((x - mean) ** 2 for x in scores) / (n - 1)
    return mean, math.sqrt(var) / math.sqrt(n), True


def normalize_to_baseline(scores, baseline_scores):
    """(x - baseline mean) / baseline sample stddev, per score."""
    b_mean, b_sem, defined = mean_and_sem(list(baseline_scores))
    if not defined:
        raise ValueError("baseline needs at least two samples")
    b_std = b_sem * math.sqrt(len(baseline_scores))
    if b_std == 0.0:
        raise ValueError("baseline has zero variance")
    return [(x - b_mean) / b_std for x in scores]


def _eval_one(args) -> dict:
    blue, red, scenario_doc, deterministic = args
    scenario = ScenarioSpec.from_json(scenario_doc)
    return run_match(blue, red, scenario, deterministic=deterministic)


def _num(x: float) -> str:
    return repr(round(float(x), 9))


def run_eval(cfg: EvalConfig) -> EvalReport:
    if cfg.games < 1:
        raise ValueError("need at least one game")
    t0 = time.monotonic()
    stream = ScenarioStream(cfg.seed, cfg.cycle, cfg.resolved_scenario())
    jobs = [
        (cfg.blue, cfg.red, stream.draw(i).to_json(), cfg.deterministic)
        for i in range(cfg.games)
    ]
    workers = int(os.environ.get("HEXSTRAT_WORKERS", "1") or "1")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_eval_one, jobs))
    else:
        results = [_eval_one(j) for j in jobs]

    scores = [r["score"] for r in results]
    phases = [r["phases"] for r in results]
    usage: Counter = Counter()
    for r in results:
        if r["usage"]:
            usage.update(r["usage"])
    total_usage = sum(usage.values())
    usage_percent = {
        k: 100.0 * v / total_usage for k, v in sorted(usage.items())
    } if total_usage else {}

    rows = []
    for i, (job, r) in enumerate(zip(jobs, results)):
        seed = job[2]["seed"]
        rows.append(
            (i, seed, r["score"], r["phases"], r["blue_losses"], r["red_losses"])
        )
    mean, sem, defined = mean_and_sem(scores)
    report = EvalReport(
        scores=scores,
        phases=phases,
        mean=mean,
        sem=sem,
        sem_defined=defined,
        usage_percent=usage_percent,
        config={
            "blue": str(cfg.blue),
            "red": str(cfg.red),
            "games": cfg.games,
            "seed": cfg.seed,
            "cycle": cfg.cycle,
            "board_length": cfg.board_length,
            "deterministic": cfg.deterministic,
        },
        wall_time=time.monotonic() - t0,
        rows=rows,
    )
    if cfg.out_csv is not None:
        with open(cfg.out_csv, "w") as f:
            f.write(CSV_SCHEMA + "\n")
            for i, seed, score, ph, bl, rl in rows:
                f.write(f"{i},{seed},{_num(score)},{ph},{_num(bl)},{_num(rl)}\n")
        report.csv_path = cfg.out_csv
    return report


def summarize(report: EvalReport) -> str:
    lines = [
        f"games: {len(report.scores)}",
        f"mean score: {report.mean:.4f}",
        f"SEM: {report.sem:.4f}" + ("" if report.sem_defined else " (single game; undefined)"),
        f"wall time: {report.wall_time:.2f}s",
    ]
    if report.usage_percent:
        lines.append("model selection %:")
        for k, v in report.usage_percent.items():
            lines.append(f"  {k}: {v:.2f}")
    if report.csv_path:
        lines.append(f"csv: {report.csv_path}")
    return "\n".join(lines)
