import random

import numpy as np
import pytest

from hexstrat.envs import EnvConfig, make_env, operator_action
from hexstrat.replay import ReplayError, load_replay
from hexstrat.scenario import ScenarioParams


def run_episode(env, rng, n_actions):
    env.reset()
    deltas = []
    done = False
    while not done:
        r = env.step(rng.randrange(n_actions))
        deltas.append(r.info["raw_delta"])
        done = r.done
    return deltas


def test_operator_obs_shape_and_reset_determinism():
    a = make_env(EnvConfig(echelon="operator", board_length=5, seed=11)).reset()
    b = make_env(EnvConfig(echelon="operator", board_length=5, seed=11)).reset()
    assert a.shape == (18, 7, 7)
    np.testing.assert_array_equal(a, b)


def test_operator_action_decoding():
    env = make_env(EnvConfig(echelon="operator", board_length=5, seed=1))
    env.reset()
    s = env.state
    unit = s.current_unit()
    assert operator_action(s, unit, 0).kind == "pass"
    with pytest.raises(ValueError):
        operator_action(s, unit, 7)


def test_operator_illegal_maps_to_pass_with_flag():
    env = make_env(EnvConfig(echelon="operator", board_length=5, seed=1))
    env.reset()
    s = env.state
    unit = s.current_unit()
    # find an off-board or blocked direction
    bad = None
    for a in range(1, 7):
        if operator_action(s, unit, a) is None:
            bad = a
            break
    if bad is None:
        pytest.skip("no illegal direction in this scenario")
    r = env.step(bad)
    assert r.info["illegal"] is True


def test_operator_strict_mode_raises():
    env = make_env(EnvConfig(echelon="operator", board_length=5, seed=1, strict=True))
    env.reset()
    s = env.state
    unit = s.current_unit()
    bad = next((a for a in range(1, 7) if operator_action(s, unit, a) is None), None)
    if bad is None:
        pytest.skip("no illegal direction in this scenario")
    with pytest.raises(ValueError):
        env.step(bad)


def test_operator_delta_sum_equals_final_score():
    rng = random.Random(0)
    for seed in range(10):
        env = make_env(EnvConfig(echelon="operator", board_length=4, seed=seed))
        deltas = run_episode(env, rng, 7)
        assert sum(deltas) == pytest.approx(env.state.game_score(), abs=1e-9)
        assert env.state.is_terminal()
        assert env.state.phase <= env.state.num_phases


def test_manager_env_fewer_steps_than_operator():
    op = make_env(EnvConfig(echelon="operator", board_length=10, seed=21,
                            scenario=ScenarioParams(10, hierarchy_grouping=True)))
    mg = make_env(EnvConfig(echelon="manager", board_length=10, seed=21))
    rng = random.Random(3)
    run_episode(op, rng, 7)
    run_episode(mg, rng, 9)
    assert mg.steps < op.steps


def test_manager_obs_and_rewards():
    env = make_env(EnvConfig(echelon="manager", board_length=10, seed=5))
    obs = env.reset()
    assert obs.shape == (17, 5, 5)
    assert obs.min() >= 0.0 and obs.max() <= 1.0
    r = env.step(4)
    assert r.reward >= 0.0
    assert r.obs.shape == (17, 5, 5)


def test_commander_env_steps_bounded_by_cadence():
    env = make_env(EnvConfig(echelon="commander", board_length=12, seed=5))
    rng = random.Random(0)
    run_episode(env, rng, 9)
    # 48 phases, cadence 40: at most decisions at phases 0 and 40
    assert 1 <= env.steps <= 2


def test_env_replay_round_trip(tmp_path):
    path = tmp_path / "ep.jsonl"
    env = make_env(EnvConfig(echelon="operator", board_length=4, seed=2,
                             replay_path=str(path)))
    rng = random.Random(1)
    run_episode(env, rng, 7)
    env.close()
    header, records = load_replay(path)
    assert header["scenario"]["dims"] == [4, 4]
    steps = [r for r in records if r["kind"] == "step"]
    assert steps
    assert steps[-1]["score"]["total"] == pytest.approx(env.state.game_score())
    # step indices are dense from 0
    assert [r["step"] for r in steps] == list(range(len(steps)))


def test_replay_corruption_errors(tmp_path):
    path = tmp_path / "ep.jsonl"
    env = make_env(EnvConfig(echelon="operator", board_length=4, seed=2,
                             replay_path=str(path)))
    rng = random.Random(1)
    run_episode(env, rng, 7)
    env.close()
    text = path.read_text()
    lines = text.splitlines()
    # truncated mid-record
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join(lines[:3] + [lines[3][:10]]) + "\n")
    with pytest.raises(ReplayError) as ei:
        load_replay(bad)
    assert "line 4" in str(ei.value)
    # digest tamper
    tampered = tmp_path / "tampered.jsonl"
    tampered.write_text(text.replace('"seed":', '"sead":', 1))
    with pytest.raises(ReplayError):
        load_replay(tampered)


def test_episode_never_exceeds_horizon():
    rng = random.Random(9)
    for echelon in ("operator", "manager"):
        env = make_env(EnvConfig(echelon=echelon, board_length=6 if echelon == "operator" else 10,
                                 seed=13))
        run_episode(env, rng, 7 if echelon == "operator" else 9)
        assert env.state.phase <= env.state.num_phases
