"""HTTP + WebSocket service for human play and replay browsing.

One process owns every live game; handlers mutate a game only through
validated submitted actions or AI turns.  The event stream is a
poll-driven WebSocket: the client sends {"cursor": n} and receives all
events from n onward, so consumers control their own pacing.
"""

from __future__ import annotations

import os
import uuid

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from ..engine import ATTACK, BLUE, MOVE, PASS, RED, Action, opponent
from ..hexgrid import HexCoord
from ..replay import ReplayWriter
from ..scenario import ScenarioParams, ScenarioStream
from .evaluate import make_policy

RENDER_SCHEMA = 1


class CreateGame(BaseModel):
    board_length: int = 10
    seed: int = 0
    n_cities: int = 1
    red: str = "pass_agg"
    human_faction: str = BLUE
    deterministic: bool = True


class SubmitAction(BaseModel):
    unit_id: int
    kind: str  # pass | move | attack
    hex: list[int] | None = None  # [col, row] for move
    target: int | None = None  # unit id for attack


class _Game:
    def __init__(self, gid: str, req: CreateGame, replay_dir: str):
        self.id = gid
        self.human = req.human_faction
        stream = ScenarioStream(
            req.seed, 1, ScenarioParams(req.board_length, n_cities=req.n_cities)
        )
        self.scenario = stream.draw(0)
        self.state = self.scenario.make_state(deterministic=req.deterministic)
        ai_faction = opponent(self.human)
        self.ai_policy, _ = make_policy(req.red, self.state, ai_faction)
        self.ai_faction = ai_faction
        self.events: list[dict] = []
        self.step = 0
        path = os.path.join(replay_dir, f"{gid}.jsonl")
        self.writer = ReplayWriter(
            path, self.scenario.to_json(), {"red": req.red, "human": self.human}
        )

    def _record(self, unit, action: Action, events) -> None:
        s = self.state
        doc = {
            "kind": "step",
            "step": self.step,
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
        self.writer.append(doc)
        self.step += 1
        self.events.append(doc)
        if s.is_terminal():
            end = {"kind": "end", "score": s.game_score(), "phases": s.phase}
            self.writer.append(end)
            self.writer.close()
            self.events.append(end)

    def advance_ai(self) -> None:
        s = self.state
        while not s.is_terminal():
            unit = s.current_unit()
            if unit is None or unit.faction == self.human:
                break
            action = self.ai_policy(s, unit)
            events = s.apply_action(action)
            self._record(unit, action, events)

    def apply_human(self, action: Action) -> None:
        unit = self.state.units[action.unit_id]
        events = self.state.apply_action(action)
        self._record(unit, action, events)
        self.advance_ai()

    def render(self) -> dict:
        s = self.state
        cur = s.current_unit()
        legal = []
        if cur is not None and cur.faction == self.human:
            legal = [_action_json(a) for a in s.legal_actions(cur.id)]
        return {
            "schema": RENDER_SCHEMA,
            "id": self.id,
            "dims": [s.dims.n_rows, s.dims.n_cols],
            "cities": [
                {"col": h.col, "row": h.row, "owner": s.city_owner[h]}
                for h in s.urban_hexes
            ],
            "units": [
                {
                    "id": u.id,
                    "faction": u.faction,
                    "strength": u.strength,
                    "col": u.pos.col,
                    "row": u.pos.row,
                    "on_move": cur is not None and u.id == cur.id,
                }
                for u in sorted(s.units.values(), key=lambda u: u.id)
            ],
            "areas": [],
            "score": {
                "blue_city": s.score.blue_city,
                "blue_combat": s.score.blue_combat,
                "red_city": s.score.red_city,
                "red_combat": s.score.red_combat,
                "total": s.game_score(),
            },
            "phase": s.phase,
            "num_phases": s.num_phases,
            "faction_on_move": s.faction_on_move,
            "human_faction": self.human,
            "current_unit": cur.id if cur is not None else None,
            "legal_actions": legal,
            "done": s.is_terminal(),
        }


def _action_json(a: Action) -> dict:
    return {
        "unit_id": a.unit_id,
        "kind": a.kind,
        "hex": [a.target_hex.col, a.target_hex.row] if a.target_hex else None,
        "target": a.target_unit,
    }


def create_app(replay_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="hexstrat")
    app.state.replay_dir = replay_dir or os.path.join(os.getcwd(), "replays")
    os.makedirs(app.state.replay_dir, exist_ok=True)
    games: dict[str, _Game] = {}
    app.state.games = games

    def _game(gid: str) -> _Game:
        g = games.get(gid)
        if g is None:
            raise HTTPException(status_code=404, detail=f"unknown game {gid}")
        return g

    @app.post("/games")
    def create_game(req: CreateGame):
        if req.human_faction not in (BLUE, RED):
            raise HTTPException(status_code=422, detail="human_faction must be blue or red")
        gid = uuid.uuid4().hex[:12]
        g = _Game(gid, req, app.state.replay_dir)
        games[gid] = g
        g.advance_ai()
        return {"id": gid, "state": g.render()}

    @app.get("/games/{gid}/state")
    def get_state(gid: str):
        return _game(gid).render()

    @app.post("/games/{gid}/actions")
    def post_action(gid: str, req: SubmitAction):
        g = _game(gid)
        s = g.state
        cur = s.current_unit()
        if s.is_terminal() or cur is None or cur.faction != g.human:
            raise HTTPException(status_code=409, detail="no human unit is on move")
        action = Action(
            req.unit_id,
            req.kind,
            target_hex=HexCoord(req.hex[0], req.hex[1]) if req.hex else None,
            target_unit=req.target,
        )
        if req.unit_id != cur.id or req.kind not in (PASS, MOVE, ATTACK):
            legal = [_action_json(a) for a in s.legal_actions(cur.id)]
            raise HTTPException(status_code=422, detail={"legal_actions": legal})
        legal_set = s.legal_actions(cur.id)
        if action not in legal_set:
            raise HTTPException(
                status_code=422,
                detail={"legal_actions": [_action_json(a) for a in legal_set]},
            )
        g.apply_human(action)
        return g.render()

    @app.get("/replays")
    def list_replays():
        files = sorted(
            f for f in os.listdir(app.state.replay_dir) if f.endswith(".jsonl")
        )
        return {"replays": [f[: -len(".jsonl")] for f in files]}

    @app.get("/replays/{rid}", response_class=PlainTextResponse)
    def get_replay(rid: str):
        path = os.path.join(app.state.replay_dir, f"{rid}.jsonl")
        if not os.path.isfile(path):
            raise HTTPException(status_code=404, detail=f"unknown replay {rid}")
        with open(path) as f:
            return f.read()

    @app.websocket("/games/{gid}/events")
    async def events_ws(ws: WebSocket, gid: str):
        await ws.accept()
        g = games.get(gid)
        if g is None:
            await ws.close(code=4004)
            return
        try:
            while True:
                msg = await ws.receive_json()
                cursor = int(msg.get("cursor", 0))
                await ws.send_json(
                    {"events": g.events[cursor:], "cursor": len(g.events)}
                )
        except WebSocketDisconnect:
            pass

    return app


def serve(host: str = "127.0.0.1", port: int = 8080, replay_dir: str | None = None):
    import uvicorn

    uvicorn.run(create_app(replay_dir), host=host, port=port)
