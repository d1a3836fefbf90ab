// Browser entry: play against the server AI on the left canvas, or load a
// JSONL replay and step through it. All rules live on the server / in the
// log; this file is pure wiring.

import { EventPoller, GameClient, type SubmitResult, type WsLike } from "./api.js";
import { boardPixelSize, pixelToHex } from "./hexlayout.js";
import { drawBoard, drawScoreChart } from "./render.js";
import { loadReplay, type ReplaySession } from "./replay.js";
import type { ActionDoc, RenderModel } from "./types.js";

const HEX_SIZE = 24;

const board = document.getElementById("board") as HTMLCanvasElement;
const chart = document.getElementById("chart") as HTMLCanvasElement;
const status = document.getElementById("status") as HTMLElement;
const ctx = board.getContext("2d")!;
const chartCtx = chart.getContext("2d")!;

const client = new GameClient(location.origin.replace(/^file:.*/, "http://localhost:8080"));

let gameId: string | null = null;
let state: RenderModel | null = null;
let legal: ActionDoc[] = [];
let replay: ReplaySession | null = null;

function fit(model: RenderModel): void {
  const { w, h } = boardPixelSize(model.dims[0], model.dims[1], HEX_SIZE);
  board.width = w;
  board.height = h + 24;
}

function redraw(): void {
  const model = replay ? replay.model() : state;
  if (!model) return;
  fit(model);
  drawBoard(ctx, model, HEX_SIZE, replay ? [] : legal);
  if (replay) {
    drawScoreChart(chartCtx, replay.scoreSeries(), chart.width, chart.height);
    status.textContent =
      `replay step ${replay.position}/${replay.length}` +
      (replay.position === replay.length ? ` final score ${replay.finalScore()}` : "") +
      (replay.notice ? ` [${replay.notice}]` : "");
  } else {
    status.textContent = model.done
      ? `game over, score ${model.score.total}`
      : `${model.faction_on_move} to move`;
  }
}

function setState(s: RenderModel): void {
  state = s;
  legal = s.legal_actions;
  redraw();
}

async function newGame(): Promise<void> {
  replay = null;
  const { id, state: s } = await client.createGame({ red: "pass_agg" });
  gameId = id;
  setState(s);
  const ws = new WebSocket(`${location.origin.replace("http", "ws")}/games/${id}/events`);
  const adapter: WsLike = { send: (d: string) => ws.send(d), onmessage: null };
  ws.onmessage = (ev) => adapter.onmessage?.({ data: String(ev.data) });
  const poller = new EventPoller(adapter);
  ws.onopen = async () => {
    while (state && !state.done) {
      await poller.poll();
      await new Promise((r) => setTimeout(r, 500));
    }
  };
}

async function submit(action: ActionDoc): Promise<void> {
  if (gameId === null) return;
  const res: SubmitResult = await client.submitAction(gameId, action, legal);
  if (!res.sent) return; // outside the server's legal set, no request made
  if (res.ok) {
    setState(res.state);
  } else {
    legal = res.legal; // server refused; show its refreshed legal set
    redraw();
  }
}

board.addEventListener("click", (ev) => {
  if (replay || state === null || state.done || state.current_unit === null) return;
  const rect = board.getBoundingClientRect();
  const hex = pixelToHex(
    ev.clientX - rect.left,
    ev.clientY - rect.top,
    HEX_SIZE,
    state.dims[0],
    state.dims[1]
  );
  if (hex === null) return;
  const unitId = state.current_unit;
  const self = state.units.find((u) => u.id === unitId);
  if (self && self.col === hex.col && self.row === hex.row) {
    void submit({ unit_id: unitId, kind: "pass", hex: null, target: null });
    return;
  }
  const enemy = state.units.find(
    (u) => u.col === hex.col && u.row === hex.row && u.faction !== state!.human_faction
  );
  if (enemy) {
    void submit({ unit_id: unitId, kind: "attack", hex: null, target: enemy.id });
  } else {
    void submit({ unit_id: unitId, kind: "move", hex: [hex.col, hex.row], target: null });
  }
});

document.getElementById("new-game")?.addEventListener("click", () => void newGame());
document.getElementById("pass")?.addEventListener("click", () => {
  if (state && state.current_unit !== null) {
    void submit({ unit_id: state.current_unit, kind: "pass", hex: null, target: null });
  }
});
document.getElementById("step-back")?.addEventListener("click", () => {
  replay?.prev();
  redraw();
});
document.getElementById("step-fwd")?.addEventListener("click", () => {
  replay?.next();
  redraw();
});
document.getElementById("jump-phase")?.addEventListener("change", (ev) => {
  const p = Number((ev.target as HTMLInputElement).value);
  replay?.jumpToPhase(p);
  redraw();
});
document.getElementById("replay-file")?.addEventListener("change", async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  replay = loadReplay(await file.text());
  replay.jumpToPhase(Number.MAX_SAFE_INTEGER);
  redraw();
});
