// Thin HTTP/WS client for the game server. The server is authoritative:
// this client only guards against sending actions the server already told
// us are illegal, and it refreshes that set whenever the server says 422.

import type { ActionDoc, RenderModel } from "./types.js";

export interface CreateGameOpts {
  board_length?: number;
  seed?: number;
  n_cities?: number;
  red?: string;
  human_faction?: "blue" | "red";
  deterministic?: boolean;
}

export type SubmitResult =
  | { sent: false; reason: "not-legal"; legal: ActionDoc[] }
  | { sent: true; ok: true; state: RenderModel }
  | { sent: true; ok: false; status: number; legal: ActionDoc[] };

export function actionEquals(a: ActionDoc, b: ActionDoc): boolean {
  const hexEq =
    (a.hex === null && b.hex === null) ||
    (a.hex !== null && b.hex !== null && a.hex[0] === b.hex[0] && a.hex[1] === b.hex[1]);
  return (
    a.unit_id === b.unit_id &&
    a.kind === b.kind &&
    hexEq &&
    (a.target ?? null) === (b.target ?? null)
  );
}

export function isLegal(action: ActionDoc, legal: ActionDoc[]): boolean {
  return legal.some((l) => actionEquals(l, action));
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class GameClient {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = (...a) => fetch(...a)
  ) {}

  private async json(url: string, init?: RequestInit): Promise<Response> {
    return this.fetchImpl(this.base + url, {
      ...init,
      headers: { "content-type": "application/json" },
    });
  }

  async createGame(opts: CreateGameOpts = {}): Promise<{ id: string; state: RenderModel }> {
    const r = await this.json("/games", { method: "POST", body: JSON.stringify(opts) });
    if (!r.ok) throw new Error(`create failed: ${r.status}`);
    return r.json();
  }

  async state(gid: string): Promise<RenderModel> {
    const r = await this.json(`/games/${gid}/state`);
    if (!r.ok) throw new Error(`state failed: ${r.status}`);
    return r.json();
  }

  // `legal` is the server's last published legal set; anything outside it
  // is dropped client-side without a request.
  async submitAction(gid: string, action: ActionDoc, legal: ActionDoc[]): Promise<SubmitResult> {
    if (!isLegal(action, legal)) {
      return { sent: false, reason: "not-legal", legal };
    }
    const r = await this.json(`/games/${gid}/actions`, {
      method: "POST",
      body: JSON.stringify(action),
    });
    if (r.ok) {
      return { sent: true, ok: true, state: await r.json() };
    }
    let refreshed = legal;
    if (r.status === 422) {
      const body = await r.json();
      if (body?.detail?.legal_actions) refreshed = body.detail.legal_actions;
    }
    return { sent: true, ok: false, status: r.status, legal: refreshed };
  }

  async listReplays(): Promise<string[]> {
    const r = await this.json("/replays");
    if (!r.ok) throw new Error(`list failed: ${r.status}`);
    return (await r.json()).replays;
  }

  async fetchReplay(rid: string): Promise<string> {
    const r = await this.fetchImpl(`${this.base}/replays/${rid}`);
    if (!r.ok) throw new Error(`replay failed: ${r.status}`);
    return r.text();
  }
}

// Poll-driven event stream: send {"cursor": n}, receive everything from n on.
export interface WsLike {
  send(data: string): void;
  onmessage: ((ev: { data: string }) => void) | null;
}

export class EventPoller {
  private cursor = 0;
  private waiter: ((v: { events: unknown[]; cursor: number }) => void) | null = null;

  constructor(private ws: WsLike) {
    ws.onmessage = (ev) => {
      const msg = JSON.parse(ev.data);
      this.cursor = msg.cursor;
      if (this.waiter) {
        const w = this.waiter;
        this.waiter = null;
        w(msg);
      }
    };
  }

  poll(): Promise<{ events: unknown[]; cursor: number }> {
    return new Promise((resolve) => {
      this.waiter = resolve;
      this.ws.send(JSON.stringify({ cursor: this.cursor }));
    });
  }
}
