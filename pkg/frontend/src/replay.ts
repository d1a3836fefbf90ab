// JSONL replay loading and pure stepping. After load, no server is needed:
// the session rebuilds board views from the header scenario plus logged
// events, and display scores come straight from the log.

import type {
  AreaView,
  AssignmentRecord,
  CityView,
  EndRecord,
  Faction,
  HeaderRecord,
  RenderModel,
  ReplayRecord,
  ScoreBreakdown,
  StepRecord,
  UnitView,
} from "./types.js";
import { REPLAY_SCHEMA } from "./types.js";

export interface ParsedReplay {
  header: HeaderRecord;
  records: ReplayRecord[];
  notice: string | null; // set when a corrupt record truncated the log
}

export function parseReplay(text: string): ParsedReplay {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) throw new Error("empty replay");
  let header: HeaderRecord;
  try {
    header = JSON.parse(lines[0]);
  } catch {
    throw new Error("corrupt replay header");
  }
  if (header.kind !== "header") throw new Error("first record is not a header");
  if (header.schema !== REPLAY_SCHEMA) {
    throw new Error(`unsupported replay schema ${header.schema}`);
  }
  const records: ReplayRecord[] = [];
  let notice: string | null = null;
  for (let i = 1; i < lines.length; i++) {
    let doc: ReplayRecord;
    try {
      doc = JSON.parse(lines[i]);
      if (typeof doc !== "object" || doc === null || !("kind" in doc)) {
        throw new Error("not a record");
      }
    } catch {
      notice = `corrupt record at line ${i + 1}; showing first ${records.length} records`;
      break;
    }
    records.push(doc);
  }
  return { header, records, notice };
}

const ZERO_SCORE: ScoreBreakdown = {
  blue_city: 0,
  blue_combat: 0,
  red_city: 0,
  red_combat: 0,
  total: 0,
};

export class ReplaySession {
  readonly header: HeaderRecord;
  readonly steps: StepRecord[];
  readonly assignments: AssignmentRecord[];
  readonly end: EndRecord | null;
  readonly notice: string | null;
  private cursor = 0; // number of steps applied

  constructor(parsed: ParsedReplay) {
    this.header = parsed.header;
    this.notice = parsed.notice;
    this.steps = parsed.records.filter((r): r is StepRecord => r.kind === "step");
    this.assignments = parsed.records.filter(
      (r): r is AssignmentRecord => r.kind === "assignment"
    );
    const end = parsed.records.find((r): r is EndRecord => r.kind === "end");
    this.end = end ?? null;
  }

  get position(): number {
    return this.cursor;
  }

  get length(): number {
    return this.steps.length;
  }

  next(): boolean {
    if (this.cursor >= this.steps.length) return false;
    this.cursor += 1;
    return true;
  }

  prev(): boolean {
    if (this.cursor <= 0) return false;
    this.cursor -= 1;
    return true;
  }

  // Position just before the first step of the given phase; 0 shows the
  // initial placement.
  jumpToPhase(phase: number): void {
    let i = 0;
    while (i < this.steps.length && this.steps[i].phase < phase) i++;
    this.cursor = i;
  }

  finalScore(): number {
    if (this.end !== null) return this.end.score;
    const last = this.steps[this.steps.length - 1];
    return last ? last.score.total : 0;
  }

  finalPhase(): number {
    if (this.end !== null) return this.end.phases;
    const last = this.steps[this.steps.length - 1];
    return last ? last.phase : 0;
  }

  // One point per phase: the total after that phase's last logged step.
  scoreSeries(): { phase: number; total: number }[] {
    const byPhase = new Map<number, number>();
    for (const s of this.steps) byPhase.set(s.phase, s.score.total);
    return [...byPhase.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([phase, total]) => ({ phase, total }));
  }

  // Board view at the current position, same shape the live server renders.
  model(): RenderModel {
    const sc = this.header.scenario;
    const units = new Map<number, UnitView>();
    sc.units.forEach((u, i) => {
      units.set(i, {
        id: i,
        faction: u.faction,
        strength: u.strength,
        col: u.col,
        row: u.row,
        on_move: false,
      });
    });
    const cities = new Map<string, CityView>();
    for (const [col, row] of sc.cities) {
      cities.set(`${col},${row}`, { col, row, owner: null });
    }
    for (let i = 0; i < this.cursor; i++) {
      for (const ev of this.steps[i].events) {
        if (ev.kind === "moved") {
          const u = units.get(ev.unit as number);
          if (u) {
            const [col, row] = ev.to as [number, number];
            u.col = col;
            u.row = row;
          }
        } else if (ev.kind === "damaged") {
          const u = units.get(ev.unit as number);
          if (u) u.strength -= ev.amount as number;
        } else if (ev.kind === "removed") {
          units.delete(ev.unit as number);
        } else if (ev.kind === "city_captured") {
          const [col, row] = ev.hex as [number, number];
          const c = cities.get(`${col},${row}`);
          if (c) c.owner = ev.new_owner as Faction;
        }
      }
    }
    const last = this.cursor > 0 ? this.steps[this.cursor - 1] : null;
    const atEnd = this.cursor === this.steps.length;
    const areas = this.currentAreas();
    return {
      schema: 1,
      dims: sc.dims,
      cities: [...cities.values()],
      units: [...units.values()].sort((a, b) => a.id - b.id),
      areas,
      score: last ? last.score : ZERO_SCORE,
      phase: last ? last.phase : 0,
      num_phases: sc.phases,
      faction_on_move: last ? last.faction : "blue",
      current_unit: null,
      legal_actions: [],
      done: atEnd && this.end !== null,
    };
  }

  // Latest assignment per issuing echelon node, up to the current position.
  private currentAreas(): AreaView[] {
    const latest = new Map<string, AssignmentRecord>();
    for (const a of this.assignments) {
      if (a.step > this.cursor) continue;
      const who = a.area_kind === "objective_area" ? a.manager : a.commander;
      latest.set(`${a.faction}:${a.area_kind}:${who}`, a);
    }
    return [...latest.values()].map((a) => ({
      kind: a.area_kind,
      faction: a.faction,
      rect: a.area,
    }));
  }
}

export function loadReplay(text: string): ReplaySession {
  return new ReplaySession(parseReplay(text));
}
