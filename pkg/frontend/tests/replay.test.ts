import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { loadReplay, parseReplay } from "../src/replay.js";

const FIXTURE = readFileSync(join(__dirname, "fixtures", "match.jsonl"), "utf8");

describe("replay fidelity (fixture produced by the game harness)", () => {
  it("loads, steps through every phase, and ends on the log's final score", () => {
    const session = loadReplay(FIXTURE);
    expect(session.notice).toBeNull();
    expect(session.length).toBeGreaterThan(0);

    const phasesSeen = new Set<number>();
    phasesSeen.add(session.model().phase);
    while (session.next()) phasesSeen.add(session.model().phase);

    // every phase in the log was visited by forward stepping
    for (const s of session.steps) expect(phasesSeen.has(s.phase)).toBe(true);
    expect(session.position).toBe(session.length);

    const final = session.model();
    expect(final.done).toBe(true);
    expect(final.score.total).toBe(session.finalScore());
    expect(session.finalPhase()).toBe(session.end!.phases);
    expect(final.phase).toBeLessThanOrEqual(final.num_phases);
  });

  it("jump to phase 0 shows the initial placement", () => {
    const session = loadReplay(FIXTURE);
    session.jumpToPhase(Number.MAX_SAFE_INTEGER);
    session.jumpToPhase(0);
    const m = session.model();
    expect(session.position).toBe(0);
    expect(m.score.total).toBe(0);
    const sc = session.header.scenario;
    expect(m.units).toHaveLength(sc.units.length);
    m.units.forEach((u, i) => {
      expect([u.col, u.row]).toEqual([sc.units[i].col, sc.units[i].row]);
      expect(u.strength).toBe(sc.units[i].strength);
    });
    for (const c of m.cities) expect(c.owner).toBeNull();
  });

  it("stepping back rewinds the view", () => {
    const session = loadReplay(FIXTURE);
    session.next();
    session.next();
    const at2 = JSON.stringify(session.model());
    session.next();
    session.prev();
    expect(JSON.stringify(session.model())).toBe(at2);
  });

  it("score chart ends at the summary score", () => {
    const session = loadReplay(FIXTURE);
    const series = session.scoreSeries();
    expect(series.length).toBeGreaterThan(1);
    for (let i = 1; i < series.length; i++) {
      expect(series[i].phase).toBeGreaterThan(series[i - 1].phase);
    }
    expect(series[series.length - 1].total).toBe(session.finalScore());
  });

  it("area assignments appear as overlays once issued", () => {
    const session = loadReplay(FIXTURE);
    expect(session.assignments.length).toBeGreaterThan(0);
    expect(session.model().areas).toHaveLength(0);
    session.jumpToPhase(Number.MAX_SAFE_INTEGER);
    const areas = session.model().areas;
    expect(areas.length).toBeGreaterThan(0);
    expect(areas.some((a) => a.kind === "objective_area")).toBe(true);
    for (const a of areas) expect(a.rect).toHaveLength(4);
  });

  it("unit strengths in the final view match the logged damage", () => {
    const session = loadReplay(FIXTURE);
    session.jumpToPhase(Number.MAX_SAFE_INTEGER);
    const m = session.model();
    for (const u of m.units) {
      expect(u.strength).toBeGreaterThanOrEqual(50);
      expect(u.strength).toBeLessThanOrEqual(100);
    }
  });
});

describe("malformed logs", () => {
  it("stops at the last valid record with a notice", () => {
    const lines = FIXTURE.trimEnd().split("\n");
    const cut = [...lines.slice(0, 10), "{not json", ...lines.slice(10)].join("\n");
    const parsed = parseReplay(cut);
    expect(parsed.notice).toMatch(/corrupt record at line 11/);
    expect(parsed.records).toHaveLength(9);
  });

  it("rejects a wrong schema version", () => {
    const lines = FIXTURE.trimEnd().split("\n");
    const header = JSON.parse(lines[0]);
    header.schema = 99;
    const doc = [JSON.stringify(header), ...lines.slice(1)].join("\n");
    expect(() => parseReplay(doc)).toThrow(/unsupported replay schema/);
  });

  it("rejects a missing header", () => {
    expect(() => parseReplay('{"kind":"end","score":0,"phases":0}')).toThrow(/header/);
  });
});
