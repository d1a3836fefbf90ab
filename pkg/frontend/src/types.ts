// Wire types mirroring the game server's render model (schema 1) and the
// JSONL replay format. The client never derives rules from these; it only
// displays what the server or the log says.

export const RENDER_SCHEMA = 1;
export const REPLAY_SCHEMA = 1;

export type Faction = "blue" | "red";

export interface ScoreBreakdown {
  blue_city: number;
  blue_combat: number;
  red_city: number;
  red_combat: number;
  total: number;
}

export interface UnitView {
  id: number;
  faction: Faction;
  strength: number;
  col: number;
  row: number;
  on_move: boolean;
}

export interface CityView {
  col: number;
  row: number;
  owner: Faction | null;
}

// [min_col, min_row, width, height]
export type Rect = [number, number, number, number];

export interface AreaView {
  kind: "operating_area" | "objective_area";
  faction: Faction;
  rect: Rect;
}

export interface ActionDoc {
  unit_id: number;
  kind: "pass" | "move" | "attack";
  hex: [number, number] | null;
  target: number | null;
}

export interface RenderModel {
  schema: number;
  id?: string;
  dims: [number, number]; // [rows, cols]
  cities: CityView[];
  units: UnitView[];
  areas: AreaView[];
  score: ScoreBreakdown;
  phase: number;
  num_phases: number;
  faction_on_move: Faction;
  human_faction?: Faction;
  current_unit: number | null;
  legal_actions: ActionDoc[];
  done: boolean;
}

// -- replay log records -------------------------------------------------------

export interface ScenarioDoc {
  schema: number;
  dims: [number, number];
  units: {
    faction: Faction;
    kind: string;
    strength: number;
    col: number;
    row: number;
    manager?: number;
    commander?: number;
  }[];
  cities: [number, number][];
  phases: number;
  seed: number;
}

export interface HeaderRecord {
  schema: number;
  kind: "header";
  scenario: ScenarioDoc;
  config: Record<string, unknown>;
  digest: string;
}

export interface StepRecord {
  kind: "step";
  step: number;
  phase: number;
  unit: number;
  faction: Faction;
  action: { kind: string; hex: [number, number] | null; target: number | null };
  events: { kind: string; [k: string]: unknown }[];
  score: ScoreBreakdown;
}

export interface AssignmentRecord {
  kind: "assignment";
  area_kind: "operating_area" | "objective_area";
  faction: Faction;
  phase: number;
  step: number;
  choice: number;
  area: Rect;
  manager?: number;
  commander?: number;
}

export interface EndRecord {
  kind: "end";
  score: number;
  phases: number;
}

export type ReplayRecord = StepRecord | AssignmentRecord | EndRecord;
