// Canvas board renderer. Works against a minimal 2D-context surface so it
// is testable without a DOM; the browser passes the real context.

import { boardPixelSize, cellsInRect, hexCenter, hexCorners } from "./hexlayout.js";
import type { ActionDoc, RenderModel } from "./types.js";
import { RENDER_SCHEMA } from "./types.js";

export interface Ctx2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  globalAlpha: number;
  textAlign: string;
  textBaseline: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
}

export const COLORS = {
  ground: "#e8e4d8",
  city: "#9e9e9e",
  grid: "#6b6b6b",
  blue: "#2c6fbb",
  red: "#c0392b",
  highlight: "#f5d76e",
  banner: "#b00020",
  label: "#ffffff",
};

function hexPath(ctx: Ctx2D, col: number, row: number, size: number): void {
  const pts = hexCorners(col, row, size);
  ctx.beginPath();
  ctx.moveTo(pts[0].x, pts[0].y);
  for (let i = 1; i < 6; i++) ctx.lineTo(pts[i].x, pts[i].y);
  ctx.closePath();
}

export function drawBoard(
  ctx: Ctx2D,
  model: RenderModel,
  size: number,
  highlights: ActionDoc[] = []
): void {
  const [rows, cols] = model.dims;
  const { w, h } = boardPixelSize(rows, cols, size);
  ctx.clearRect(0, 0, w, h + 24);
  if (model.schema !== RENDER_SCHEMA) {
    ctx.fillStyle = COLORS.banner;
    ctx.font = "14px sans-serif";
    ctx.textAlign = "left";
    ctx.fillText(`unsupported render schema ${model.schema}`, 8, 20);
    return;
  }
  const cityAt = new Set(model.cities.map((c) => `${c.col},${c.row}`));

  ctx.globalAlpha = 1;
  for (let row = 0; row < rows; row++) {
    for (let col = 0; col < cols; col++) {
      hexPath(ctx, col, row, size);
      ctx.fillStyle = cityAt.has(`${col},${row}`) ? COLORS.city : COLORS.ground;
      ctx.fill();
      ctx.strokeStyle = COLORS.grid;
      ctx.lineWidth = 1;
      ctx.stroke();
    }
  }

  // owned cities get a faction-tinted rim
  for (const c of model.cities) {
    if (c.owner === null) continue;
    hexPath(ctx, c.col, c.row, size * 0.85);
    ctx.strokeStyle = COLORS[c.owner];
    ctx.lineWidth = 2;
    ctx.stroke();
  }

  // legal-move highlights for the human's unit on move
  for (const a of highlights) {
    if (a.kind !== "move" || a.hex === null) continue;
    hexPath(ctx, a.hex[0], a.hex[1], size * 0.7);
    ctx.globalAlpha = 0.5;
    ctx.fillStyle = COLORS.highlight;
    ctx.fill();
    ctx.globalAlpha = 1;
  }

  // assigned areas as translucent per-cell washes, operating lighter
  for (const area of model.areas) {
    ctx.globalAlpha = area.kind === "operating_area" ? 0.1 : 0.2;
    ctx.fillStyle = COLORS[area.faction];
    for (const cell of cellsInRect(area.rect)) {
      if (cell.col < 0 || cell.col >= cols || cell.row < 0 || cell.row >= rows) continue;
      hexPath(ctx, cell.col, cell.row, size * 0.95);
      ctx.fill();
    }
    ctx.globalAlpha = 1;
  }

  // units: faction-colored counters with strength numerals
  for (const u of model.units) {
    const c = hexCenter(u.col, u.row, size);
    ctx.beginPath();
    ctx.arc(c.x, c.y, size * 0.55, 0, 2 * Math.PI);
    ctx.fillStyle = COLORS[u.faction];
    ctx.fill();
    if (u.on_move) {
      ctx.strokeStyle = COLORS.highlight;
      ctx.lineWidth = 2;
      ctx.stroke();
    }
    ctx.fillStyle = COLORS.label;
    ctx.font = `${Math.round(size * 0.5)}px sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(String(Math.round(u.strength)), c.x, c.y);
  }

  ctx.fillStyle = COLORS.grid;
  ctx.font = "12px sans-serif";
  ctx.textAlign = "left";
  ctx.textBaseline = "alphabetic";
  ctx.fillText(
    `phase ${model.phase}/${model.num_phases}  score ${model.score.total.toFixed(1)}` +
      (model.done ? "  (game over)" : ""),
    8,
    h + 16
  );
}

// Simple polyline score chart over phases.
export function drawScoreChart(
  ctx: Ctx2D,
  series: { phase: number; total: number }[],
  w: number,
  h: number
): void {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  ctx.strokeRect(0.5, 0.5, w - 1, h - 1);
  if (series.length === 0) return;
  const xs = series.map((p) => p.phase);
  const ys = series.map((p) => p.total);
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const y0 = Math.min(0, ...ys);
  const y1 = Math.max(0, ...ys);
  const px = (x: number) => (x1 === x0 ? w / 2 : ((x - x0) / (x1 - x0)) * (w - 8) + 4);
  const py = (y: number) => (y1 === y0 ? h / 2 : h - (((y - y0) / (y1 - y0)) * (h - 8) + 4));
  ctx.beginPath();
  ctx.moveTo(px(xs[0]), py(ys[0]));
  for (let i = 1; i < series.length; i++) ctx.lineTo(px(xs[i]), py(ys[i]));
  ctx.strokeStyle = COLORS.blue;
  ctx.lineWidth = 2;
  ctx.stroke();
}
