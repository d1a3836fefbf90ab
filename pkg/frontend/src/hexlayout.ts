// Pointy-top hex pixel layout with the engine's odd-row offset convention:
// odd rows are shifted half a hex to the east.

import type { Rect } from "./types.js";

export const SQRT3 = Math.sqrt(3);

export interface Layout {
  size: number; // center-to-corner radius in pixels
}

export function hexCenter(col: number, row: number, size: number): { x: number; y: number } {
  const shift = (row & 1) === 1 ? 0.5 : 0;
  return {
    x: size * SQRT3 * (col + shift + 0.5),
    y: size * (1.5 * row + 1),
  };
}

export function hexCorners(col: number, row: number, size: number): { x: number; y: number }[] {
  const { x, y } = hexCenter(col, row, size);
  const pts = [];
  for (let k = 0; k < 6; k++) {
    const a = (Math.PI / 180) * (60 * k - 30);
    pts.push({ x: x + size * Math.cos(a), y: y + size * Math.sin(a) });
  }
  return pts;
}

export function boardPixelSize(rows: number, cols: number, size: number): { w: number; h: number } {
  return {
    w: size * SQRT3 * (cols + 0.5) + size,
    h: size * (1.5 * (rows - 1) + 2) + size,
  };
}

// Nearest-center lookup: coarse estimate, then refine over neighbors so
// clicks near edges resolve correctly.
export function pixelToHex(
  x: number,
  y: number,
  size: number,
  rows: number,
  cols: number
): { col: number; row: number } | null {
  const rowGuess = Math.round((y / size - 1) / 1.5);
  let best: { col: number; row: number } | null = null;
  let bestD = Infinity;
  for (let row = rowGuess - 1; row <= rowGuess + 1; row++) {
    if (row < 0 || row >= rows) continue;
    const shift = (row & 1) === 1 ? 0.5 : 0;
    const colGuess = Math.round(x / (size * SQRT3) - shift - 0.5);
    for (let col = colGuess - 1; col <= colGuess + 1; col++) {
      if (col < 0 || col >= cols) continue;
      const c = hexCenter(col, row, size);
      const d = (c.x - x) ** 2 + (c.y - y) ** 2;
      if (d < bestD) {
        bestD = d;
        best = { col, row };
      }
    }
  }
  if (best === null || bestD > size * size) return null;
  return best;
}

export function cellsInRect(rect: Rect): { col: number; row: number }[] {
  const [c0, r0, w, h] = rect;
  const out = [];
  for (let row = r0; row < r0 + h; row++) {
    for (let col = c0; col < c0 + w; col++) {
      out.push({ col, row });
    }
  }
  return out;
}
