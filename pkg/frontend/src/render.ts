/** Pure drawing geometry: cell rectangles, picking, arrows, heat colors.
 *
 * The canvas shows the hole north-up: grid row 0 (smallest y in world
 * coordinates) is the bottom row of the picture. All functions here are
 * side-effect free; main.ts binds them to the actual canvas.
 */

import type { BookletAction, BookletRow, Cell } from "./types.js";

export const SURFACE_COLORS: Record<string, string> = {
  T: "#d8c98f", // tee marker
  F: "#8bc34a", // fairway, light green
  R: "#33691e", // rough, green
  B: "#f3e3bc", // bunker, egg nog
  G: "#c5e06b", // green, yellow green
  W: "#4f84c4", // water
  X: "#1b3d1a", // trees, dark green
  O: "#9e9e9e", // out of bounds
};

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export function cellRect(cell: Cell, rows: number, px: number): Rect {
  const [r, c] = cell;
  return { x: c * px, y: (rows - 1 - r) * px, w: px, h: px };
}

/** Canvas pixel -> cell, or null outside the grid. Inverse of cellRect. */
export function pickCell(x: number, y: number, rows: number, cols: number,
                         px: number): Cell | null {
  const c = Math.floor(x / px);
  const r = rows - 1 - Math.floor(y / px);
  if (r < 0 || r >= rows || c < 0 || c >= cols) {
    return null;
  }
  return [r, c];
}

/** Linear blue-to-red heat for expected strokes. */
export function heatColor(value: number, vmin: number, vmax: number): string {
  const t = vmax > vmin ? Math.min(1, Math.max(0, (value - vmin) / (vmax - vmin))) : 0;
  const red = Math.round(40 + 215 * t);
  const blue = Math.round(255 - 215 * t);
  return `rgb(${red},70,${blue})`;
}

export interface Segment {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

/** Canvas segment from a cell center along a world direction.
 *
 * direction_deg is measured from the +x axis, counter-clockwise in world
 * coordinates; the canvas y axis points down, so north (90 degrees) renders
 * as an upward arrow.
 */
export function arrowSegment(cell: Cell, action: BookletAction,
                             rows: number, px: number,
                             lengthPx: number): Segment {
  const rect = cellRect(cell, rows, px);
  const x1 = rect.x + px / 2;
  const y1 = rect.y + px / 2;
  const theta = (action.direction_deg * Math.PI) / 180;
  return {
    x1, y1,
    x2: x1 + lengthPx * Math.cos(theta),
    y2: y1 - lengthPx * Math.sin(theta),
  };
}

/** World landing point of an action from a cell, in grid cell coordinates. */
export function landingCell(cell: Cell, action: BookletAction,
                            cellSizeIn: number): Cell {
  const theta = (action.direction_deg * Math.PI) / 180;
  const x = (cell[1] + 0.5) * cellSizeIn + action.distance_in * Math.cos(theta);
  const y = (cell[0] + 0.5) * cellSizeIn + action.distance_in * Math.sin(theta);
  return [Math.floor(y / cellSizeIn), Math.floor(x / cellSizeIn)];
}

export interface FanEntry {
  action: BookletAction;
  target: Cell;
  value: number | null; // booklet value at the landing cell, if any
}

/** Alternative targets around the best action with their landing values.
 *
 * Shows what the booklet expects from the cells each alternative aims at:
 * nearby directions at the same distance plus shorter/longer versions of
 * the best line, ranked by landing value.
 */
export function fanTargets(byCell: Map<string, BookletRow>, cell: Cell,
                           best: BookletAction, cellSizeIn: number,
                           directionStepDeg: number, distanceStepIn: number,
                           k = 5): FanEntry[] {
  const seen = new Set<string>();
  const entries: FanEntry[] = [];
  const variants: BookletAction[] = [];
  for (const dd of [-2, -1, 1, 2]) {
    variants.push({
      direction_deg: (best.direction_deg + dd * directionStepDeg + 360) % 360,
      distance_in: best.distance_in,
    });
  }
  for (const dk of [-2, -1, 1]) {
    const dist = best.distance_in + dk * distanceStepIn;
    if (dist > 0) {
      variants.push({ direction_deg: best.direction_deg, distance_in: dist });
    }
  }
  for (const action of variants) {
    const target = landingCell(cell, action, cellSizeIn);
    const key = `${target[0]},${target[1]}`;
    if (seen.has(key)) {
      continue;
    }
    seen.add(key);
    const row = byCell.get(key);
    entries.push({ action, target, value: row ? row.value : null });
  }
  entries.sort((a, b) =>
    (a.value ?? Number.POSITIVE_INFINITY) - (b.value ?? Number.POSITIVE_INFINITY));
  return entries.slice(0, k);
}

export function bookletIndex(rows: BookletRow[]): Map<string, BookletRow> {
  const map = new Map<string, BookletRow>();
  for (const row of rows) {
    map.set(`${row.cell[0]},${row.cell[1]}`, row);
  }
  return map;
}

export function valueRange(rows: BookletRow[]): [number, number] {
  let lo = Number.POSITIVE_INFINITY;
  let hi = Number.NEGATIVE_INFINITY;
  for (const row of rows) {
    lo = Math.min(lo, row.value);
    hi = Math.max(hi, row.value);
  }
  return [lo, hi];
}
