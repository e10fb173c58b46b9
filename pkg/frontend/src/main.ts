/** DOM wiring: canvas, overlays, position panel, what-if shots. */

import { Api, ApiError } from "./api.js";
import { selectPosition } from "./panel.js";
import {
  SURFACE_COLORS, arrowSegment, bookletIndex, cellRect, heatColor, pickCell,
  valueRange,
} from "./render.js";
import { Session, trail } from "./session.js";
import type { Booklet, BookletAction, Cell, HoleDetail } from "./types.js";

const PLAYER = new URLSearchParams(location.search).get("player") ?? "baseline";
const api = new Api("");

const canvas = document.getElementById("hole") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const holeSelect = document.getElementById("hole-select") as HTMLSelectElement;
const overlaySelect = document.getElementById("overlay") as HTMLSelectElement;
const panel = document.getElementById("panel")!;
const logList = document.getElementById("log")!;
const status = document.getElementById("status")!;
const seedInput = document.getElementById("seed") as HTMLInputElement;
const playButton = document.getElementById("play") as HTMLButtonElement;
const undoButton = document.getElementById("undo") as HTMLButtonElement;

let hole: HoleDetail | null = null;
let booklet: Booklet | null = null;
let session: Session | null = null;
let selected: Cell | null = null;
let chosenAction: BookletAction | null = null;
let busy = false;

function px(): number {
  if (!hole) return 6;
  return Math.max(3, Math.floor(Math.min(
    canvas.width / hole.cols, canvas.height / hole.rows)));
}

function draw(): void {
  if (!hole) return;
  const cell = px();
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const overlay = session?.state.overlay ?? "surface";
  const index = booklet ? bookletIndex(booklet.rows) : null;
  const [lo, hi] = booklet ? valueRange(booklet.rows) : [0, 1];

  for (let r = 0; r < hole.rows; r += 1) {
    for (let c = 0; c < hole.cols; c += 1) {
      const rect = cellRect([r, c], hole.rows, cell);
      ctx.fillStyle = SURFACE_COLORS[hole.grid[r][c]] ?? "#000";
      ctx.fillRect(rect.x, rect.y, rect.w, rect.h);
      if (overlay === "value" && index) {
        const row = index.get(`${r},${c}`);
        if (row) {
          ctx.fillStyle = heatColor(row.value, lo, hi);
          ctx.fillRect(rect.x, rect.y, rect.w, rect.h);
        }
      }
    }
  }

  if (overlay === "policy" && booklet) {
    ctx.strokeStyle = "#ffffffcc";
    ctx.lineWidth = 1;
    const step = 4; // thin the arrow field so it stays readable
    for (const row of booklet.rows) {
      if (!row.action) continue;
      if (row.cell[0] % step !== 0 || row.cell[1] % step !== 0) continue;
      const seg = arrowSegment(row.cell, row.action, hole.rows, cell,
                               cell * 2.5);
      ctx.beginPath();
      ctx.moveTo(seg.x1, seg.y1);
      ctx.lineTo(seg.x2, seg.y2);
      ctx.stroke();
    }
  }

  if (session) {
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 2;
    for (const [from, to] of trail(session.state.log)) {
      const a = cellRect(from, hole.rows, cell);
      const b = cellRect(to, hole.rows, cell);
      ctx.beginPath();
      ctx.moveTo(a.x + cell / 2, a.y + cell / 2);
      ctx.lineTo(b.x + cell / 2, b.y + cell / 2);
      ctx.stroke();
    }
    const ball = cellRect(session.state.ball, hole.rows, cell);
    ctx.fillStyle = "#ffffff";
    ctx.beginPath();
    ctx.arc(ball.x + cell / 2, ball.y + cell / 2, cell * 0.6, 0, 2 * Math.PI);
    ctx.fill();
  }

  if (selected) {
    const rect = cellRect(selected, hole.rows, cell);
    ctx.strokeStyle = "#ff5722";
    ctx.lineWidth = 2;
    ctx.strokeRect(rect.x, rect.y, rect.w, rect.h);
  }
}

function note(text: string, isError = false): void {
  status.textContent = text;
  status.className = isError ? "error" : "";
}

async function loadHole(id: string): Promise<void> {
  hole = await api.hole(id);
  try {
    booklet = await api.booklet(PLAYER, id);
  } catch (err) {
    booklet = null;
    note(`no booklet for ${PLAYER}/${id}: solve it first`, true);
  }
  session = hole.tee ? new Session(id, hole.tee) : null;
  selected = null;
  chosenAction = null;
  panel.innerHTML = "<em>click a playable cell</em>";
  logList.innerHTML = "";
  draw();
}

async function onClick(event: MouseEvent): Promise<void> {
  if (!hole || !booklet) return;
  const bounds = canvas.getBoundingClientRect();
  const cell = pickCell(event.clientX - bounds.left,
                        event.clientY - bounds.top,
                        hole.rows, hole.cols, px());
  if (!cell) return;
  const code = hole.grid[cell[0]][cell[1]];
  if (!"TFRB".includes(code)) {
    note("pick a tee, fairway, rough or bunker cell");
    return;
  }
  try {
    const view = await selectPosition(
      api, PLAYER, hole.id, cell, booklet.rows, hole.cell_size_in,
      360 / booklet.disc.n_directions, booklet.disc.distance_step);
    selected = cell;
    chosenAction = view.value.best_action;
    const fan = view.fan.map((f) =>
      `<li>aim ${f.action.direction_deg.toFixed(1)} deg, ` +
      `${f.action.distance_in.toFixed(0)} in -> (${f.target[0]},${f.target[1]}) ` +
      `${f.value === null ? "n/a" : f.value.toFixed(3)}</li>`).join("");
    panel.innerHTML = `
      <div>cell (${cell[0]}, ${cell[1]}) on ${view.surface}</div>
      <div>service says: <code>${view.valueRaw}</code></div>
      <div>alternative targets:</div><ul>${fan}</ul>`;
    note("");
    draw();
  } catch (err) {
    note(err instanceof ApiError ? err.message : String(err), true);
  }
}

async function onPlay(): Promise<void> {
  if (!hole || !session || !chosenAction || busy) return;
  if (session.state.holed) {
    note("holed out; undo to branch earlier");
    return;
  }
  busy = true;
  playButton.disabled = true;
  try {
    const seed = seedInput.value === "" ? undefined : Number(seedInput.value);
    const outcome = await api.simulate({
      hole: hole.id, player: PLAYER, cell: session.state.ball,
      direction_deg: chosenAction.direction_deg,
      distance_in: chosenAction.distance_in, seed,
    });
    const state = session.play(chosenAction, outcome);
    const last = state.log[state.log.length - 1];
    const item = document.createElement("li");
    item.textContent =
      `${last.action.distance_in.toFixed(0)} in at ` +
      `${last.action.direction_deg.toFixed(0)} deg: ${outcome.event}` +
      `${outcome.penalty ? " (+1 penalty)" : ""}` +
      `${outcome.landed_on_green ? `, ${outcome.sampled_putts} putt(s)` : ""}` +
      ` [${state.strokes} strokes]`;
    logList.appendChild(item);
    if (state.holed) {
      note(`holed out in ${state.strokes} strokes`);
    }
    selected = state.ball;
    const next = booklet ? bookletIndex(booklet.rows)
      .get(`${state.ball[0]},${state.ball[1]}`) : null;
    chosenAction = next?.action ?? null;
    draw();
  } catch (err) {
    // state is unchanged on errors
    note(err instanceof ApiError ? err.message : String(err), true);
  } finally {
    busy = false;
    playButton.disabled = false;
  }
}

function onUndo(): void {
  if (!session) return;
  session.undo();
  logList.lastElementChild?.remove();
  selected = session.state.ball;
  note("");
  draw();
}

async function boot(): Promise<void> {
  const holes = await api.holes();
  holeSelect.innerHTML = holes
    .map((id) => `<option value="${id}">${id}</option>`).join("");
  holeSelect.addEventListener("change", () => loadHole(holeSelect.value));
  overlaySelect.addEventListener("change", () => {
    session?.setOverlay(overlaySelect.value as "surface" | "value" | "policy");
    draw();
  });
  canvas.addEventListener("click", (event) => { void onClick(event); });
  playButton.addEventListener("click", () => { void onPlay(); });
  undoButton.addEventListener("click", onUndo);
  if (holes.length) {
    await loadHole(holes[0]);
  } else {
    note("service has no holes", true);
  }
}

void boot();
