/** Session state of one walkthrough: ball position, shot log, strokes.
 *
 * Pure data plus pure transitions, so the replay invariant (logged strokes
 * equal recomputing them from the logged outcomes) and exact undo are
 * directly testable. `play` returns a new state; the previous one is kept on
 * an undo stack untouched.
 */

import type { BookletAction, Cell, SimulateResponse } from "./types.js";

export type Overlay = "surface" | "value" | "policy";

export interface ShotLogEntry {
  from: Cell;
  action: BookletAction;
  outcome: SimulateResponse;
  strokesAfter: number;
}

export interface SessionState {
  holeId: string;
  ball: Cell;
  strokes: number;
  holed: boolean;
  log: ShotLogEntry[];
  overlay: Overlay;
}

export function startSession(holeId: string, tee: Cell): SessionState {
  return { holeId, ball: tee, strokes: 0, holed: false, log: [], overlay: "surface" };
}

/** Strokes contributed by one outcome: the swing, any penalty, and the
 * sampled putts once the ball is on the green. */
export function strokesOf(outcome: SimulateResponse): number {
  const putts = outcome.landed_on_green ? (outcome.sampled_putts ?? 0) : 0;
  return 1 + outcome.penalty + putts;
}

export function applyShot(state: SessionState, action: BookletAction,
                          outcome: SimulateResponse): SessionState {
  if (state.holed) {
    return state;
  }
  const strokes = state.strokes + strokesOf(outcome);
  const entry: ShotLogEntry = {
    from: [...state.ball] as Cell,
    action: { ...action },
    outcome,
    strokesAfter: strokes,
  };
  return {
    ...state,
    ball: [...outcome.final_cell] as Cell,
    strokes,
    holed: outcome.landed_on_green,
    log: [...state.log, entry],
  };
}

/** Recompute total strokes from the log alone; must equal state.strokes. */
export function replayStrokes(log: ShotLogEntry[]): number {
  return log.reduce((total, entry) => total + strokesOf(entry.outcome), 0);
}

/** Trail segments for drawing: one [from, to] pair per logged shot. */
export function trail(log: ShotLogEntry[]): Array<[Cell, Cell]> {
  return log.map((entry) => [entry.from, entry.outcome.final_cell]);
}

export class Session {
  private states: SessionState[];

  constructor(holeId: string, tee: Cell) {
    this.states = [startSession(holeId, tee)];
  }

  get state(): SessionState {
    return this.states[this.states.length - 1];
  }

  play(action: BookletAction, outcome: SimulateResponse): SessionState {
    this.states.push(applyShot(this.state, action, outcome));
    return this.state;
  }

  /** Restore the exact prior state; no-op on the initial state. */
  undo(): SessionState {
    if (this.states.length > 1) {
      this.states.pop();
    }
    return this.state;
  }

  setOverlay(overlay: Overlay): SessionState {
    this.states[this.states.length - 1] = { ...this.state, overlay };
    return this.state;
  }
}
