/** View model of the position panel.
 *
 * Built from service responses only; the displayed value string is the raw
 * /values body so the UI never recomputes or reformats what the solver
 * reported.
 */

import type { Api } from "./api.js";
import type { BookletRow, Cell, ValueResponse } from "./types.js";
import { FanEntry, bookletIndex, fanTargets } from "./render.js";

export interface PositionView {
  cell: Cell;
  surface: string;
  valueRaw: string;          // exact /values response body
  value: ValueResponse;      // parsed form of the same bytes
  fan: FanEntry[];           // alternative targets with landing values
}

export async function selectPosition(
    api: Api, player: string, holeId: string, cell: Cell,
    bookletRows: BookletRow[], cellSizeIn: number,
    directionStepDeg: number, distanceStepIn: number): Promise<PositionView> {
  const { raw, parsed } = await api.valueRaw(player, holeId, cell[0], cell[1]);
  const index = bookletIndex(bookletRows);
  const row = index.get(`${cell[0]},${cell[1]}`);
  const fan = parsed.best_action
    ? fanTargets(index, cell, parsed.best_action, cellSizeIn,
                 directionStepDeg, distanceStepIn)
    : [];
  return {
    cell,
    surface: row ? row.surface : "unknown",
    valueRaw: raw,
    value: parsed,
    fan,
  };
}
