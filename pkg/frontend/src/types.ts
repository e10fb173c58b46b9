/** Payload shapes of the caddie service endpoints. */

export type Cell = [number, number];

export interface HoleDetail {
  id: string;
  rows: number;
  cols: number;
  cell_size_in: number;
  par: number;
  pin: [number, number];
  tee: Cell | null;
  grid: string[]; // one row of surface characters per grid row, row 0 first
}

export interface BookletAction {
  direction_deg: number;
  distance_in: number;
}

export interface BookletRow {
  cell: Cell;
  surface: string;
  value: number;
  action: BookletAction | null;
}

export interface Booklet {
  player: string;
  hole: string;
  par: number;
  disc: { n_directions: number; distance_step: number; realizations: number };
  rows: BookletRow[];
}

export interface ValueResponse {
  value: number;
  best_action: BookletAction | null;
}

export interface SimulateRequest {
  hole: string;
  player: string;
  cell: Cell;
  direction_deg: number;
  distance_in: number;
  seed?: number;
}

export interface SimulateResponse {
  final_cell: Cell;
  penalty: number;
  event: string;
  landed_on_green: boolean;
  distance_to_pin: number;
  expected_putts: number | null;
  sampled_putts: number | null;
}
