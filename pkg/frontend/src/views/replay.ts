/**
 * Match replay view model: the four charts reconstructing one match.
 *
 *   - match summary chart: gold-difference curve with event symbols
 *     (death = circle, turret destroyed = up triangle, dragon killed =
 *     down triangle, baron killed = diamond) and team-combat spans on the
 *     x-axis
 *   - player events chart: one row per minute for the selected player
 *   - player summary chart: one economy bar per player
 *   - map chart: the ten trajectories within the brushed window, the
 *     selected player's drawn thicker
 */
import type { AppState } from "../state/store";
import type { PlayerEventsRow, StreamEvent } from "../api/types";
import { EVENT_KINDS } from "../api/types";

export type SymbolKind = "circle" | "triangle-up" | "triangle-down" | "diamond";

export const EVENT_SYMBOLS: Record<StreamEvent["kind"], SymbolKind> = {
  death: "circle",
  turret_destroyed: "triangle-up",
  dragon_killed: "triangle-down",
  baron_killed: "diamond",
};

export const PLAYER_COLORS = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
  "#17becf",
] as const;

export const TRAJECTORY_WIDTH_SELECTED = 3;
export const TRAJECTORY_WIDTH = 1.25;

export interface ReplayDims {
  width: number;
  streamHeight: number;
  mapSize: number;
  pad: number;
}

export const DEFAULT_REPLAY_DIMS: ReplayDims = {
  width: 860,
  streamHeight: 180,
  mapSize: 420,
  pad: 30,
};

export interface StreamSymbol {
  t: number;
  kind: StreamEvent["kind"];
  symbol: SymbolKind;
  team: string;
  principal: string;
  x: number;
  y: number;
  /** Gold difference at the event, straight from the payload. */
  value: number;
}

export interface CombatSpan {
  startS: number;
  endS: number;
  x0: number;
  x1: number;
  participants: string[];
}

export type CellFill =
  | { mode: "none" }
  | { mode: "full" }
  | { mode: "semi" }
  | { mode: "fraction"; value: number };

export interface EventCell {
  kind: string;
  fill: CellFill;
}

export interface MinuteRow {
  minute: number;
  cells: EventCell[];
  inactiveFraction: number;
}

export interface EconomyBar {
  playerId: string;
  coin: number;
  widthFraction: number;
  color: string;
  selected: boolean;
}

export interface Trajectory {
  playerId: string;
  color: string;
  strokeWidth: number;
  selected: boolean;
  points: { t: number; x: number; y: number; cx: number; cy: number }[];
}

export interface ReplayViewModel {
  available: boolean;
  matchId: string | null;
  playerId: string | null;
  window: { fromS: number; toS: number } | null;
  durationS: number | null;
  goldLine: { x: number; y: number; t: number; value: number }[];
  symbols: StreamSymbol[];
  combats: CombatSpan[];
  minuteRows: MinuteRow[];
  economy: EconomyBar[];
  trajectories: Trajectory[];
  dims: ReplayDims;
}

const FRACTION_KINDS = new Set(["poke", "monster_killing", "minion_killing"]);
const CONTRIBUTION_KINDS = new Set(["turret_destruction", "dragon_killing"]);

function cellFill(row: PlayerEventsRow, kind: string): CellFill {
  if (FRACTION_KINDS.has(kind)) {
    const value =
      kind === "poke"
        ? row.poke_pct
        : kind === "monster_killing"
          ? row.monster_pct
          : row.minion_pct;
    return value > 0 ? { mode: "fraction", value } : { mode: "none" };
  }
  if (row.kinds.includes(kind)) return { mode: "full" };
  if (CONTRIBUTION_KINDS.has(kind) && row.contributed_only.includes(kind)) {
    return { mode: "semi" };
  }
  return { mode: "none" };
}

export function replayViewModel(
  state: AppState,
  dims: ReplayDims = DEFAULT_REPLAY_DIMS,
): ReplayViewModel {
  const payload = state.replay;
  const duration = state.matchSummary?.duration_s ?? null;
  if (!payload || duration === null) {
    return {
      available: false,
      matchId: null,
      playerId: null,
      window: null,
      durationS: duration,
      goldLine: [],
      symbols: [],
      combats: [],
      minuteRows: [],
      economy: [],
      trajectories: [],
      dims,
    };
  }

  const innerW = dims.width - 2 * dims.pad;
  const xOf = (t: number) => dims.pad + (t / duration) * innerW;
  let absMax = 1;
  for (const e of payload.match_stream) {
    absMax = Math.max(absMax, Math.abs(e.y));
  }
  const yOf = (v: number) =>
    dims.streamHeight / 2 - (v / absMax) * (dims.streamHeight / 2 - 12);

  const ordered = [...payload.match_stream].sort((a, b) => a.t - b.t);
  const goldLine = ordered.map((e) => ({
    x: xOf(e.t),
    y: yOf(e.y),
    t: e.t,
    value: e.y,
  }));
  const symbols: StreamSymbol[] = ordered.map((e) => ({
    t: e.t,
    kind: e.kind,
    symbol: EVENT_SYMBOLS[e.kind],
    team: e.team,
    principal: e.principal,
    x: xOf(e.t),
    y: yOf(e.y),
    value: e.y,
  }));
  const combats: CombatSpan[] = payload.team_combats.map((c) => ({
    startS: c.start_s,
    endS: c.end_s,
    x0: xOf(c.start_s),
    x1: xOf(c.end_s),
    participants: c.participants,
  }));

  const minuteRows: MinuteRow[] = payload.player_events
    .filter((r) => r.player_id === payload.player_id)
    .sort((a, b) => a.minute - b.minute)
    .map((r) => ({
      minute: r.minute,
      cells: EVENT_KINDS.map((kind) => ({ kind, fill: cellFill(r, kind) })),
      inactiveFraction: r.inactive_fraction,
    }));

  const playerIndex = new Map(payload.economy.map((e, i) => [e.player_id, i]));
  const maxCoin = Math.max(...payload.economy.map((e) => e.coin), 1);
  const economy: EconomyBar[] = payload.economy.map((e) => ({
    playerId: e.player_id,
    coin: e.coin,
    widthFraction: e.coin / maxCoin,
    color: PLAYER_COLORS[playerIndex.get(e.player_id)! % PLAYER_COLORS.length]!,
    selected: e.player_id === payload.player_id,
  }));

  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const points of Object.values(payload.trajectories)) {
    for (const p of points) {
      xMin = Math.min(xMin, p.x);
      xMax = Math.max(xMax, p.x);
      yMin = Math.min(yMin, p.y);
      yMax = Math.max(yMax, p.y);
    }
  }
  const spanX = xMax > xMin ? xMax - xMin : 1;
  const spanY = yMax > yMin ? yMax - yMin : 1;
  const span = Math.max(spanX, spanY);
  const mapInner = dims.mapSize - 2 * dims.pad;
  const mx = (x: number) => dims.pad + ((x - xMin) / span) * mapInner;
  const my = (y: number) => dims.mapSize - dims.pad - ((y - yMin) / span) * mapInner;

  const trajectories: Trajectory[] = Object.entries(payload.trajectories).map(
    ([playerId, points]) => {
      const selected = playerId === payload.player_id;
      return {
        playerId,
        color:
          PLAYER_COLORS[(playerIndex.get(playerId) ?? 0) % PLAYER_COLORS.length]!,
        strokeWidth: selected ? TRAJECTORY_WIDTH_SELECTED : TRAJECTORY_WIDTH,
        selected,
        points: points.map((p) => ({
          t: p.t,
          x: p.x,
          y: p.y,
          cx: mx(p.x),
          cy: my(p.y),
        })),
      };
    },
  );

  return {
    available: true,
    matchId: payload.match_id,
    playerId: payload.player_id,
    window: { fromS: payload.from_s, toS: payload.to_s },
    durationS: duration,
    goldLine,
    symbols,
    combats,
    minuteRows,
    economy,
    trajectories,
    dims,
  };
}
