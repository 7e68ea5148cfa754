/**
 * Progression view model: a per-minute box-plot strip for the cohort's
 * economic differences with the anchor's series overlaid as a red line, and
 * below it the priority-event distribution bars with transition flows.
 *
 * Clicking a flow narrows the cohort server-side (filter-by-flow); bars
 * highlight their event kind across the strip. All fractions, quartiles and
 * member lists come from the progression payload untouched.
 */
import type { AppState, FlowSelection } from "../state/store";
import type { Member } from "../api/types";
import { EVENT_KINDS } from "../api/types";

export const KIND_COLORS: Record<string, string> = {
  turret_destruction: "#8c564b",
  dragon_killing: "#9467bd",
  hero_killing: "#d62728",
  death: "#1f1f1f",
  assist: "#e377c2",
  poke: "#ff7f0e",
  monster_killing: "#2ca02c",
  minion_killing: "#1f77b4",
  inaction: "#7f7f7f",
};

export const ANCHOR_LINE_COLOR = "#d0342c";

export interface BoxGlyph {
  minute: number;
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  x: number;
  yMin: number;
  yQ1: number;
  yMedian: number;
  yQ3: number;
  yMax: number;
}

export interface BarSegment {
  kind: string;
  fraction: number;
  color: string;
  y0: number;
  y1: number;
  cy: number;
  highlighted: boolean;
}

export interface Bar {
  minute: number;
  x: number;
  total: number;
  segments: BarSegment[];
}

export interface FlowRibbon {
  minute: number;
  from: string;
  to: string;
  count: number;
  fraction: number;
  x0: number;
  y0: number;
  x1: number;
  y1: number;
  width: number;
  selected: boolean;
  highlighted: boolean;
}

export interface ProgressionDims {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  boxHeight: number;
  gap: number;
  barWidth: number;
}

export const DEFAULT_PROGRESSION_DIMS: ProgressionDims = {
  width: 900,
  height: 420,
  padLeft: 40,
  padRight: 20,
  boxHeight: 160,
  gap: 30,
  barWidth: 14,
};

export interface ProgressionViewModel {
  mode: string;
  available: boolean;
  /** True when a flow selection returned no members. */
  emptyAfterFlow: boolean;
  members: Member[];
  minutes: number;
  boxes: BoxGlyph[];
  anchorLine: { x: number; y: number; value: number }[] | null;
  bars: Bar[];
  flows: FlowRibbon[];
  flowSelection: FlowSelection | null;
  width: number;
  height: number;
}

const EMPTY: Omit<ProgressionViewModel, "flowSelection" | "mode"> = {
  available: false,
  emptyAfterFlow: false,
  members: [],
  minutes: 0,
  boxes: [],
  anchorLine: null,
  bars: [],
  flows: [],
  width: DEFAULT_PROGRESSION_DIMS.width,
  height: DEFAULT_PROGRESSION_DIMS.height,
};

export function progressionViewModel(
  state: AppState,
  dims: ProgressionDims = DEFAULT_PROGRESSION_DIMS,
): ProgressionViewModel {
  const payload = state.progression;
  if (!payload) {
    return { ...EMPTY, mode: state.progressionMode, flowSelection: state.flow };
  }
  if (payload.members.length === 0) {
    return {
      ...EMPTY,
      mode: payload.mode,
      flowSelection: state.flow,
      emptyAfterFlow: state.flow !== null,
      available: true,
      width: dims.width,
      height: dims.height,
    };
  }

  const minutes = payload.minutes;
  const innerW = dims.width - dims.padLeft - dims.padRight;
  const colW = minutes > 1 ? innerW / (minutes - 1) : 0;
  const xOf = (minute: number) =>
    minutes > 1 ? dims.padLeft + minute * colW : dims.padLeft + innerW / 2;

  let lo = Infinity;
  let hi = -Infinity;
  for (const b of payload.box) {
    lo = Math.min(lo, b.min);
    hi = Math.max(hi, b.max);
  }
  if (payload.anchor_series) {
    for (const v of payload.anchor_series.slice(0, minutes)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo -= 1;
    hi += 1;
  }
  const boxTop = 10;
  const yOf = (v: number) =>
    boxTop + ((hi - v) / (hi - lo)) * dims.boxHeight;

  const boxes: BoxGlyph[] = payload.box.map((b) => ({
    minute: b.minute,
    min: b.min,
    q1: b.q1,
    median: b.median,
    q3: b.q3,
    max: b.max,
    x: xOf(b.minute),
    yMin: yOf(b.min),
    yQ1: yOf(b.q1),
    yMedian: yOf(b.median),
    yQ3: yOf(b.q3),
    yMax: yOf(b.max),
  }));

  const anchorLine = payload.anchor_series
    ? payload.anchor_series.slice(0, minutes).map((value, minute) => ({
        x: xOf(minute),
        y: yOf(value),
        value,
      }))
    : null;

  const highlight = payload.anchor_priorities;
  const barTop = boxTop + dims.boxHeight + dims.gap;
  const barH = dims.height - barTop - 20;
  const centers = new Map<string, number>();
  const bars: Bar[] = payload.events.map((row) => {
    const x = xOf(row.minute);
    let y = barTop;
    const segments: BarSegment[] = [];
    for (const kind of EVENT_KINDS) {
      const fraction = row.d[kind];
      if (fraction === undefined || fraction <= 0) continue;
      const h = fraction * barH;
      const seg: BarSegment = {
        kind,
        fraction,
        color: KIND_COLORS[kind] ?? "#444",
        y0: y,
        y1: y + h,
        cy: y + h / 2,
        highlighted: highlight ? highlight[row.minute] === kind : false,
      };
      centers.set(`${row.minute}:${kind}`, seg.cy);
      segments.push(seg);
      y += h;
    }
    return { minute: row.minute, x, total: row.total, segments };
  });

  const flows: FlowRibbon[] = [];
  for (const step of payload.flows) {
    for (const edge of step.f) {
      const y0 = centers.get(`${step.minute}:${edge.from}`);
      const y1 = centers.get(`${step.minute + 1}:${edge.to}`);
      if (y0 === undefined || y1 === undefined) continue;
      const selected =
        state.flow !== null &&
        state.flow.t === step.minute &&
        state.flow.from === edge.from &&
        state.flow.to === edge.to;
      const highlighted = highlight
        ? highlight[step.minute] === edge.from &&
          highlight[step.minute + 1] === edge.to
        : false;
      flows.push({
        minute: step.minute,
        from: edge.from,
        to: edge.to,
        count: edge.count,
        fraction: edge.fraction,
        x0: xOf(step.minute) + dims.barWidth / 2,
        y0,
        x1: xOf(step.minute + 1) - dims.barWidth / 2,
        y1,
        width: Math.max(1, edge.fraction * 24),
        selected,
        highlighted,
      });
    }
  }

  return {
    mode: payload.mode,
    available: true,
    emptyAfterFlow: false,
    members: payload.members.map((m) => [m[0], m[1]] as Member),
    minutes,
    boxes,
    anchorLine,
    bars,
    flows,
    flowSelection: state.flow,
    width: dims.width,
    height: dims.height,
  };
}
