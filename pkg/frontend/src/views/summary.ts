/**
 * Summary view model: metric histograms above a table of the players in the
 * selected member's match, with radio selection. A non-empty lasso restricts
 * the rows to the chosen players.
 */
import type { AppState } from "../state/store";
import { memberKey } from "../state/store";
import type { Histogram, SummaryPlayer } from "../api/types";
import { METRIC_COMPONENTS } from "../api/types";
import { glyphStroke, type GlyphStroke } from "./glyph";

export interface SummaryRow {
  player: SummaryPlayer;
  selected: boolean;
  inLasso: boolean;
  stroke: GlyphStroke;
}

export interface HistogramVM {
  name: string;
  min: number;
  max: number;
  bins: number[];
  /** Bin heights scaled into [0, 1] for drawing. */
  heights: number[];
}

export interface SummaryViewModel {
  available: boolean;
  matchId: string | null;
  durationS: number | null;
  histograms: HistogramVM[];
  rows: SummaryRow[];
  /** The label control targets the selected member. */
  canLabel: boolean;
}

function histogramVM(name: string, h: Histogram): HistogramVM {
  const top = Math.max(...h.bins, 1);
  return {
    name,
    min: h.min,
    max: h.max,
    bins: h.bins,
    heights: h.bins.map((b) => b / top),
  };
}

export function summaryViewModel(state: AppState): SummaryViewModel {
  const payload = state.matchSummary;
  if (!payload) {
    return {
      available: false,
      matchId: null,
      durationS: null,
      histograms: [],
      rows: [],
      canLabel: false,
    };
  }
  const lasso = new Set(state.lasso.map(memberKey));
  const restrict =
    lasso.size > 0 &&
    payload.players.some((p) => lasso.has(`${p.match_id}/${p.player_id}`));
  const selectedKey = state.selected ? memberKey(state.selected) : null;
  const rows: SummaryRow[] = payload.players
    .filter((p) => !restrict || lasso.has(`${p.match_id}/${p.player_id}`))
    .map((p) => ({
      player: p,
      selected: `${p.match_id}/${p.player_id}` === selectedKey,
      inLasso: lasso.has(`${p.match_id}/${p.player_id}`),
      stroke: glyphStroke(p),
    }));
  const histograms: HistogramVM[] = [];
  for (const name of METRIC_COMPONENTS) {
    const h = payload.histograms[name];
    if (h) histograms.push(histogramVM(name, h));
  }
  return {
    available: true,
    matchId: payload.match_id,
    durationS: payload.duration_s,
    histograms,
    rows,
    canLabel: state.selected !== null,
  };
}
