/**
 * Projection view model: statistics panel, filter echo, and the glyph
 * scatter with lasso hit-testing.
 */
import { polygonContains } from "d3-polygon";
import type { AppState } from "../state/store";
import { memberKey } from "../state/store";
import type { FilterSpec, Member } from "../api/types";
import { buildGlyph, type GlyphSpec } from "./glyph";

export interface CanvasGlyph extends GlyphSpec {
  /** Canvas coordinates after the affine fit of the data extent. */
  cx: number;
  cy: number;
  r: number;
  selected: boolean;
  inLasso: boolean;
}

export interface ProjectionViewModel {
  stats: { focused: number; labeled: number } | null;
  filters: FilterSpec[];
  filtersRaw: string;
  available: boolean;
  glyphs: CanvasGlyph[];
  width: number;
  height: number;
}

export interface CanvasDims {
  width: number;
  height: number;
  pad: number;
  glyphRadius: number;
}

export const DEFAULT_CANVAS: CanvasDims = {
  width: 760,
  height: 560,
  pad: 28,
  glyphRadius: 13,
};

interface Scale {
  apply(v: number): number;
}

function linearFit(values: number[], lo: number, hi: number): Scale {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (!(max > min)) {
    const mid = (lo + hi) / 2;
    return { apply: () => mid };
  }
  const k = (hi - lo) / (max - min);
  return { apply: (v: number) => lo + (v - min) * k };
}

export function projectionViewModel(
  state: AppState,
  dims: CanvasDims = DEFAULT_CANVAS,
): ProjectionViewModel {
  const stats = state.counts
    ? { focused: state.counts.focused, labeled: state.counts.labeled }
    : null;
  if (!state.projection) {
    return {
      stats,
      filters: state.filters,
      filtersRaw: state.filtersRaw,
      available: false,
      glyphs: [],
      width: dims.width,
      height: dims.height,
    };
  }
  const rows = state.projection.members;
  const sx = linearFit(rows.map((r) => r.x), dims.pad, dims.width - dims.pad);
  const sy = linearFit(rows.map((r) => r.y), dims.pad, dims.height - dims.pad);
  const lasso = new Set(state.lasso.map(memberKey));
  const selectedKey = state.selected ? memberKey(state.selected) : null;
  const glyphs = rows.map((row) => {
    const spec = buildGlyph(row, state.projection!.normalization);
    const key = `${row.match_id}/${row.player_id}`;
    return {
      ...spec,
      cx: sx.apply(row.x),
      cy: sy.apply(row.y),
      r: dims.glyphRadius,
      selected: key === selectedKey,
      inLasso: lasso.has(key),
    };
  });
  return {
    stats,
    filters: state.filters,
    filtersRaw: state.filtersRaw,
    available: true,
    glyphs,
    width: dims.width,
    height: dims.height,
  };
}

/** Members whose glyph centers fall inside the lasso polygon. */
export function membersInPolygon(
  glyphs: readonly CanvasGlyph[],
  polygon: readonly (readonly [number, number])[],
): Member[] {
  if (polygon.length < 3) return [];
  const poly = polygon.map((p) => [p[0], p[1]] as [number, number]);
  return glyphs
    .filter((g) => polygonContains(poly, [g.cx, g.cy]))
    .map((g) => g.member);
}
