/**
 * Glyph construction for the projection panel.
 *
 * One glyph stands for one player in one match. The radial sectors encode
 * the nine priority-event counts, the two ring indicators encode the
 * inactive percentage and the report count, and the outer border carries
 * the label state:
 *
 *   - labeled by a human: thick border, green for normal, red for actor
 *   - unlabeled with a model prediction: thin border in the predicted color
 *   - unlabeled, no prediction: thin neutral border
 */
import type { ProjectionRow } from "../api/types";
import { EVENT_KINDS } from "../api/types";

export const COLOR_ACTOR = "#d0342c";
export const COLOR_NORMAL = "#2e9e44";
export const COLOR_UNLABELED = "#9aa0a6";

export const STROKE_LABELED = 3.5;
export const STROKE_UNLABELED = 1.25;

export interface GlyphStroke {
  color: string;
  width: number;
  /** True only for human labels; predictions keep the thin border. */
  labeled: boolean;
}

function labelColor(label: "normal" | "actor"): string {
  return label === "actor" ? COLOR_ACTOR : COLOR_NORMAL;
}

export function glyphStroke(row: {
  label: { label: "normal" | "actor" } | null;
  prediction: { label: "normal" | "actor" } | null;
}): GlyphStroke {
  if (row.label) {
    return { color: labelColor(row.label.label), width: STROKE_LABELED, labeled: true };
  }
  if (row.prediction) {
    return {
      color: labelColor(row.prediction.label),
      width: STROKE_UNLABELED,
      labeled: false,
    };
  }
  return { color: COLOR_UNLABELED, width: STROKE_UNLABELED, labeled: false };
}

export interface GlyphSector {
  kind: string;
  /** Raw metric value, straight from the payload. */
  value: number;
  /** Value scaled into [0, 1] by the service's normalization bounds. */
  norm: number;
  startAngle: number;
  endAngle: number;
}

export interface GlyphSpec {
  member: readonly [string, string];
  /** Data-space coordinates from the projection payload. */
  x: number;
  y: number;
  stroke: GlyphStroke;
  sectors: GlyphSector[];
  inactiveFraction: number;
  reportFraction: number;
  metrics: Record<string, number>;
}

function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

/**
 * Scale a metric into [0, 1] with the normalization bounds the projection
 * payload carries, so the drawn magnitudes agree with the layout distances.
 */
export function normMetric(
  value: number,
  bounds: readonly [number, number] | undefined,
): number {
  if (!bounds) return 0;
  const [lo, hi] = bounds;
  if (!(hi > lo)) return 0;
  return clamp01((value - lo) / (hi - lo));
}

export function buildGlyph(
  row: ProjectionRow,
  normalization: Record<string, readonly [number, number]>,
): GlyphSpec {
  const step = (2 * Math.PI) / EVENT_KINDS.length;
  const sectors: GlyphSector[] = EVENT_KINDS.map((kind, i) => {
    const value = row.metrics[kind] ?? 0;
    return {
      kind,
      value,
      norm: normMetric(value, normalization[kind]),
      startAngle: i * step,
      endAngle: (i + 1) * step,
    };
  });
  return {
    member: [row.match_id, row.player_id],
    x: row.x,
    y: row.y,
    stroke: glyphStroke(row),
    sectors,
    inactiveFraction: clamp01(row.metrics["inactive_percentage"] ?? 0),
    reportFraction: normMetric(
      row.metrics["report_count"] ?? 0,
      normalization["report_count"],
    ),
    metrics: row.metrics,
  };
}
