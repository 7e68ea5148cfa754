/**
 * Typed mirrors of the service's JSON payloads.
 *
 * Every schema here validates a response shape exactly as the server emits
 * it. The UI renders these numbers verbatim; nothing user-visible is
 * recomputed client-side.
 */
import { z } from "zod";

export type Member = readonly [string, string];

export const METRIC_COMPONENTS = [
  "turret_destruction",
  "dragon_killing",
  "hero_killing",
  "death",
  "assist",
  "poke",
  "monster_killing",
  "minion_killing",
  "inaction",
  "inactive_percentage",
  "report_count",
] as const;

export type MetricName = (typeof METRIC_COMPONENTS)[number];

/** The nine countable event kinds, highest priority first. */
export const EVENT_KINDS = METRIC_COMPONENTS.slice(0, 9) as readonly string[];

export const labelRecordSchema = z.object({
  label: z.enum(["normal", "actor"]),
  source: z.enum(["human", "model"]),
  confidence: z.number(),
  created_at: z.string(),
});
export type LabelRecord = z.infer<typeof labelRecordSchema>;

const memberTuple = z.tuple([z.string(), z.string()]);

export const playerRowSchema = z.object({
  match_id: z.string(),
  player_id: z.string(),
  metrics: z.record(z.number()),
  label_status: z.union([z.literal(0), z.literal(1), z.literal(2)]),
  label: labelRecordSchema.nullable(),
  prediction: labelRecordSchema.nullable(),
});
export type PlayerRow = z.infer<typeof playerRowSchema>;

export const filterSpecSchema = z.object({
  field: z.string(),
  lo: z.number(),
  hi: z.number(),
});
export type FilterSpec = z.infer<typeof filterSpecSchema>;

export const playersPayloadSchema = z.object({
  session_id: z.string(),
  filters: z.array(filterSpecSchema),
  counts: z.object({ focused: z.number(), labeled: z.number() }),
  members: z.array(playerRowSchema),
});
export type PlayersPayload = z.infer<typeof playersPayloadSchema>;

export const projectionRowSchema = playerRowSchema.extend({
  x: z.number(),
  y: z.number(),
});
export type ProjectionRow = z.infer<typeof projectionRowSchema>;

export const projectionPayloadSchema = z.object({
  session_id: z.string(),
  seed: z.number(),
  glyph_separation: z.number(),
  members: z.array(projectionRowSchema),
  normalization: z.record(z.tuple([z.number(), z.number()])),
});
export type ProjectionPayload = z.infer<typeof projectionPayloadSchema>;

export const sessionCreatedSchema = z.object({
  session_id: z.string(),
  members: z.number(),
});
export type SessionCreated = z.infer<typeof sessionCreatedSchema>;

export const lassoPayloadSchema = z.object({
  session_id: z.string(),
  lasso: z.array(memberTuple),
});
export type LassoPayload = z.infer<typeof lassoPayloadSchema>;

export const boxRowSchema = z.object({
  minute: z.number(),
  min: z.number(),
  q1: z.number(),
  median: z.number(),
  q3: z.number(),
  max: z.number(),
});
export type BoxRow = z.infer<typeof boxRowSchema>;

export const eventsRowSchema = z.object({
  minute: z.number(),
  total: z.number(),
  d: z.record(z.number()),
});
export type EventsRow = z.infer<typeof eventsRowSchema>;

export const flowEdgeSchema = z.object({
  from: z.string(),
  to: z.string(),
  count: z.number(),
  fraction: z.number(),
});
export type FlowEdge = z.infer<typeof flowEdgeSchema>;

export const flowsRowSchema = z.object({
  minute: z.number(),
  total: z.number(),
  f: z.array(flowEdgeSchema),
});
export type FlowsRow = z.infer<typeof flowsRowSchema>;

export const progressionPayloadSchema = z.object({
  session_id: z.string(),
  mode: z.string(),
  anchor: memberTuple.nullable(),
  members: z.array(memberTuple),
  minutes: z.number(),
  box: z.array(boxRowSchema),
  events: z.array(eventsRowSchema),
  flows: z.array(flowsRowSchema),
  anchor_series: z.array(z.number()).nullable(),
  anchor_priorities: z.array(z.string()).nullable(),
});
export type ProgressionPayload = z.infer<typeof progressionPayloadSchema>;

export const summaryPlayerSchema = z.object({
  match_id: z.string(),
  player_id: z.string(),
  team: z.string(),
  hero_id: z.string(),
  hero_type: z.string(),
  lane: z.string(),
  kills: z.number(),
  die: z.number(),
  assistant: z.number(),
  kda: z.number(),
  coin: z.number(),
  metrics: z.record(z.number()),
  label_status: z.union([z.literal(0), z.literal(1), z.literal(2)]),
  label: labelRecordSchema.nullable(),
  prediction: labelRecordSchema.nullable(),
});
export type SummaryPlayer = z.infer<typeof summaryPlayerSchema>;

export const histogramSchema = z.object({
  min: z.number(),
  max: z.number(),
  bins: z.array(z.number()),
});
export type Histogram = z.infer<typeof histogramSchema>;

export const summaryPayloadSchema = z.object({
  match_id: z.string(),
  duration_s: z.number(),
  players: z.array(summaryPlayerSchema),
  histograms: z.record(histogramSchema),
});
export type SummaryPayload = z.infer<typeof summaryPayloadSchema>;

export const streamEventSchema = z.object({
  t: z.number(),
  kind: z.enum(["death", "turret_destroyed", "dragon_killed", "baron_killed"]),
  team: z.enum(["blue", "red"]),
  principal: z.string(),
  y: z.number(),
});
export type StreamEvent = z.infer<typeof streamEventSchema>;

export const combatSchema = z.object({
  start_s: z.number(),
  end_s: z.number(),
  participants: z.array(z.string()),
});
export type Combat = z.infer<typeof combatSchema>;

export const playerEventsRowSchema = z.object({
  player_id: z.string(),
  minute: z.number(),
  kinds: z.array(z.string()),
  contributed_only: z.array(z.string()),
  poke_pct: z.number(),
  monster_pct: z.number(),
  minion_pct: z.number(),
  inactive_fraction: z.number(),
});
export type PlayerEventsRow = z.infer<typeof playerEventsRowSchema>;

export const trajectoryPointSchema = z.object({
  t: z.number(),
  x: z.number(),
  y: z.number(),
});
export type TrajectoryPoint = z.infer<typeof trajectoryPointSchema>;

export const replayPayloadSchema = z.object({
  match_id: z.string(),
  player_id: z.string(),
  from_s: z.number(),
  to_s: z.number(),
  match_stream: z.array(streamEventSchema),
  team_combats: z.array(combatSchema),
  player_events: z.array(playerEventsRowSchema),
  economy: z.array(z.object({ player_id: z.string(), coin: z.number() })),
  trajectories: z.record(z.array(trajectoryPointSchema)),
});
export type ReplayPayload = z.infer<typeof replayPayloadSchema>;

export const profilePayloadSchema = z.object({
  match_id: z.string(),
  player_id: z.string(),
  idle_time_s: z.number(),
  healthy_recall: z.number(),
  surrender_times: z.number(),
});
export type ProfilePayload = z.infer<typeof profilePayloadSchema>;

export const labelWriteSchema = z.object({
  match_id: z.string(),
  player_id: z.string(),
  label: z.enum(["normal", "actor"]),
  source: z.enum(["human", "model"]),
  confidence: z.number(),
  created_at: z.string(),
});
export type LabelWrite = z.infer<typeof labelWriteSchema>;

export const predictPayloadSchema = z.object({
  session_id: z.string(),
  trained_on: z.object({ normal: z.number(), actor: z.number() }),
  predictions: z.array(labelWriteSchema),
});
export type PredictPayload = z.infer<typeof predictPayloadSchema>;

export const errorBodySchema = z.object({
  code: z.string(),
  message: z.string(),
  path: z.string(),
});
export type ErrorBody = z.infer<typeof errorBodySchema>;
