/**
 * HTTP client for the labeling service.
 *
 * Transport is injectable so contract tests can replay recorded exchanges;
 * the browser uses FetchTransport against the live service.
 */
import { z } from "zod";
import {
  errorBodySchema,
  labelWriteSchema,
  lassoPayloadSchema,
  playersPayloadSchema,
  predictPayloadSchema,
  profilePayloadSchema,
  progressionPayloadSchema,
  projectionPayloadSchema,
  replayPayloadSchema,
  sessionCreatedSchema,
  summaryPayloadSchema,
  type LabelWrite,
  type LassoPayload,
  type Member,
  type PlayersPayload,
  type PredictPayload,
  type ProfilePayload,
  type ProgressionPayload,
  type ProjectionPayload,
  type ReplayPayload,
  type SessionCreated,
  type SummaryPayload,
} from "./types";

export interface TransportRequest {
  method: "GET" | "POST";
  /** Path including the query string, e.g. "/sessions/s0001/players?filters=". */
  path: string;
  body?: unknown;
  signal?: AbortSignal;
}

export interface TransportResponse {
  status: number;
  body: unknown;
}

export interface Transport {
  request(req: TransportRequest): Promise<TransportResponse>;
}

/** Error body raised for any non-2xx service response. */
export class ServiceError extends Error {
  readonly status: number;
  readonly code: string;
  readonly path: string;

  constructor(status: number, code: string, message: string, path: string) {
    super(message);
    this.name = "ServiceError";
    this.status = status;
    this.code = code;
    this.path = path;
  }
}

export class FetchTransport implements Transport {
  constructor(private readonly baseUrl: string = "") {}

  async request(req: TransportRequest): Promise<TransportResponse> {
    const init: RequestInit = { method: req.method, signal: req.signal };
    if (req.body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(req.body);
    }
    const res = await fetch(this.baseUrl + req.path, init);
    const text = await res.text();
    let body: unknown = null;
    if (text) {
      try {
        body = JSON.parse(text);
      } catch {
        body = text;
      }
    }
    return { status: res.status, body };
  }
}

function query(params: Record<string, string | number | undefined>): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(params)) {
    if (value === undefined) continue;
    parts.push(`${encodeURIComponent(key)}=${encodeURIComponent(String(value))}`);
  }
  return parts.length ? `?${parts.join("&")}` : "";
}

export interface ProgressionQuery {
  mode: "lasso" | "history" | "hero";
  anchorMatch?: string;
  anchorPlayer?: string;
  limit?: number;
  flow?: { t: number; from: string; to: string } | null;
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  private async call<T>(
    req: TransportRequest,
    schema: z.ZodType<T>,
  ): Promise<T> {
    const res = await this.transport.request(req);
    if (res.status >= 200 && res.status < 300) {
      return schema.parse(res.body);
    }
    const parsed = errorBodySchema.safeParse(res.body);
    if (parsed.success) {
      throw new ServiceError(
        res.status,
        parsed.data.code,
        parsed.data.message,
        parsed.data.path,
      );
    }
    throw new ServiceError(res.status, "unexpected_error", String(res.body), req.path);
  }

  createSession(
    members: "all" | Member[],
    seed: number,
    signal?: AbortSignal,
  ): Promise<SessionCreated> {
    const body = {
      members: members === "all" ? "all" : members.map((m) => [m[0], m[1]]),
      seed,
    };
    return this.call(
      { method: "POST", path: "/sessions", body, signal },
      sessionCreatedSchema,
    );
  }

  players(
    sessionId: string,
    filters?: string,
    signal?: AbortSignal,
  ): Promise<PlayersPayload> {
    const q = filters === undefined ? "" : query({ filters });
    return this.call(
      { method: "GET", path: `/sessions/${sessionId}/players${q}`, signal },
      playersPayloadSchema,
    );
  }

  projection(
    sessionId: string,
    seed?: number,
    signal?: AbortSignal,
  ): Promise<ProjectionPayload> {
    const q = seed === undefined ? "" : query({ seed });
    return this.call(
      { method: "GET", path: `/sessions/${sessionId}/projection${q}`, signal },
      projectionPayloadSchema,
    );
  }

  lasso(
    sessionId: string,
    members: Member[],
    signal?: AbortSignal,
  ): Promise<LassoPayload> {
    return this.call(
      {
        method: "POST",
        path: `/sessions/${sessionId}/lasso`,
        body: { members: members.map((m) => [m[0], m[1]]) },
        signal,
      },
      lassoPayloadSchema,
    );
  }

  progression(
    sessionId: string,
    opts: ProgressionQuery,
    signal?: AbortSignal,
  ): Promise<ProgressionPayload> {
    const q = query({
      mode: opts.mode,
      anchor_match: opts.anchorMatch,
      anchor_player: opts.anchorPlayer,
      limit: opts.limit,
      flow_t: opts.flow ? opts.flow.t : undefined,
      flow_from: opts.flow ? opts.flow.from : undefined,
      flow_to: opts.flow ? opts.flow.to : undefined,
    });
    return this.call(
      { method: "GET", path: `/sessions/${sessionId}/progression${q}`, signal },
      progressionPayloadSchema,
    );
  }

  matchSummary(matchId: string, signal?: AbortSignal): Promise<SummaryPayload> {
    return this.call(
      { method: "GET", path: `/matches/${matchId}/summary`, signal },
      summaryPayloadSchema,
    );
  }

  replay(
    matchId: string,
    player: string,
    fromS: number,
    toS: number,
    signal?: AbortSignal,
  ): Promise<ReplayPayload> {
    const q = query({ player, from_s: fromS, to_s: toS });
    return this.call(
      { method: "GET", path: `/matches/${matchId}/replay${q}`, signal },
      replayPayloadSchema,
    );
  }

  profile(
    matchId: string,
    player: string,
    signal?: AbortSignal,
  ): Promise<ProfilePayload> {
    const q = query({ player });
    return this.call(
      { method: "GET", path: `/matches/${matchId}/profile${q}`, signal },
      profilePayloadSchema,
    );
  }

  postLabel(
    member: Member,
    label: "normal" | "actor",
    signal?: AbortSignal,
  ): Promise<LabelWrite> {
    return this.call(
      {
        method: "POST",
        path: "/labels",
        body: { match_id: member[0], player_id: member[1], label, source: "human" },
        signal,
      },
      labelWriteSchema,
    );
  }

  predict(sessionId: string, signal?: AbortSignal): Promise<PredictPayload> {
    return this.call(
      { method: "POST", path: `/sessions/${sessionId}/predict`, signal },
      predictPayloadSchema,
    );
  }

  /** URL for the label download link; the browser fetches it natively. */
  exportUrl(): string {
    return "/labels/export.csv";
  }
}
