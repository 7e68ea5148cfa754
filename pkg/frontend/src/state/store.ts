/**
 * Single client-side state container.
 *
 * All views read from one immutable AppState snapshot and mutate it only
 * through the action methods below, which call the service and then publish
 * a new snapshot. Responses are applied only when they are still current:
 * every fetch slot carries an epoch, stale responses are dropped, and the
 * in-flight request is aborted when a newer action supersedes it.
 */
import { ApiClient, ServiceError } from "../api/client";
import type {
  FilterSpec,
  Member,
  PlayersPayload,
  ProfilePayload,
  ProgressionPayload,
  ProjectionPayload,
  ReplayPayload,
  SummaryPayload,
} from "../api/types";

export type ProgressionMode = "lasso" | "history" | "hero";

export interface FlowSelection {
  t: number;
  from: string;
  to: string;
}

export interface Notice {
  code: string;
  message: string;
}

export interface AppState {
  sessionId: string | null;
  seed: number;
  filtersRaw: string;
  filters: FilterSpec[];
  counts: { focused: number; labeled: number } | null;
  players: PlayersPayload["members"];
  projection: ProjectionPayload | null;
  lasso: Member[];
  selected: Member | null;
  progressionMode: ProgressionMode;
  flow: FlowSelection | null;
  progression: ProgressionPayload | null;
  matchSummary: SummaryPayload | null;
  replay: ReplayPayload | null;
  profile: ProfilePayload | null;
  predicting: boolean;
  notice: Notice | null;
}

const INITIAL: AppState = {
  sessionId: null,
  seed: 0,
  filtersRaw: "",
  filters: [],
  counts: null,
  players: [],
  projection: null,
  lasso: [],
  selected: null,
  progressionMode: "lasso",
  flow: null,
  progression: null,
  matchSummary: null,
  replay: null,
  profile: null,
  predicting: false,
  notice: null,
};

type Slot =
  | "players"
  | "projection"
  | "progression"
  | "summary"
  | "replay"
  | "profile";

type Listener = (state: AppState) => void;

function sameMember(a: Member, b: Member): boolean {
  return a[0] === b[0] && a[1] === b[1];
}

export function memberKey(m: Member): string {
  return `${m[0]}/${m[1]}`;
}

export class AppStore {
  private state: AppState = INITIAL;
  private listeners = new Set<Listener>();
  private epochs: Record<Slot, number> = {
    players: 0,
    projection: 0,
    progression: 0,
    summary: 0,
    replay: 0,
    profile: 0,
  };
  private aborts: Partial<Record<Slot, AbortController>> = {};

  constructor(private readonly api: ApiClient) {}

  getState(): AppState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private publish(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  private issue(slot: Slot): { epoch: number; signal: AbortSignal } {
    this.aborts[slot]?.abort();
    const controller = new AbortController();
    this.aborts[slot] = controller;
    this.epochs[slot] += 1;
    return { epoch: this.epochs[slot], signal: controller.signal };
  }

  private fresh(slot: Slot, epoch: number): boolean {
    return this.epochs[slot] === epoch;
  }

  private fail(err: unknown): void {
    if (err instanceof ServiceError) {
      this.publish({ notice: { code: err.code, message: err.message } });
      return;
    }
    if (err instanceof Error && err.name === "AbortError") return;
    throw err;
  }

  clearNotice(): void {
    if (this.state.notice) this.publish({ notice: null });
  }

  // -- session ------------------------------------------------------------

  async init(members: "all" | Member[] = "all", seed = 0): Promise<void> {
    try {
      const created = await this.api.createSession(members, seed);
      this.publish({ ...INITIAL, sessionId: created.session_id, seed });
      await this.refreshPlayers();
      await this.refreshProjection();
    } catch (err) {
      this.fail(err);
    }
  }

  private async refreshPlayers(filters?: string): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid) return;
    const { epoch, signal } = this.issue("players");
    const payload = await this.api.players(sid, filters, signal);
    if (!this.fresh("players", epoch)) return;
    const focused = new Set(payload.members.map((r) => `${r.match_id}/${r.player_id}`));
    const lasso = this.state.lasso.filter((m) => focused.has(memberKey(m)));
    const selected =
      this.state.selected && focused.has(memberKey(this.state.selected))
        ? this.state.selected
        : null;
    this.publish({
      players: payload.members,
      counts: payload.counts,
      filters: payload.filters,
      lasso,
      selected,
      matchSummary: selected ? this.state.matchSummary : null,
      replay: selected ? this.state.replay : null,
      profile: selected ? this.state.profile : null,
    });
  }

  private async refreshProjection(): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid) return;
    const { epoch, signal } = this.issue("projection");
    try {
      const payload = await this.api.projection(sid, undefined, signal);
      if (!this.fresh("projection", epoch)) return;
      this.publish({ projection: payload });
    } catch (err) {
      if (!this.fresh("projection", epoch)) return;
      this.publish({ projection: null });
      this.fail(err);
    }
  }

  // -- filter panel ---------------------------------------------------------

  /**
   * Commit the filter panel. Coordinates are refetched afterwards so the
   * projection never shows a stale layout for the new focus.
   */
  async applyFilters(raw: string): Promise<void> {
    if (!this.state.sessionId) return;
    try {
      this.publish({ filtersRaw: raw });
      await this.refreshPlayers(raw);
      await this.refreshProjection();
      if (this.state.progressionMode === "lasso" && this.state.progression) {
        await this.refreshProgression();
      }
    } catch (err) {
      this.fail(err);
    }
  }

  // -- lasso ---------------------------------------------------------------

  async setLasso(members: Member[]): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid) return;
    if (members.length === 0) {
      this.publish({ lasso: [], progression: null, flow: null });
      return;
    }
    try {
      const payload = await this.api.lasso(sid, members);
      this.publish({ lasso: payload.lasso, flow: null });
      if (this.state.progressionMode === "lasso") {
        await this.refreshProgression();
      }
    } catch (err) {
      this.fail(err);
    }
  }

  // -- progression -----------------------------------------------------------

  async setProgressionMode(mode: ProgressionMode): Promise<void> {
    this.publish({ progressionMode: mode, flow: null });
    await this.refreshProgression();
  }

  async selectFlow(t: number, from: string, to: string): Promise<void> {
    this.publish({ flow: { t, from, to } });
    await this.refreshProgression();
  }

  async clearFlow(): Promise<void> {
    this.publish({ flow: null });
    await this.refreshProgression();
  }

  private async refreshProgression(): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid) return;
    const mode = this.state.progressionMode;
    if (mode === "lasso" && this.state.lasso.length === 0) {
      this.publish({ progression: null });
      return;
    }
    let anchorMatch: string | undefined;
    let anchorPlayer: string | undefined;
    if (mode !== "lasso") {
      if (!this.state.selected) {
        this.publish({
          progression: null,
          notice: {
            code: "no_anchor",
            message: "select a player before switching to history or hero mode",
          },
        });
        return;
      }
      anchorMatch = this.state.selected[0];
      anchorPlayer = this.state.selected[1];
    }
    const { epoch, signal } = this.issue("progression");
    try {
      const payload = await this.api.progression(
        sid,
        { mode, anchorMatch, anchorPlayer, flow: this.state.flow },
        signal,
      );
      if (!this.fresh("progression", epoch)) return;
      this.publish({ progression: payload });
    } catch (err) {
      if (!this.fresh("progression", epoch)) return;
      this.fail(err);
    }
  }

  // -- member selection and replay -------------------------------------------

  async selectMember(member: Member): Promise<void> {
    const inFocus = this.state.players.some(
      (r) => r.match_id === member[0] && r.player_id === member[1],
    );
    if (!inFocus) return;
    if (this.state.selected && sameMember(this.state.selected, member)) return;
    this.publish({ selected: member, profile: null });
    const { epoch, signal } = this.issue("summary");
    try {
      const summary = await this.api.matchSummary(member[0], signal);
      if (!this.fresh("summary", epoch)) return;
      this.publish({ matchSummary: summary });
      await this.fetchReplay(member, 0, summary.duration_s);
    } catch (err) {
      if (!this.fresh("summary", epoch)) return;
      this.fail(err);
    }
  }

  /** Brush the replay window; out-of-range endpoints clamp to the match. */
  async brushReplay(fromS: number, toS: number): Promise<void> {
    const member = this.state.selected;
    const duration = this.state.matchSummary?.duration_s;
    if (!member || duration === undefined) return;
    let lo = Math.max(0, Math.min(fromS, duration));
    let hi = Math.max(0, Math.min(toS, duration));
    if (!(lo < hi)) {
      lo = 0;
      hi = duration;
    }
    await this.fetchReplay(member, lo, hi);
  }

  private async fetchReplay(member: Member, fromS: number, toS: number): Promise<void> {
    const { epoch, signal } = this.issue("replay");
    try {
      const payload = await this.api.replay(member[0], member[1], fromS, toS, signal);
      if (!this.fresh("replay", epoch)) return;
      this.publish({ replay: payload });
    } catch (err) {
      if (!this.fresh("replay", epoch)) return;
      this.fail(err);
    }
  }

  async loadProfile(): Promise<void> {
    const member = this.state.selected;
    if (!member) return;
    const { epoch, signal } = this.issue("profile");
    try {
      const payload = await this.api.profile(member[0], member[1], signal);
      if (!this.fresh("profile", epoch)) return;
      this.publish({ profile: payload });
    } catch (err) {
      if (!this.fresh("profile", epoch)) return;
      this.fail(err);
    }
  }

  // -- labeling ----------------------------------------------------------------

  /**
   * Record a human label, then refetch the focus and the projection so the
   * glyph encodings reflect the new label within one refetch cycle.
   */
  async labelMember(member: Member, label: "normal" | "actor"): Promise<void> {
    try {
      await this.api.postLabel(member, label);
      await this.refreshPlayers();
      await this.refreshProjection();
    } catch (err) {
      this.fail(err);
    }
  }

  async labelSelected(label: "normal" | "actor"): Promise<void> {
    if (!this.state.selected) return;
    await this.labelMember(this.state.selected, label);
  }

  async labelLasso(label: "normal" | "actor"): Promise<void> {
    for (const member of this.state.lasso) {
      try {
        await this.api.postLabel(member, label);
      } catch (err) {
        this.fail(err);
        return;
      }
    }
    if (this.state.lasso.length === 0) return;
    try {
      await this.refreshPlayers();
      await this.refreshProjection();
    } catch (err) {
      this.fail(err);
    }
  }

  async predict(): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid || this.state.predicting) return;
    this.publish({ predicting: true });
    try {
      await this.api.predict(sid);
      await this.refreshPlayers();
      await this.refreshProjection();
    } catch (err) {
      this.fail(err);
    } finally {
      this.publish({ predicting: false });
    }
  }
}
