import { readFileSync } from "node:fs";
import { ApiClient } from "../src/api/client";
import { AppStore, type AppState } from "../src/state/store";
import { FixtureTransport, type Exchange } from "./transport";
import metaJson from "./fixtures/meta.json";

export interface Meta {
  session_seed: number;
  duration_s: number;
  feeder: [string, string];
  afk: [string, string];
  lasso_members: [string, string][];
  narrowing_flow: { t: number; from: string; to: string; count: number };
  narrowed_members: [string, string][];
  empty_flow: { t: number; from: string; to: string };
  label_actors: [string, string][];
  label_normals: [string, string][];
  brush: [number, number];
  filter_query: string;
  filtered_members: [string, string][];
}

export const meta = metaJson as unknown as Meta;

/** Parse a recorded walk; kept out of the type checker by loading at runtime. */
export function loadFixture(name: string): Exchange[] {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as Exchange[];
}

export function harness(fixtureName: string): {
  store: AppStore;
  transport: FixtureTransport;
  fixture: Exchange[];
} {
  const fixture = loadFixture(fixtureName);
  const transport = new FixtureTransport(fixture);
  const store = new AppStore(new ApiClient(transport));
  return { store, transport, fixture };
}

export function sortedMembers(
  members: readonly (readonly [string, string])[],
): [string, string][] {
  return members
    .map((m) => [m[0], m[1]] as [string, string])
    .sort((a, b) => (a[0] + a[1] < b[0] + b[1] ? -1 : 1));
}

/** Blank state for pure view-model tests that bypass the store. */
export function blankState(): AppState {
  return {
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
}
