/**
 * Drive the UI state container against a running service instance, start to
 * finish: session, filters, lasso, flow narrowing, replay brushing, labels,
 * predict. Exits nonzero on the first broken invariant.
 *
 *   actorlens serve --port 8401 --data-dir <fresh dir>   # with a corpus ingested
 *   npx vite-node scripts/live_drive.ts http://localhost:8401
 */
import { ApiClient, FetchTransport } from "../src/api/client";
import { AppStore, memberKey } from "../src/state/store";
import { projectionViewModel } from "../src/views/projection";
import { progressionViewModel } from "../src/views/progression";
import { summaryViewModel } from "../src/views/summary";
import { replayViewModel } from "../src/views/replay";
import { COLOR_ACTOR, STROKE_LABELED, STROKE_UNLABELED } from "../src/views/glyph";
import type { Member } from "../src/api/types";

const base = process.argv[2] ?? "http://localhost:8400";

function assert(cond: unknown, msg: string): asserts cond {
  if (!cond) {
    console.error(`FAIL: ${msg}`);
    process.exit(1);
  }
}

const store = new AppStore(new ApiClient(new FetchTransport(base)));

await store.init("all", 2);
let state = store.getState();
assert(state.sessionId, "session created");
assert(state.counts && state.counts.focused > 0, "players fetched");
const total = state.counts!.focused;
let vm = projectionViewModel(state);
assert(vm.available && vm.glyphs.length === total, "projection laid out");

// filters: isolate heavy deaths, then clear
await store.applyFilters("death:8:99");
state = store.getState();
assert(state.counts!.focused < total, "filter narrowed the focus");
const heavy = state.players.map(
  (r) => [r.match_id, r.player_id] as Member,
);
assert(heavy.length >= 1, "at least one heavy-death member");
if (state.counts!.focused < 3) {
  assert(state.projection === null, "stale coordinates dropped");
  assert(state.notice?.code === "too_few_points", "projection refusal surfaced");
}
await store.applyFilters("");
state = store.getState();
assert(state.counts!.focused === total, "filter cleared");
vm = projectionViewModel(state);

// lasso the first heavy member plus its three nearest glyphs
const anchor = heavy[0]!;
const anchorGlyph = vm.glyphs.find(
  (g) => memberKey(g.member) === memberKey(anchor),
)!;
const nearest = vm.glyphs
  .filter((g) => g !== anchorGlyph)
  .sort(
    (a, b) =>
      Math.hypot(a.cx - anchorGlyph.cx, a.cy - anchorGlyph.cy) -
      Math.hypot(b.cx - anchorGlyph.cx, b.cy - anchorGlyph.cy),
  )
  .slice(0, 3)
  .map((g) => g.member as Member);
await store.setLasso([anchor, ...nearest]);
state = store.getState();
assert(state.lasso.length === 4, "lasso echoed");
assert(state.progression !== null, "cohort progression fetched");
const cohort = new Set(state.progression!.members.map((m) => memberKey(m)));
assert(cohort.has(memberKey(anchor)), "anchor inside the cohort");

// narrow by the first partial flow, then clear back to the full cohort
let pvm = progressionViewModel(state);
assert(pvm.available && pvm.bars.length > 0, "progression drawn");
const partial = pvm.flows.find((f) => f.fraction < 1) ?? pvm.flows[0];
if (partial) {
  await store.selectFlow(partial.minute, partial.from, partial.to);
  state = store.getState();
  const narrowed = state.progression!.members;
  assert(
    narrowed.every((m) => cohort.has(memberKey(m))),
    "flow cohort stays inside the lasso",
  );
  await store.clearFlow();
  state = store.getState();
  assert(
    state.progression!.members.length === cohort.size,
    "clearing the flow restores the cohort",
  );
}

// inspect the anchor's match, brush the replay, clamp a wild brush
await store.selectMember(anchor);
state = store.getState();
const duration = state.matchSummary!.duration_s;
assert(summaryViewModel(state).available, "summary drawn");
let rvm = replayViewModel(state);
assert(rvm.available, "replay drawn");
const opened = rvm.window!;
assert(
  opened.fromS === 0 && opened.toS === duration,
  "replay opens on the full match",
);
assert(rvm.trajectories.length === 10, "ten trajectories");
await store.brushReplay(60, 180);
rvm = replayViewModel(store.getState());
const brushed = rvm.window!;
assert(brushed.fromS === 60 && brushed.toS === 180, "brush applied");
await store.brushReplay(-50, duration * 10);
rvm = replayViewModel(store.getState());
const clamped = rvm.window!;
assert(
  clamped.fromS === 0 && clamped.toS === duration,
  "wild brush clamps to the match",
);
await store.loadProfile();
assert(store.getState().profile !== null, "profile loaded");

// label three actors and three normals, then predict the rest
await store.predict();
state = store.getState();
assert(
  state.notice?.code === "insufficient_labels",
  "predict refuses before both classes have labels",
);
const rows = state.players.map((r) => [r.match_id, r.player_id] as Member);
const actors = [anchor, ...rows.filter((m) => memberKey(m) !== memberKey(anchor)).slice(0, 2)];
const normals = rows
  .filter((m) => !actors.some((a) => memberKey(a) === memberKey(m)))
  .slice(0, 3);
for (const m of actors) await store.labelMember(m, "actor");
for (const m of normals) await store.labelMember(m, "normal");
state = store.getState();
assert(state.counts!.labeled === 6, "six labels counted");
vm = projectionViewModel(state);
const labeled = vm.glyphs.find((g) => memberKey(g.member) === memberKey(anchor))!;
assert(
  labeled.stroke.color === COLOR_ACTOR && labeled.stroke.width === STROKE_LABELED,
  "human actor label reaches the glyph border",
);

await store.predict();
state = store.getState();
vm = projectionViewModel(state);
let thin = 0;
for (const g of vm.glyphs) {
  if (!g.stroke.labeled && g.stroke.width === STROKE_UNLABELED) thin += 1;
}
const covered = state.projection!.members.every(
  (r) => r.label !== null || r.prediction !== null,
);
assert(covered, "every member labeled or predicted after predict");
assert(thin === total - 6, "predictions keep thin borders");

console.log("ui drive ok:", {
  focused: total,
  cohort: cohort.size,
  labeled: state.counts!.labeled,
});
