import { describe, expect, it } from "vitest";
import {
  DEFAULT_REPLAY_DIMS,
  EVENT_SYMBOLS,
  PLAYER_COLORS,
  TRAJECTORY_WIDTH,
  TRAJECTORY_WIDTH_SELECTED,
  replayViewModel,
} from "../src/views/replay";
import {
  profilePayloadSchema,
  replayPayloadSchema,
  type SummaryPayload,
} from "../src/api/types";
import { exchange } from "./transport";
import { blankState, harness, meta } from "./helpers";

async function loaded() {
  const h = harness("summary_replay");
  await h.store.init("all", meta.session_seed);
  await h.store.setLasso(meta.lasso_members);
  await h.store.selectMember(meta.feeder);
  const payload = replayPayloadSchema.parse(
    exchange(h.fixture, "replay_full").response,
  );
  return { ...h, payload };
}

describe("match replay panel", () => {
  it("plots the gold stream with one symbol per event", async () => {
    const { store, payload } = await loaded();
    const vm = replayViewModel(store.getState());
    expect(vm.available).toBe(true);
    expect(vm.matchId).toBe(meta.feeder[0]);
    expect(vm.playerId).toBe(meta.feeder[1]);
    expect(vm.window).toEqual({ fromS: 0, toS: meta.duration_s });

    expect(vm.symbols).toHaveLength(payload.match_stream.length);
    const wanted = new Map<string, number>();
    for (const e of payload.match_stream) {
      wanted.set(e.kind, (wanted.get(e.kind) ?? 0) + 1);
    }
    const got = new Map<string, number>();
    for (const s of vm.symbols) {
      expect(s.symbol).toBe(EVENT_SYMBOLS[s.kind]);
      got.set(s.kind, (got.get(s.kind) ?? 0) + 1);
    }
    expect(got).toEqual(wanted);

    let prevX = -Infinity;
    for (const pt of vm.goldLine) {
      expect(pt.x).toBeGreaterThanOrEqual(prevX);
      prevX = pt.x;
      expect(pt.y).toBeGreaterThanOrEqual(0);
      expect(pt.y).toBeLessThanOrEqual(DEFAULT_REPLAY_DIMS.streamHeight);
    }
    expect(vm.combats).toHaveLength(payload.team_combats.length);
  });

  it("tabulates the selected player's minutes straight from the payload", async () => {
    const { store, payload } = await loaded();
    const vm = replayViewModel(store.getState());
    const mine = payload.player_events.filter(
      (r) => r.player_id === meta.feeder[1],
    );
    expect(vm.minuteRows).toHaveLength(mine.length);
    vm.minuteRows.forEach((row, i) => {
      expect(row.minute).toBe(i);
      const source = mine.find((r) => r.minute === row.minute)!;
      expect(row.inactiveFraction).toBe(source.inactive_fraction);
      for (const cell of row.cells) {
        if (source.kinds.includes(cell.kind)) {
          if (["poke", "monster_killing", "minion_killing"].includes(cell.kind)) {
            continue;
          }
          expect(cell.fill).toEqual({ mode: "full" });
        }
      }
    });
    const first = vm.minuteRows[0]!;
    expect(first.cells.find((c) => c.kind === "inaction")!.fill).toEqual({
      mode: "full",
    });
    expect(first.inactiveFraction).toBe(1);
  });

  it("scales economy bars by the match's richest player", async () => {
    const { store, payload } = await loaded();
    const vm = replayViewModel(store.getState());
    expect(vm.economy).toHaveLength(payload.economy.length);
    const maxCoin = Math.max(...payload.economy.map((e) => e.coin));
    vm.economy.forEach((bar, i) => {
      const source = payload.economy[i]!;
      expect(bar.playerId).toBe(source.player_id);
      expect(bar.coin).toBe(source.coin);
      expect(bar.widthFraction).toBeCloseTo(source.coin / maxCoin);
      expect(bar.color).toBe(PLAYER_COLORS[i % PLAYER_COLORS.length]);
      expect(bar.selected).toBe(source.player_id === meta.feeder[1]);
    });
    expect(Math.max(...vm.economy.map((b) => b.widthFraction))).toBe(1);
  });

  it("draws all ten trajectories with the selected player thicker", async () => {
    const { store, payload } = await loaded();
    const vm = replayViewModel(store.getState());
    expect(vm.trajectories).toHaveLength(10);
    const { mapSize, pad } = DEFAULT_REPLAY_DIMS;
    for (const traj of vm.trajectories) {
      const selected = traj.playerId === meta.feeder[1];
      expect(traj.selected).toBe(selected);
      expect(traj.strokeWidth).toBe(
        selected ? TRAJECTORY_WIDTH_SELECTED : TRAJECTORY_WIDTH,
      );
      expect(traj.points).toHaveLength(
        payload.trajectories[traj.playerId]!.length,
      );
      for (const p of traj.points) {
        expect(p.t).toBeGreaterThanOrEqual(0);
        expect(p.t).toBeLessThanOrEqual(meta.duration_s);
        expect(p.cx).toBeGreaterThanOrEqual(pad - 1e-9);
        expect(p.cx).toBeLessThanOrEqual(mapSize - pad + 1e-9);
        expect(p.cy).toBeGreaterThanOrEqual(pad - 1e-9);
        expect(p.cy).toBeLessThanOrEqual(mapSize - pad + 1e-9);
      }
    }
  });

  it("brushes the window, clamps wild endpoints, and loads the profile", async () => {
    const { store, transport, fixture } = await loaded();
    const [lo, hi] = meta.brush;
    await store.brushReplay(lo, hi);
    let vm = replayViewModel(store.getState());
    expect(vm.window).toEqual({ fromS: lo, toS: hi });
    for (const traj of vm.trajectories) {
      for (const p of traj.points) {
        expect(p.t).toBeGreaterThanOrEqual(lo);
        expect(p.t).toBeLessThanOrEqual(hi);
      }
    }

    await store.brushReplay(-50, 9_000_000);
    vm = replayViewModel(store.getState());
    expect(vm.window).toEqual({ fromS: 0, toS: meta.duration_s });

    await store.loadProfile();
    const profile = profilePayloadSchema.parse(
      exchange(fixture, "profile").response,
    );
    expect(store.getState().profile).toEqual(profile);
    expect(profile.match_id).toBe(meta.feeder[0]);
    expect(profile.player_id).toBe(meta.feeder[1]);

    expect(transport.unused()).toEqual([]);
  });
});

describe("replay geometry on a constructed match", () => {
  const payload = replayPayloadSchema.parse({
    match_id: "mX",
    player_id: "P1",
    from_s: 0,
    to_s: 600,
    match_stream: [
      { t: 120, kind: "turret_destroyed", team: "blue", principal: "P1", y: 300.0 },
      { t: 300, kind: "death", team: "red", principal: "P2", y: -150.0 },
    ],
    team_combats: [{ start_s: 100, end_s: 160, participants: ["P1", "P2"] }],
    player_events: [
      {
        player_id: "P1",
        minute: 0,
        kinds: ["death"],
        contributed_only: ["turret_destruction"],
        poke_pct: 0.4,
        monster_pct: 0.0,
        minion_pct: 0.75,
        inactive_fraction: 0.2,
      },
      {
        player_id: "P2",
        minute: 0,
        kinds: ["hero_killing"],
        contributed_only: [],
        poke_pct: 0.0,
        monster_pct: 0.0,
        minion_pct: 0.0,
        inactive_fraction: 0.0,
      },
    ],
    economy: [
      { player_id: "P1", coin: 100 },
      { player_id: "P2", coin: 200 },
    ],
    trajectories: {
      P1: [
        { t: 0, x: 0, y: 0 },
        { t: 60, x: 10, y: 5 },
      ],
      P2: [
        { t: 0, x: 10, y: 10 },
        { t: 60, x: 0, y: 5 },
      ],
    },
  });

  function vmFor() {
    const state = blankState();
    state.replay = payload;
    state.matchSummary = { duration_s: 600 } as SummaryPayload;
    return replayViewModel(state);
  }

  it("maps combat spans onto the time axis", () => {
    const vm = vmFor();
    const { width, pad } = DEFAULT_REPLAY_DIMS;
    const innerW = width - 2 * pad;
    expect(vm.combats).toHaveLength(1);
    expect(vm.combats[0]!.x0).toBeCloseTo(pad + (100 / 600) * innerW);
    expect(vm.combats[0]!.x1).toBeCloseTo(pad + (160 / 600) * innerW);
    expect(vm.combats[0]!.participants).toEqual(["P1", "P2"]);
  });

  it("fills cells fully, semi for contribution, and by share for volume kinds", () => {
    const vm = vmFor();
    expect(vm.minuteRows).toHaveLength(1);
    const cells = new Map(vm.minuteRows[0]!.cells.map((c) => [c.kind, c.fill]));
    expect(cells.get("death")).toEqual({ mode: "full" });
    expect(cells.get("turret_destruction")).toEqual({ mode: "semi" });
    expect(cells.get("poke")).toEqual({ mode: "fraction", value: 0.4 });
    expect(cells.get("minion_killing")).toEqual({ mode: "fraction", value: 0.75 });
    expect(cells.get("monster_killing")).toEqual({ mode: "none" });
    expect(cells.get("hero_killing")).toEqual({ mode: "none" });
  });

  it("centers the gold axis on the largest swing", () => {
    const vm = vmFor();
    const h = DEFAULT_REPLAY_DIMS.streamHeight;
    const up = vm.symbols.find((s) => s.kind === "turret_destroyed")!;
    const down = vm.symbols.find((s) => s.kind === "death")!;
    expect(up.symbol).toBe("triangle-up");
    expect(down.symbol).toBe("circle");
    // +300 is the extreme: it touches the 12px margin; -150 sits halfway down
    expect(up.y).toBeCloseTo(12);
    expect(down.y).toBeCloseTo(h / 2 + (150 / 300) * (h / 2 - 12));
  });
});
