import { describe, expect, it } from "vitest";
import { summaryViewModel } from "../src/views/summary";
import {
  METRIC_COMPONENTS,
  summaryPayloadSchema,
} from "../src/api/types";
import { COLOR_UNLABELED, STROKE_UNLABELED } from "../src/views/glyph";
import { exchange } from "./transport";
import { harness, meta } from "./helpers";

describe("match summary panel", () => {
  async function loaded() {
    const h = harness("summary_replay");
    await h.store.init("all", meta.session_seed);
    await h.store.setLasso(meta.lasso_members);
    await h.store.selectMember(meta.feeder);
    const payload = summaryPayloadSchema.parse(
      exchange(h.fixture, "summary").response,
    );
    return { ...h, payload };
  }

  it("loads the selected member's match and the full replay window", async () => {
    const { store, payload } = await loaded();
    const state = store.getState();
    expect(state.selected).toEqual(meta.feeder);
    expect(state.matchSummary).toEqual(payload);
    expect(state.replay?.from_s).toBe(0);
    expect(state.replay?.to_s).toBe(meta.duration_s);

    const vm = summaryViewModel(state);
    expect(vm.available).toBe(true);
    expect(vm.matchId).toBe(meta.feeder[0]);
    expect(vm.durationS).toBe(payload.duration_s);
    expect(vm.canLabel).toBe(true);
  });

  it("restricts the table to lasso members from this match", async () => {
    const { store, payload } = await loaded();
    const state = store.getState();
    const vm = summaryViewModel(state);
    expect(vm.rows).toHaveLength(1);
    const row = vm.rows[0]!;
    expect(row.player.player_id).toBe(meta.feeder[1]);
    expect(row.selected).toBe(true);
    expect(row.inLasso).toBe(true);
    // nobody is labeled in this walk, so the row keeps the neutral stroke
    expect(row.stroke.color).toBe(COLOR_UNLABELED);
    expect(row.stroke.width).toBe(STROKE_UNLABELED);

    const unrestricted = summaryViewModel({ ...state, lasso: [] });
    expect(unrestricted.rows).toHaveLength(payload.players.length);
    const byId = new Map(unrestricted.rows.map((r) => [r.player.player_id, r]));
    for (const p of payload.players) {
      const r = byId.get(p.player_id)!;
      expect(r.player.kda).toBe(p.kda);
      expect(r.player.coin).toBe(p.coin);
      expect(r.selected).toBe(p.player_id === meta.feeder[1]);
    }
  });

  it("a lasso that misses the match does not hide its players", async () => {
    const { store, payload } = await loaded();
    const state = store.getState();
    const foreign = meta.lasso_members.find((m) => m[0] !== meta.feeder[0])!;
    const vm = summaryViewModel({ ...state, lasso: [foreign] });
    expect(vm.rows).toHaveLength(payload.players.length);
  });

  it("shows every metric histogram in priority order, scaled to its tallest bin", async () => {
    const { store, payload } = await loaded();
    const vm = summaryViewModel(store.getState());
    expect(vm.histograms.map((h) => h.name)).toEqual([...METRIC_COMPONENTS]);
    for (const h of vm.histograms) {
      const source = payload.histograms[h.name]!;
      expect(h.bins).toEqual(source.bins);
      expect(h.min).toBe(source.min);
      expect(h.max).toBe(source.max);
      if (h.bins.some((b) => b > 0)) {
        expect(Math.max(...h.heights)).toBeCloseTo(1);
      }
    }
  });

  it("without a selection there is nothing to label", async () => {
    const { store } = await loaded();
    const vm = summaryViewModel({ ...store.getState(), selected: null });
    expect(vm.canLabel).toBe(false);
    expect(vm.rows.every((r) => !r.selected)).toBe(true);
  });
});
