import { describe, expect, it } from "vitest";
import {
  DEFAULT_CANVAS,
  membersInPolygon,
  projectionViewModel,
} from "../src/views/projection";
import { memberKey } from "../src/state/store";
import { playersPayloadSchema, projectionPayloadSchema } from "../src/api/types";
import { exchange } from "./transport";
import { harness, meta, sortedMembers } from "./helpers";

describe("projection panel", () => {
  it("renders one glyph per focused member at the service coordinates", async () => {
    const { store, fixture } = harness("browse");
    await store.init("all", meta.session_seed);
    const state = store.getState();
    expect(state.sessionId).toBe("s0001");

    const players = playersPayloadSchema.parse(
      exchange(fixture, "players_initial").response,
    );
    const payload = projectionPayloadSchema.parse(
      exchange(fixture, "projection_initial").response,
    );

    const vm = projectionViewModel(state);
    expect(vm.available).toBe(true);
    expect(vm.stats).toEqual(players.counts);
    expect(vm.glyphs).toHaveLength(payload.members.length);

    const byKey = new Map(vm.glyphs.map((g) => [memberKey(g.member), g]));
    for (const row of payload.members) {
      const glyph = byKey.get(`${row.match_id}/${row.player_id}`);
      expect(glyph).toBeDefined();
      expect(glyph!.x).toBe(row.x);
      expect(glyph!.y).toBe(row.y);
    }
    const { width, height, pad } = DEFAULT_CANVAS;
    for (const g of vm.glyphs) {
      expect(g.cx).toBeGreaterThanOrEqual(pad - 1e-9);
      expect(g.cx).toBeLessThanOrEqual(width - pad + 1e-9);
      expect(g.cy).toBeGreaterThanOrEqual(pad - 1e-9);
      expect(g.cy).toBeLessThanOrEqual(height - pad + 1e-9);
    }
  });

  it("lasso polygon hits exactly the recorded members and propagates the cohort", async () => {
    const { store } = harness("browse");
    await store.init("all", meta.session_seed);
    const vm = projectionViewModel(store.getState());

    const target = new Set(meta.lasso_members.map((m) => memberKey(m)));
    const inside = vm.glyphs.filter((g) => target.has(memberKey(g.member)));
    const outside = vm.glyphs.filter((g) => !target.has(memberKey(g.member)));
    expect(inside).toHaveLength(meta.lasso_members.length);

    // Tight canvas box around the recorded members, inflated by half the
    // clearance to the nearest outsider. The recorder guaranteed that gap in
    // data space; the monotone per-axis fit preserves it on the canvas.
    const xs = inside.map((g) => g.cx);
    const ys = inside.map((g) => g.cy);
    const box = {
      x0: Math.min(...xs),
      x1: Math.max(...xs),
      y0: Math.min(...ys),
      y1: Math.max(...ys),
    };
    let gap = Infinity;
    for (const g of outside) {
      const dx = Math.max(box.x0 - g.cx, g.cx - box.x1, 0);
      const dy = Math.max(box.y0 - g.cy, g.cy - box.y1, 0);
      gap = Math.min(gap, Math.max(dx, dy));
    }
    expect(gap).toBeGreaterThan(1e-6);
    const m = gap / 2;
    const polygon: [number, number][] = [
      [box.x0 - m, box.y0 - m],
      [box.x1 + m, box.y0 - m],
      [box.x1 + m, box.y1 + m],
      [box.x0 - m, box.y1 + m],
    ];

    const hit = membersInPolygon(vm.glyphs, polygon);
    expect(sortedMembers(hit)).toEqual(sortedMembers(meta.lasso_members));

    await store.setLasso(meta.lasso_members);
    const state = store.getState();
    expect(state.lasso).toEqual(meta.lasso_members);
    expect(state.progression).not.toBeNull();
    expect(state.progression!.mode).toBe("lasso");
    expect(sortedMembers(state.progression!.members)).toEqual(
      sortedMembers(meta.lasso_members),
    );

    const after = projectionViewModel(state);
    for (const g of after.glyphs) {
      expect(g.inLasso).toBe(target.has(memberKey(g.member)));
    }
  });

  it("needs at least a triangle to hit anything", async () => {
    const { store } = harness("browse");
    await store.init("all", meta.session_seed);
    const vm = projectionViewModel(store.getState());
    expect(membersInPolygon(vm.glyphs, [])).toEqual([]);
    expect(
      membersInPolygon(vm.glyphs, [
        [0, 0],
        [900, 900],
      ]),
    ).toEqual([]);
  });

  it("an empty lasso clears the cohort locally without a service call", async () => {
    const { store } = harness("browse");
    await store.init("all", meta.session_seed);
    await store.setLasso(meta.lasso_members);
    await store.setLasso([]);
    const state = store.getState();
    expect(state.lasso).toEqual([]);
    expect(state.progression).toBeNull();
    expect(state.flow).toBeNull();
  });
});
