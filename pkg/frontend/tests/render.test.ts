import { describe, expect, it } from "vitest";
import {
  renderProgression,
  renderProjection,
  renderReplay,
  renderSummary,
} from "../src/render/renderers";
import { projectionViewModel } from "../src/views/projection";
import { progressionViewModel } from "../src/views/progression";
import { summaryViewModel } from "../src/views/summary";
import { replayViewModel } from "../src/views/replay";
import {
  COLOR_ACTOR,
  COLOR_NORMAL,
  STROKE_LABELED,
  STROKE_UNLABELED,
} from "../src/views/glyph";
import { harness, meta } from "./helpers";

function glyphGroup(svg: string, key: string): string {
  const match = svg.match(
    new RegExp(`<g class="glyph[^"]*" data-member="${key}">(.*?)</g>`),
  );
  expect(match, `no glyph group for ${key}`).not.toBeNull();
  return match![1]!;
}

describe("rendered markup", () => {
  it("labeled and predicted borders reach the projection SVG", async () => {
    const { store } = harness("labelflow");
    await store.init("all", meta.session_seed);
    await store.predict();
    await store.labelMember(meta.label_actors[0]!, "actor");
    await store.labelMember(meta.label_actors[1]!, "actor");
    await store.labelMember(meta.label_actors[2]!, "actor");
    await store.labelMember(meta.label_normals[0]!, "normal");
    await store.labelMember(meta.label_normals[1]!, "normal");
    await store.labelMember(meta.label_normals[2]!, "normal");
    await store.predict();

    const state = store.getState();
    const svg = renderProjection(projectionViewModel(state));

    const feeder = glyphGroup(svg, `${meta.feeder[0]}/${meta.feeder[1]}`);
    expect(feeder).toContain(`stroke="${COLOR_ACTOR}" stroke-width="${STROKE_LABELED}"`);

    const normal = glyphGroup(svg, `${meta.label_normals[0]![0]}/${meta.label_normals[0]![1]}`);
    expect(normal).toContain(`stroke="${COLOR_NORMAL}" stroke-width="${STROKE_LABELED}"`);

    const predicted = state.projection!.members.find(
      (r) => !r.label && r.prediction?.label === "normal",
    )!;
    const thin = glyphGroup(svg, `${predicted.match_id}/${predicted.player_id}`);
    expect(thin).toContain(`stroke="${COLOR_NORMAL}" stroke-width="${STROKE_UNLABELED}"`);
  });

  it("flows are clickable by identity and an emptied cohort says so", async () => {
    const { store } = harness("browse");
    await store.init("all", meta.session_seed);
    await store.setLasso(meta.lasso_members);

    let svg = renderProgression(progressionViewModel(store.getState()));
    const nf = meta.narrowing_flow;
    expect(svg).toContain(`data-flow="${nf.t}|${nf.from}|${nf.to}"`);

    await store.selectFlow(nf.t, nf.from, nf.to);
    svg = renderProgression(progressionViewModel(store.getState()));
    expect(svg).toMatch(/class="flow selected"/);

    await store.selectFlow(meta.empty_flow.t, meta.empty_flow.from, meta.empty_flow.to);
    svg = renderProgression(progressionViewModel(store.getState()));
    expect(svg).toContain("no members follow the selected flow");
  });

  it("summary rows offer radio selection and enabled label buttons", async () => {
    const { store } = harness("summary_replay");
    await store.init("all", meta.session_seed);
    await store.setLasso(meta.lasso_members);
    await store.selectMember(meta.feeder);

    const html = renderSummary(summaryViewModel(store.getState()));
    const key = `${meta.feeder[0]}/${meta.feeder[1]}`;
    expect(html).toContain(`data-select="${key}" checked`);
    expect(html).toContain(`<button data-label="actor" data-scope="selected">`);
    expect(html).not.toContain("disabled>label actor");
  });

  it("the replay draws event symbols and a thick selected trajectory", async () => {
    const { store } = harness("summary_replay");
    await store.init("all", meta.session_seed);
    await store.setLasso(meta.lasso_members);
    await store.selectMember(meta.feeder);

    const html = renderReplay(replayViewModel(store.getState()));
    expect(html).toMatch(/class="event-symbol circle" data-kind="death"/);
    expect(html).toMatch(
      new RegExp(
        `<polyline[^>]*stroke-width="3" class="trajectory selected" data-player="${meta.feeder[1]}"`,
      ),
    );
    expect(html).toContain(`window 0s .. ${meta.duration_s}s`);
  });
});
