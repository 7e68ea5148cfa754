/**
 * Browser shell: mounts the four views, wires delegated events to store
 * actions, and re-renders panels from each published state snapshot.
 */
import { ApiClient, FetchTransport } from "./api/client";
import { AppStore } from "./state/store";
import type { Member } from "./api/types";
import { projectionViewModel, membersInPolygon, type CanvasGlyph } from "./views/projection";
import { progressionViewModel } from "./views/progression";
import { summaryViewModel } from "./views/summary";
import { replayViewModel } from "./views/replay";
import {
  renderProgression,
  renderProjection,
  renderReplay,
  renderSummary,
} from "./render/renderers";
import { el, polylinePoints, svgRoot } from "./render/svg";

const api = new ApiClient(new FetchTransport(""));
const store = new AppStore(api);

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function parseMember(key: string): Member {
  const slash = key.indexOf("/");
  return [key.slice(0, slash), key.slice(slash + 1)];
}

let currentGlyphs: CanvasGlyph[] = [];
let lassoPath: [number, number][] = [];
let lassoActive = false;

function render(): void {
  const state = store.getState();

  const pvm = projectionViewModel(state);
  currentGlyphs = pvm.glyphs;
  byId("stats").textContent = pvm.stats
    ? `focused ${pvm.stats.focused} / labeled ${pvm.stats.labeled}`
    : "no session";
  byId("projection").innerHTML = renderProjection(pvm);
  drawLassoOverlay();

  byId("progression").innerHTML = renderProgression(progressionViewModel(state));
  byId("summary").innerHTML = renderSummary(summaryViewModel(state));
  byId("replay").innerHTML = renderReplay(replayViewModel(state));

  const notice = byId("notice");
  if (state.notice) {
    notice.textContent = `${state.notice.code}: ${state.notice.message}`;
    notice.classList.add("visible");
  } else {
    notice.textContent = "";
    notice.classList.remove("visible");
  }

  const profile = byId("profile");
  if (state.profile) {
    profile.innerHTML =
      `<b>${state.profile.match_id}/${state.profile.player_id}</b> ` +
      `idle ${state.profile.idle_time_s}s, ` +
      `healthy recalls ${state.profile.healthy_recall}, ` +
      `surrender votes ${state.profile.surrender_times}`;
  } else {
    profile.innerHTML = "";
  }

  const predictBtn = byId("predict-btn") as HTMLButtonElement;
  predictBtn.disabled = state.predicting;
  predictBtn.textContent = state.predicting ? "predicting..." : "predict";

  const modeInputs = document.querySelectorAll<HTMLInputElement>(
    "input[name=progression-mode]",
  );
  for (const input of modeInputs) {
    input.checked = input.value === state.progressionMode;
  }
}

function svgPoint(svg: SVGSVGElement, ev: PointerEvent): [number, number] {
  const rect = svg.getBoundingClientRect();
  const vb = svg.viewBox.baseVal;
  const x = ((ev.clientX - rect.left) / rect.width) * vb.width;
  const y = ((ev.clientY - rect.top) / rect.height) * vb.height;
  return [x, y];
}

function drawLassoOverlay(): void {
  const overlay = byId("lasso-overlay");
  if (lassoPath.length < 2) {
    overlay.innerHTML = "";
    return;
  }
  overlay.innerHTML = svgRoot(760, 560, [
    el("polyline", {
      points: polylinePoints(lassoPath.map(([x, y]) => ({ x, y }))),
      fill: "rgba(91,141,184,0.08)",
      stroke: "#5b8db8",
      "stroke-dasharray": "4 3",
    }),
  ]);
}

function wireLasso(): void {
  const panel = byId("projection-wrap");
  panel.addEventListener("pointerdown", (ev) => {
    const svg = panel.querySelector<SVGSVGElement>("svg.projection-canvas");
    if (!svg || (ev.target as Element).closest(".glyph")) return;
    lassoActive = true;
    lassoPath = [svgPoint(svg, ev)];
    panel.setPointerCapture(ev.pointerId);
  });
  panel.addEventListener("pointermove", (ev) => {
    if (!lassoActive) return;
    const svg = panel.querySelector<SVGSVGElement>("svg.projection-canvas");
    if (!svg) return;
    lassoPath.push(svgPoint(svg, ev));
    drawLassoOverlay();
  });
  panel.addEventListener("pointerup", () => {
    if (!lassoActive) return;
    lassoActive = false;
    const polygon = lassoPath;
    lassoPath = [];
    drawLassoOverlay();
    if (polygon.length >= 3) {
      void store.setLasso(membersInPolygon(currentGlyphs, polygon));
    }
  });
}

function wireActions(): void {
  document.addEventListener("click", (ev) => {
    const target = ev.target as Element;

    const glyph = target.closest<HTMLElement>("[data-member]");
    if (glyph?.dataset.member) {
      void store.selectMember(parseMember(glyph.dataset.member));
      return;
    }
    const flow = target.closest<HTMLElement>("[data-flow]");
    if (flow?.dataset.flow) {
      const [t, from, to] = flow.dataset.flow.split("|");
      void store.selectFlow(Number(t), from ?? "", to ?? "");
      return;
    }
    const label = target.closest<HTMLElement>("[data-label]");
    if (label?.dataset.label) {
      const value = label.dataset.label as "normal" | "actor";
      if (label.dataset.scope === "lasso") void store.labelLasso(value);
      else void store.labelSelected(value);
      return;
    }
    switch (target.id) {
      case "predict-btn":
        void store.predict();
        return;
      case "apply-filters": {
        const input = byId("filters-input") as HTMLInputElement;
        void store.applyFilters(input.value.trim());
        return;
      }
      case "clear-flow":
        void store.clearFlow();
        return;
      case "brush-apply": {
        const from = Number((byId("brush-from") as HTMLInputElement).value);
        const to = Number((byId("brush-to") as HTMLInputElement).value);
        void store.brushReplay(from, to);
        return;
      }
      case "profile-btn":
        void store.loadProfile();
        return;
      case "notice":
        store.clearNotice();
        return;
    }
  });

  document.addEventListener("change", (ev) => {
    const target = ev.target as HTMLInputElement;
    if (target.name === "progression-mode") {
      void store.setProgressionMode(target.value as "lasso" | "history" | "hero");
      return;
    }
    if (target.dataset.select) {
      void store.selectMember(parseMember(target.dataset.select));
    }
  });
}

export function boot(): void {
  store.subscribe(render);
  wireActions();
  wireLasso();
  void store.init("all", 0);
}

if (typeof document !== "undefined" && document.getElementById("projection")) {
  boot();
}
