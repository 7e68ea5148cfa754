/**
 * Turn view models into SVG/HTML strings. Interactive elements carry data-*
 * attributes that the shell wires with delegated event listeners.
 */
import type { ProjectionViewModel } from "../views/projection";
import type { ProgressionViewModel } from "../views/progression";
import type { SummaryViewModel } from "../views/summary";
import type { ReplayViewModel } from "../views/replay";
import { ANCHOR_LINE_COLOR, KIND_COLORS } from "../views/progression";
import { el, esc, polylinePoints, round, sectorPath, svgRoot, symbolPath } from "./svg";

const SECTOR_FILL = "#5b8db8";

export function renderProjection(vm: ProjectionViewModel): string {
  if (!vm.available) {
    return `<p class="placeholder">projection unavailable for the current focus</p>`;
  }
  const nodes: string[] = [];
  for (const g of vm.glyphs) {
    const key = `${g.member[0]}/${g.member[1]}`;
    const children: string[] = [
      el("circle", {
        cx: round(g.cx),
        cy: round(g.cy),
        r: g.r,
        fill: "#ffffff",
        stroke: g.stroke.color,
        "stroke-width": g.stroke.width,
      }),
    ];
    for (const s of g.sectors) {
      if (s.norm <= 0) continue;
      children.push(
        el("path", {
          d: sectorPath(g.cx, g.cy, g.r * 0.82 * s.norm, s.startAngle, s.endAngle),
          fill: SECTOR_FILL,
          "data-kind": s.kind,
        }),
      );
    }
    if (g.inactiveFraction > 0) {
      children.push(
        el("path", {
          d: sectorPath(g.cx, g.cy, g.r * 0.35, 0, g.inactiveFraction * 2 * Math.PI),
          fill: "#444444",
          "data-kind": "inactive_percentage",
        }),
      );
    }
    if (g.reportFraction > 0) {
      children.push(
        el("circle", {
          cx: round(g.cx),
          cy: round(g.cy - g.r - 4),
          r: round(1.5 + 2.5 * g.reportFraction),
          fill: "#b8860b",
          "data-kind": "report_count",
        }),
      );
    }
    nodes.push(
      el(
        "g",
        {
          class:
            "glyph" +
            (g.selected ? " selected" : "") +
            (g.inLasso ? " lassoed" : ""),
          "data-member": key,
        },
        children,
      ),
    );
  }
  return svgRoot(vm.width, vm.height, nodes, { class: "projection-canvas" });
}

export function renderProgression(vm: ProgressionViewModel): string {
  if (!vm.available) {
    return `<p class="placeholder">no cohort selected</p>`;
  }
  if (vm.emptyAfterFlow) {
    return `<p class="placeholder empty-flow">no members follow the selected flow</p>`;
  }
  if (vm.members.length === 0) {
    return `<p class="placeholder">empty cohort</p>`;
  }
  const nodes: string[] = [];
  for (const b of vm.boxes) {
    const w = 10;
    nodes.push(
      el("line", {
        x1: round(b.x),
        y1: round(b.yMin),
        x2: round(b.x),
        y2: round(b.yMax),
        stroke: "#888",
        class: "box-whisker",
        "data-minute": b.minute,
      }),
      el("rect", {
        x: round(b.x - w / 2),
        y: round(b.yQ3),
        width: w,
        height: round(Math.max(0.5, b.yQ1 - b.yQ3)),
        fill: "#cfe0ef",
        stroke: "#5b8db8",
        class: "box-iqr",
      }),
      el("line", {
        x1: round(b.x - w / 2),
        y1: round(b.yMedian),
        x2: round(b.x + w / 2),
        y2: round(b.yMedian),
        stroke: "#23527c",
        class: "box-median",
      }),
    );
  }
  if (vm.anchorLine && vm.anchorLine.length > 0) {
    nodes.push(
      el("polyline", {
        points: polylinePoints(vm.anchorLine.map((p) => ({ x: p.x, y: p.y }))),
        fill: "none",
        stroke: ANCHOR_LINE_COLOR,
        "stroke-width": 2,
        class: "anchor-line",
      }),
    );
  }
  for (const f of vm.flows) {
    nodes.push(
      el("line", {
        x1: round(f.x0),
        y1: round(f.y0),
        x2: round(f.x1),
        y2: round(f.y1),
        stroke: f.selected ? "#23527c" : f.highlighted ? ANCHOR_LINE_COLOR : "#b5c7d8",
        "stroke-width": round(f.width),
        class: "flow" + (f.selected ? " selected" : ""),
        "data-flow": `${f.minute}|${f.from}|${f.to}`,
      }),
    );
  }
  for (const bar of vm.bars) {
    for (const seg of bar.segments) {
      nodes.push(
        el("rect", {
          x: round(bar.x - 7),
          y: round(seg.y0),
          width: 14,
          height: round(Math.max(0.5, seg.y1 - seg.y0)),
          fill: "#ffffff",
          stroke: seg.color,
          "stroke-width": seg.highlighted ? 3 : 1.5,
          class: "bar-segment",
          "data-minute": bar.minute,
          "data-kind": seg.kind,
        }),
      );
    }
  }
  return svgRoot(vm.width, vm.height, nodes, { class: "progression-canvas" });
}

export function renderSummary(vm: SummaryViewModel): string {
  if (!vm.available) {
    return `<p class="placeholder">select a player to summarize its match</p>`;
  }
  const hist = vm.histograms
    .map((h) => {
      const bars = h.heights
        .map((height, i) =>
          el("rect", {
            x: i * 9,
            y: round(30 - height * 30),
            width: 8,
            height: round(Math.max(0.5, height * 30)),
            fill: "#5b8db8",
          }),
        )
        .join("");
      return `<div class="histogram" title="${esc(h.name)}: ${h.min}..${h.max}">` +
        `<svg viewBox="0 0 ${h.bins.length * 9} 30" width="${h.bins.length * 9}" height="30">${bars}</svg>` +
        `<span>${esc(h.name)}</span></div>`;
    })
    .join("");
  const rows = vm.rows
    .map((r) => {
      const p = r.player;
      const key = `${p.match_id}/${p.player_id}`;
      const label = p.label
        ? `${p.label.label} (human)`
        : p.prediction
          ? `${p.prediction.label} (model ${p.prediction.confidence.toFixed(2)})`
          : "-";
      return (
        `<tr class="${r.selected ? "selected" : ""}">` +
        `<td><input type="radio" name="member" data-select="${esc(key)}"${r.selected ? " checked" : ""}/></td>` +
        `<td>${esc(p.player_id)}</td><td>${esc(p.team)}</td><td>${esc(p.lane)}</td>` +
        `<td>${esc(p.hero_id)}</td><td>${p.kills}</td><td>${p.die}</td>` +
        `<td>${p.assistant}</td><td>${p.kda}</td><td>${p.coin}</td>` +
        `<td>${p.metrics["inactive_percentage"]}</td><td>${p.metrics["report_count"]}</td>` +
        `<td style="color:${r.stroke.color}">${esc(label)}</td></tr>`
      );
    })
    .join("");
  return (
    `<div class="summary-head">` +
    `<span>match ${esc(vm.matchId ?? "")}</span>` +
    `<button data-label="normal" data-scope="selected"${vm.canLabel ? "" : " disabled"}>label normal</button>` +
    `<button data-label="actor" data-scope="selected"${vm.canLabel ? "" : " disabled"}>label actor</button>` +
    `</div>` +
    `<div class="histograms">${hist}</div>` +
    `<table class="summary-table"><thead><tr>` +
    `<th></th><th>player</th><th>team</th><th>lane</th><th>hero</th>` +
    `<th>kills</th><th>die</th><th>assist</th><th>kda</th><th>coin</th>` +
    `<th>inactive</th><th>reports</th><th>label</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderReplay(vm: ReplayViewModel): string {
  if (!vm.available || !vm.window) {
    return `<p class="placeholder">select a player to replay its match</p>`;
  }
  const d = vm.dims;
  const stream: string[] = [
    el("line", {
      x1: d.pad,
      y1: round(d.streamHeight / 2),
      x2: d.width - d.pad,
      y2: round(d.streamHeight / 2),
      stroke: "#ccc",
    }),
  ];
  for (const c of vm.combats) {
    stream.push(
      el("rect", {
        x: round(c.x0),
        y: d.streamHeight - 10,
        width: round(Math.max(1, c.x1 - c.x0)),
        height: 6,
        fill: "#e8a33d",
        class: "combat-span",
      }),
    );
  }
  if (vm.goldLine.length > 1) {
    stream.push(
      el("polyline", {
        points: polylinePoints(vm.goldLine),
        fill: "none",
        stroke: "#23527c",
        "stroke-width": 1.5,
        class: "gold-line",
      }),
    );
  }
  for (const s of vm.symbols) {
    stream.push(
      el("path", {
        d: symbolPath(s.symbol, s.x, s.y, 5),
        fill: s.team === "blue" ? "#1f77b4" : "#d62728",
        class: `event-symbol ${s.symbol}`,
        "data-kind": s.kind,
        "data-t": s.t,
      }),
    );
  }
  const windowX0 = d.pad + (vm.window.fromS / (vm.durationS || 1)) * (d.width - 2 * d.pad);
  const windowX1 = d.pad + (vm.window.toS / (vm.durationS || 1)) * (d.width - 2 * d.pad);
  stream.push(
    el("rect", {
      x: round(windowX0),
      y: 0,
      width: round(Math.max(1, windowX1 - windowX0)),
      height: d.streamHeight,
      fill: "#5b8db8",
      opacity: 0.12,
      class: "brush-window",
    }),
  );

  const cellSize = 16;
  const rows = vm.minuteRows
    .map((row) => {
      const cells = row.cells
        .map((cell) => {
          const color = KIND_COLORS[cell.kind] ?? "#444";
          let fill = "";
          if (cell.fill.mode === "full") {
            fill = `<span class="cell full" style="background:${color}"></span>`;
          } else if (cell.fill.mode === "semi") {
            fill = `<span class="cell semi" style="background:linear-gradient(90deg, ${color} 50%, transparent 50%)"></span>`;
          } else if (cell.fill.mode === "fraction") {
            const pct = Math.round(cell.fill.value * 100);
            fill = `<span class="cell fraction" style="background:linear-gradient(0deg, ${color} ${pct}%, transparent ${pct}%)"></span>`;
          } else {
            fill = `<span class="cell none"></span>`;
          }
          return `<td data-kind="${esc(cell.kind)}">${fill}</td>`;
        })
        .join("");
      const inactivePct = Math.round(row.inactiveFraction * 100);
      return (
        `<tr><th>${row.minute}</th>${cells}` +
        `<td class="inactive-cell"><span class="cell fraction" ` +
        `style="background:linear-gradient(0deg, #444 ${inactivePct}%, transparent ${inactivePct}%)" ` +
        `title="inactive ${inactivePct}%"></span></td></tr>`
      );
    })
    .join("");
  const eventsTable =
    `<table class="events-table" style="--cell:${cellSize}px"><thead><tr><th>min</th>` +
    vm.minuteRows[0]?.cells
      .map((c) => `<th title="${esc(c.kind)}">${esc(c.kind.slice(0, 3))}</th>`)
      .join("") +
    `<th>idle</th></tr></thead><tbody>${rows}</tbody></table>`;

  const econ = vm.economy
    .map((e) => {
      return (
        `<div class="econ-row${e.selected ? " selected" : ""}">` +
        `<span class="econ-name">${esc(e.playerId)}</span>` +
        `<span class="econ-bar" style="width:${Math.round(e.widthFraction * 240)}px;background:${e.color}"></span>` +
        `<span class="econ-value">${e.coin}</span></div>`
      );
    })
    .join("");

  const mapNodes: string[] = [];
  for (const tr of vm.trajectories) {
    if (tr.points.length === 0) continue;
    mapNodes.push(
      el("polyline", {
        points: polylinePoints(tr.points.map((p) => ({ x: p.cx, y: p.cy }))),
        fill: "none",
        stroke: tr.color,
        "stroke-width": tr.strokeWidth,
        class: "trajectory" + (tr.selected ? " selected" : ""),
        "data-player": tr.playerId,
      }),
    );
  }

  return (
    `<div class="replay-grid">` +
    `<div class="stream-chart" data-duration="${vm.durationS}">` +
    svgRoot(d.width, d.streamHeight, stream, { class: "stream-canvas" }) +
    `</div>` +
    `<div class="replay-controls">window ${vm.window.fromS}s .. ${vm.window.toS}s ` +
    `<input type="number" id="brush-from" value="${vm.window.fromS}" min="0" max="${vm.durationS}"/>` +
    `<input type="number" id="brush-to" value="${vm.window.toS}" min="0" max="${vm.durationS}"/>` +
    `<button id="brush-apply">brush</button>` +
    `<button id="profile-btn">Profile</button></div>` +
    `<div class="events-chart">${eventsTable}</div>` +
    `<div class="economy-chart">${econ}</div>` +
    `<div class="map-chart">${svgRoot(d.mapSize, d.mapSize, mapNodes, { class: "map-canvas" })}</div>` +
    `</div>`
  );
}
