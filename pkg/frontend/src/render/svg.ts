/** Minimal SVG string construction shared by the view renderers. */

export type Attrs = Record<string, string | number | undefined>;

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
};

export function esc(value: string): string {
  return value.replace(/[&<>"]/g, (c) => ESCAPES[c] ?? c);
}

export function el(tag: string, attrs: Attrs, children: string[] = []): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(attrs)) {
    if (value === undefined) continue;
    parts.push(` ${key}="${esc(String(value))}"`);
  }
  const open = `<${tag}${parts.join("")}`;
  if (children.length === 0) return `${open}/>`;
  return `${open}>${children.join("")}</${tag}>`;
}

export function svgRoot(
  width: number,
  height: number,
  children: string[],
  attrs: Attrs = {},
): string {
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      viewBox: `0 0 ${width} ${height}`,
      width,
      height,
      ...attrs,
    },
    children,
  );
}

export function polylinePoints(points: { x: number; y: number }[]): string {
  return points.map((p) => `${round(p.x)},${round(p.y)}`).join(" ");
}

export function round(v: number): number {
  return Math.round(v * 100) / 100;
}

/** Arc sector path from the circle center, angles in radians from 12 o'clock. */
export function sectorPath(
  cx: number,
  cy: number,
  r: number,
  startAngle: number,
  endAngle: number,
): string {
  const sx = cx + r * Math.sin(startAngle);
  const sy = cy - r * Math.cos(startAngle);
  const ex = cx + r * Math.sin(endAngle);
  const ey = cy - r * Math.cos(endAngle);
  const large = endAngle - startAngle > Math.PI ? 1 : 0;
  return (
    `M ${round(cx)} ${round(cy)} L ${round(sx)} ${round(sy)} ` +
    `A ${round(r)} ${round(r)} 0 ${large} 1 ${round(ex)} ${round(ey)} Z`
  );
}

export function symbolPath(
  kind: "circle" | "triangle-up" | "triangle-down" | "diamond",
  cx: number,
  cy: number,
  r: number,
): string {
  switch (kind) {
    case "circle":
      return (
        `M ${round(cx - r)} ${round(cy)} ` +
        `A ${r} ${r} 0 1 0 ${round(cx + r)} ${round(cy)} ` +
        `A ${r} ${r} 0 1 0 ${round(cx - r)} ${round(cy)} Z`
      );
    case "triangle-up":
      return `M ${round(cx)} ${round(cy - r)} L ${round(cx + r)} ${round(cy + r)} L ${round(cx - r)} ${round(cy + r)} Z`;
    case "triangle-down":
      return `M ${round(cx)} ${round(cy + r)} L ${round(cx + r)} ${round(cy - r)} L ${round(cx - r)} ${round(cy - r)} Z`;
    case "diamond":
      return `M ${round(cx)} ${round(cy - r)} L ${round(cx + r)} ${round(cy)} L ${round(cx)} ${round(cy + r)} L ${round(cx - r)} ${round(cy)} Z`;
  }
}
