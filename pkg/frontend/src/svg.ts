/**
 * Minimal deterministic SVG builder: plain string assembly, no DOM, no
 * timestamps, fixed attribute order, so identical inputs yield identical
 * bytes.
 */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  return String(Number(x.toPrecision(6)));
}

export interface Attrs {
  [key: string]: string | number;
}

function attrString(attrs: Attrs): string {
  const keys = Object.keys(attrs);
  return keys.map((k) => ` ${k}="${attrs[k]}"`).join("");
}

export function el(tag: string, attrs: Attrs, children: string[] = []): string {
  if (children.length === 0) return `<${tag}${attrString(attrs)}/>`;
  return `<${tag}${attrString(attrs)}>${children.join("")}</${tag}>`;
}

export function text(x: number, y: number, s: string, attrs: Attrs = {}): string {
  const esc = s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
  return `<text${attrString({ x: fmt(x), y: fmt(y), ...attrs })}>${esc}</text>`;
}

export function polyline(points: Array<[number, number]>, attrs: Attrs): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return el("polyline", { points: pts, fill: "none", ...attrs });
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs): string {
  return el("line", { x1: fmt(x1), y1: fmt(y1), x2: fmt(x2), y2: fmt(y2), ...attrs });
}

export function circle(cx: number, cy: number, r: number, attrs: Attrs): string {
  return el("circle", { cx: fmt(cx), cy: fmt(cy), r: fmt(r), ...attrs });
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `width="${width}" height="${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    ...body,
    "</svg>",
  ].join("\n");
}

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd",
  "#d62728", "#8c564b", "#e377c2", "#7f7f7f",
  "#bcbd22", "#17becf",
];
