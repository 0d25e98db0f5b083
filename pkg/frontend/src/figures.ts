/** The six figure kinds: each renders parsed traces into one SVG string. */

import { Trace } from "./csv.js";
import { gridValues, linspace, marchingSquares } from "./contour.js";
import { OBJECTIVES } from "./objectives.js";
import { FigureSpec, SpecError } from "./spec.js";
import { Scale, linearScale, logScale, tickLabel } from "./scales.js";
import { PALETTE, circle, document as svgDocument, el, fmt, line, polyline, text } from "./svg.js";

const W = 720;
const H = 480;
const MARGIN = { l: 64, r: 18, t: 40, b: 48 };

interface Frame {
  x: Scale;
  y: Scale;
  body: string[];
}

function frame(
  xLo: number, xHi: number, yLo: number, yHi: number,
  opts: { title?: string; xLabel?: string; yLabel?: string; ylog?: boolean },
): Frame {
  const x = linearScale(xLo, xHi, MARGIN.l, W - MARGIN.r);
  const y = opts.ylog
    ? logScale(yLo, yHi, H - MARGIN.b, MARGIN.t)
    : linearScale(yLo, yHi, H - MARGIN.b, MARGIN.t);
  const body: string[] = [];
  for (const t of x.ticks()) {
    const px = x.toPx(t);
    body.push(line(px, H - MARGIN.b, px, MARGIN.t, { stroke: "#eeeeee", "stroke-width": 1 }));
    body.push(text(px, H - MARGIN.b + 16, tickLabel(t),
      { "text-anchor": "middle", "font-size": 11, fill: "#444444" }));
  }
  for (const t of y.ticks()) {
    const py = y.toPx(t);
    body.push(line(MARGIN.l, py, W - MARGIN.r, py, { stroke: "#eeeeee", "stroke-width": 1 }));
    body.push(text(MARGIN.l - 6, py + 4, tickLabel(t),
      { "text-anchor": "end", "font-size": 11, fill: "#444444" }));
  }
  body.push(el("rect", {
    x: MARGIN.l, y: MARGIN.t, width: W - MARGIN.l - MARGIN.r, height: H - MARGIN.t - MARGIN.b,
    fill: "none", stroke: "#333333", "stroke-width": 1,
  }));
  if (opts.title) {
    body.push(text(W / 2, MARGIN.t - 14, opts.title,
      { "text-anchor": "middle", "font-size": 14, fill: "#111111" }));
  }
  if (opts.xLabel) {
    body.push(text((MARGIN.l + W - MARGIN.r) / 2, H - 10, opts.xLabel,
      { "text-anchor": "middle", "font-size": 12, fill: "#111111" }));
  }
  if (opts.yLabel) {
    const cx = 16;
    const cy = (MARGIN.t + H - MARGIN.b) / 2;
    body.push(text(cx, cy, opts.yLabel, {
      "text-anchor": "middle", "font-size": 12, fill: "#111111",
      transform: `rotate(-90 ${fmt(cx)} ${fmt(cy)})`,
    }));
  }
  return { x, y, body };
}

function legend(body: string[], labels: string[]): void {
  const x0 = W - MARGIN.r - 170;
  let y0 = MARGIN.t + 14;
  for (let i = 0; i < labels.length; i++) {
    body.push(line(x0, y0 - 4, x0 + 22, y0 - 4,
      { stroke: PALETTE[i % PALETTE.length], "stroke-width": 2 }));
    body.push(text(x0 + 28, y0, labels[i], { "font-size": 11, fill: "#111111" }));
    y0 += 16;
  }
}

function seriesExtent(series: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const v of s) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  return [lo, hi];
}

function labelsOf(spec: FigureSpec, traces: Trace[]): string[] {
  return spec.labels ?? traces.map((t) => t.path.replace(/^.*\//, "").replace(/\.csv$/, ""));
}

function stepPoints(ks: number[], vs: number[], x: Scale, y: Scale): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < ks.length; i++) {
    if (i > 0) pts.push([x.toPx(ks[i]), y.toPx(vs[i - 1])]);
    pts.push([x.toPx(ks[i]), y.toPx(vs[i])]);
  }
  return pts;
}

// ── per-iteration curve kinds ───────────────────────────────────────────────

function curveFigure(
  spec: FigureSpec,
  traces: Trace[],
  pick: (t: Trace) => number[],
  yLabel: string,
  stepped = false,
): string {
  const series = traces.map(pick);
  const kHi = Math.max(...traces.map((t) => t.k[t.k.length - 1]));
  let [lo, hi] = seriesExtent(series);
  const ylog = spec.yscale === "log";
  if (ylog && lo <= 0) {
    throw new SpecError(`${spec.output}: log scale needs positive values (min ${lo})`);
  }
  const f = frame(0, Math.max(kHi, 1), lo, hi,
    { title: spec.title, xLabel: "iteration k", yLabel, ylog });
  traces.forEach((t, i) => {
    const vs = series[i];
    const color = PALETTE[i % PALETTE.length];
    if (vs.length === 1) {
      f.body.push(circle(f.x.toPx(t.k[0]), f.y.toPx(vs[0]), 3, { fill: color }));
      return;
    }
    const pts = stepped
      ? stepPoints(t.k, vs, f.x, f.y)
      : t.k.map((k, r) => [f.x.toPx(k), f.y.toPx(vs[r])] as [number, number]);
    f.body.push(polyline(pts, { stroke: color, "stroke-width": 1.6 }));
  });
  legend(f.body, labelsOf(spec, traces));
  return svgDocument(W, H, f.body);
}

export function objectiveVsIter(spec: FigureSpec, traces: Trace[]): string {
  return curveFigure(spec, traces, (t) => t.phi, "objective");
}

export function alphaVsIter(spec: FigureSpec, traces: Trace[]): string {
  if (spec.yscale === undefined) spec = { ...spec, yscale: "log" };
  return curveFigure(spec, traces, (t) => t.alpha, "step size", true);
}

export function sElementsVsIter(spec: FigureSpec, traces: Trace[]): string {
  // one stepped curve per metric element of each input trace
  const expanded: Trace[] = [];
  const labels: string[] = [];
  const base = labelsOf(spec, traces);
  traces.forEach((t, ti) => {
    for (let j = 0; j < t.nu; j++) {
      expanded.push({ ...t, phi: t.sEigs.map((row) => row[j]) });
      labels.push(traces.length > 1 ? `${base[ti]} S_${j + 1}` : `S_${j + 1}`);
    }
  });
  const withLabels = { ...spec, labels };
  if (withLabels.yscale === undefined) withLabels.yscale = "log";
  return curveFigure(withLabels, expanded, (t) => t.phi, "metric elements", true);
}

// ── tracking and input comparisons ─────────────────────────────────────────

function referenceSeries(spec: FigureSpec, kHi: number): [number[], number[]] | null {
  if (!spec.reference || spec.reference.length === 0) return null;
  const pts = [...spec.reference].sort((a, b) => a[0] - b[0]);
  const ks: number[] = [];
  const vs: number[] = [];
  for (let k = 0; k <= kHi; k++) {
    const tMeas = k + 1; // record k holds the measurement taken at t = (k+1) dT
    let v = pts[0][1];
    for (const [tb, vb] of pts) {
      if (tb <= tMeas + 1e-12) v = vb;
    }
    ks.push(k);
    vs.push(v);
  }
  return [ks, vs];
}

export function trackingComparison(spec: FigureSpec, traces: Trace[]): string {
  const channel = (spec.channel ?? traces[0].ny) - 1;
  const series = traces.map((t) => t.y.map((row) => row[channel]));
  const kHi = Math.max(...traces.map((t) => t.k[t.k.length - 1]));
  let [lo, hi] = seriesExtent(series);
  const ref = referenceSeries(spec, kHi);
  if (ref) {
    lo = Math.min(lo, ...ref[1]);
    hi = Math.max(hi, ...ref[1]);
  }
  const f = frame(0, Math.max(kHi, 1), lo, hi,
    { title: spec.title, xLabel: "iteration k", yLabel: `tracked output y_${channel + 1}` });
  if (ref) {
    f.body.push(polyline(stepPoints(ref[0], ref[1], f.x, f.y),
      { stroke: "#555555", "stroke-width": 1.4, "stroke-dasharray": "6 3" }));
  }
  traces.forEach((t, i) => {
    const pts = t.k.map((k, r) => [f.x.toPx(k), f.y.toPx(series[i][r])] as [number, number]);
    const color = PALETTE[i % PALETTE.length];
    if (pts.length === 1) f.body.push(circle(pts[0][0], pts[0][1], 3, { fill: color }));
    else f.body.push(polyline(pts, { stroke: color, "stroke-width": 1.6 }));
  });
  const labels = labelsOf(spec, traces);
  legend(f.body, ref ? [...labels, "setpoint"] : labels);
  if (ref) {
    const x0 = W - MARGIN.r - 170;
    const y0 = MARGIN.t + 14 + labels.length * 16;
    f.body.push(line(x0, y0 - 4, x0 + 22, y0 - 4,
      { stroke: "#555555", "stroke-width": 1.4, "stroke-dasharray": "6 3" }));
  }
  return svgDocument(W, H, f.body);
}

export function inputsComparison(spec: FigureSpec, traces: Trace[]): string {
  const nu = traces[0].nu;
  const panelH = (H - MARGIN.t - MARGIN.b) / nu;
  const body: string[] = [];
  const kHi = Math.max(...traces.map((t) => t.k[t.k.length - 1]));
  const x = linearScale(0, Math.max(kHi, 1), MARGIN.l, W - MARGIN.r);
  if (spec.title) {
    body.push(text(W / 2, MARGIN.t - 14, spec.title,
      { "text-anchor": "middle", "font-size": 14, fill: "#111111" }));
  }
  for (let j = 0; j < nu; j++) {
    const top = MARGIN.t + j * panelH;
    const bottom = top + panelH - 12;
    const series = traces.map((t) => t.u.map((row) => row[j]));
    const [lo, hi] = seriesExtent(series);
    const y = linearScale(lo, hi, bottom, top + 6);
    for (const tv of y.ticks()) {
      const py = y.toPx(tv);
      body.push(line(MARGIN.l, py, W - MARGIN.r, py, { stroke: "#eeeeee", "stroke-width": 1 }));
      body.push(text(MARGIN.l - 6, py + 4, tickLabel(tv),
        { "text-anchor": "end", "font-size": 10, fill: "#444444" }));
    }
    traces.forEach((t, i) => {
      const pts = t.k.map((k, r) => [x.toPx(k), y.toPx(series[i][r])] as [number, number]);
      const color = PALETTE[i % PALETTE.length];
      if (pts.length === 1) body.push(circle(pts[0][0], pts[0][1], 3, { fill: color }));
      else body.push(polyline(pts, { stroke: color, "stroke-width": 1.5 }));
    });
    body.push(el("rect", {
      x: MARGIN.l, y: fmt(top + 6), width: W - MARGIN.l - MARGIN.r, height: fmt(bottom - top - 6),
      fill: "none", stroke: "#333333", "stroke-width": 1,
    }));
    body.push(text(MARGIN.l + 6, top + 20, `u_${j + 1}`, { "font-size": 11, fill: "#111111" }));
  }
  for (const tv of x.ticks()) {
    body.push(text(x.toPx(tv), H - MARGIN.b + 16, tickLabel(tv),
      { "text-anchor": "middle", "font-size": 11, fill: "#444444" }));
  }
  body.push(text((MARGIN.l + W - MARGIN.r) / 2, H - 10, "iteration k",
    { "text-anchor": "middle", "font-size": 12, fill: "#111111" }));
  legend(body, labelsOf(spec, traces));
  return svgDocument(W, H, body);
}

// ── contour with trajectories ───────────────────────────────────────────────

export function contourTrajectory(spec: FigureSpec, traces: Trace[]): string {
  const objective = OBJECTIVES[spec.objective ?? ""];
  if (!objective) {
    throw new SpecError(
      `${spec.output}: unknown objective "${spec.objective}" ` +
      `(have: ${Object.keys(OBJECTIVES).join(", ")})`,
    );
  }
  const [u1lo, u1hi, u2lo, u2hi] = objective.box;
  const f = frame(u1lo, u1hi, u2lo, u2hi,
    { title: spec.title, xLabel: "u_1", yLabel: "u_2" });
  const xs = linspace(u1lo, u1hi, 121);
  const ys = linspace(u2lo, u2hi, 121);
  const values = gridValues(objective.phi, xs, ys);
  let vLo = Infinity;
  let vHi = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v < vLo) vLo = v;
      if (v > vHi) vHi = v;
    }
  }
  const levels = linspace(vLo, vHi, 14).slice(1, -1);
  for (const level of levels) {
    for (const [x1, y1, x2, y2] of marchingSquares(values, xs, ys, level)) {
      f.body.push(line(f.x.toPx(x1), f.y.toPx(y1), f.x.toPx(x2), f.y.toPx(y2),
        { stroke: "#c8c8c8", "stroke-width": 0.8 }));
    }
  }
  if (objective.outputLevels) {
    const over = gridValues(objective.outputLevels.f, xs, ys);
    for (const level of objective.outputLevels.levels) {
      for (const [x1, y1, x2, y2] of marchingSquares(over, xs, ys, level)) {
        f.body.push(line(f.x.toPx(x1), f.y.toPx(y1), f.x.toPx(x2), f.y.toPx(y2),
          { stroke: "#e377c2", "stroke-width": 1.4, "stroke-dasharray": "5 3" }));
      }
    }
  }
  traces.forEach((t, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = t.u.map((row) => [f.x.toPx(row[0]), f.y.toPx(row[1])] as [number, number]);
    if (pts.length > 1) f.body.push(polyline(pts, { stroke: color, "stroke-width": 1.8 }));
    f.body.push(circle(pts[0][0], pts[0][1], 4,
      { fill: "none", stroke: color, "stroke-width": 1.5 }));
    f.body.push(circle(pts[pts.length - 1][0], pts[pts.length - 1][1], 3.2, { fill: color }));
  });
  legend(f.body, labelsOf(spec, traces));
  return svgDocument(W, H, f.body);
}

// ── dispatcher ──────────────────────────────────────────────────────────────

export function render(spec: FigureSpec, traces: Trace[]): string {
  switch (spec.kind) {
    case "contour-trajectory": return contourTrajectory(spec, traces);
    case "objective-vs-iter": return objectiveVsIter(spec, traces);
    case "alpha-vs-iter": return alphaVsIter(spec, traces);
    case "s-elements-vs-iter": return sElementsVsIter(spec, traces);
    case "tracking-comparison": return trackingComparison(spec, traces);
    case "inputs-comparison": return inputsComparison(spec, traces);
  }
}
