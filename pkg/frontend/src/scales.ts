/** Axis scales with deterministic tick placement. */

export interface Scale {
  toPx(v: number): number;
  ticks(): number[];
  domain: [number, number];
}

function niceStep(span: number, target: number): number {
  const raw = span / Math.max(target, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function padDomain(lo: number, hi: number): [number, number] {
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.1;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * 0.05;
  return [lo - pad, hi + pad];
}

export function linearScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  const [a, b] = padDomain(lo, hi);
  return {
    domain: [a, b],
    toPx: (v) => pxLo + ((v - a) / (b - a)) * (pxHi - pxLo),
    ticks: () => {
      const step = niceStep(b - a, 6);
      const first = Math.ceil(a / step) * step;
      const out: number[] = [];
      for (let t = first; t <= b + 1e-12 * Math.abs(step); t += step) {
        out.push(Math.abs(t) < step * 1e-9 ? 0 : t);
      }
      return out;
    },
  };
}

export function logScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  if (lo <= 0 || hi <= 0) throw new Error(`log scale needs positive data, got [${lo}, ${hi}]`);
  let la = Math.log10(lo);
  let lb = Math.log10(hi);
  if (la === lb) { la -= 0.5; lb += 0.5; }
  const pad = (lb - la) * 0.05;
  la -= pad; lb += pad;
  return {
    domain: [Math.pow(10, la), Math.pow(10, lb)],
    toPx: (v) => pxLo + ((Math.log10(v) - la) / (lb - la)) * (pxHi - pxLo),
    ticks: () => {
      const out: number[] = [];
      const span = lb - la;
      const stride = span > 8 ? Math.ceil(span / 8) : 1;
      for (let e = Math.ceil(la); e <= Math.floor(lb); e += stride) out.push(Math.pow(10, e));
      return out;
    },
  };
}

/** Compact deterministic number label. */
export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) {
    const e = Math.floor(Math.log10(a));
    const m = v / Math.pow(10, e);
    const ms = String(Number(m.toPrecision(3)));
    return `${ms}e${e}`;
  }
  return String(Number(v.toPrecision(6)));
}
