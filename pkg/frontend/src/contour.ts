/** Marching-squares contour extraction on a regular grid. */

export type Segment = [number, number, number, number];

/**
 * Line segments of the level set f = level, with f sampled on the grid
 * values[iy][ix] at coordinates (xs[ix], ys[iy]). Standard 16-case table with
 * linear edge interpolation; the saddle cases use the cell-center average.
 */
export function marchingSquares(
  values: number[][],
  xs: number[],
  ys: number[],
  level: number,
): Segment[] {
  const segs: Segment[] = [];
  const interp = (va: number, vb: number, a: number, b: number): number => {
    const d = vb - va;
    if (d === 0) return (a + b) / 2;
    return a + ((level - va) / d) * (b - a);
  };
  for (let iy = 0; iy < ys.length - 1; iy++) {
    for (let ix = 0; ix < xs.length - 1; ix++) {
      const v00 = values[iy][ix], v10 = values[iy][ix + 1];
      const v01 = values[iy + 1][ix], v11 = values[iy + 1][ix + 1];
      const x0 = xs[ix], x1 = xs[ix + 1], y0 = ys[iy], y1 = ys[iy + 1];
      let code = 0;
      if (v00 >= level) code |= 1;
      if (v10 >= level) code |= 2;
      if (v11 >= level) code |= 4;
      if (v01 >= level) code |= 8;
      if (code === 0 || code === 15) continue;
      // edge crossing points: bottom, right, top, left
      const bottom: [number, number] = [interp(v00, v10, x0, x1), y0];
      const right: [number, number] = [x1, interp(v10, v11, y0, y1)];
      const top: [number, number] = [interp(v01, v11, x0, x1), y1];
      const left: [number, number] = [x0, interp(v00, v01, y0, y1)];
      const add = (a: [number, number], b: [number, number]) =>
        segs.push([a[0], a[1], b[0], b[1]]);
      switch (code) {
        case 1: case 14: add(left, bottom); break;
        case 2: case 13: add(bottom, right); break;
        case 3: case 12: add(left, right); break;
        case 4: case 11: add(right, top); break;
        case 6: case 9: add(bottom, top); break;
        case 7: case 8: add(left, top); break;
        case 5: case 10: {
          const center = (v00 + v10 + v01 + v11) / 4;
          const sameAsCorner = (center >= level) === (code === 5);
          if (sameAsCorner) {
            add(left, bottom); add(right, top);
          } else {
            add(left, top); add(bottom, right);
          }
          break;
        }
      }
    }
  }
  return segs;
}

export function gridValues(
  f: (x: number, y: number) => number,
  xs: number[],
  ys: number[],
): number[][] {
  return ys.map((y) => xs.map((x) => f(x, y)));
}

export function linspace(lo: number, hi: number, n: number): number[] {
  return Array.from({ length: n }, (_, i) => lo + ((hi - lo) * i) / (n - 1));
}
