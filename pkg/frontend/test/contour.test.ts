import { describe, expect, it } from "vitest";

import { gridValues, linspace, marchingSquares } from "../src/contour.js";

describe("linspace", () => {
  it("hits both endpoints", () => {
    const xs = linspace(-1, 1, 5);
    expect(xs).toEqual([-1, -0.5, 0, 0.5, 1]);
  });
});

describe("marchingSquares", () => {
  it("extracts a circle from x^2 + y^2", () => {
    const xs = linspace(-2, 2, 81);
    const ys = linspace(-2, 2, 81);
    const values = gridValues((x, y) => x * x + y * y, xs, ys);
    const segs = marchingSquares(values, xs, ys, 1.0);
    expect(segs.length).toBeGreaterThan(40);
    for (const [x1, y1, x2, y2] of segs) {
      // every segment endpoint sits near the unit circle
      expect(Math.abs(Math.hypot(x1, y1) - 1)).toBeLessThan(0.05);
      expect(Math.abs(Math.hypot(x2, y2) - 1)).toBeLessThan(0.05);
    }
  });

  it("returns nothing when the level misses the range", () => {
    const xs = linspace(0, 1, 11);
    const values = gridValues((x, y) => x + y, xs, xs);
    expect(marchingSquares(values, xs, xs, 5.0)).toEqual([]);
  });

  it("handles a saddle without dropping crossings", () => {
    const xs = linspace(-1, 1, 3);
    const values = gridValues((x, y) => x * y, xs, xs);
    const segs = marchingSquares(values, xs, xs, 0.25);
    expect(segs.length).toBeGreaterThan(0);
  });
});
