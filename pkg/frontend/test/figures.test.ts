import { describe, expect, it } from "vitest";

import { parseTrace } from "../src/csv.js";
import { render } from "../src/figures.js";
import { FigureSpec, SpecError, validateSpec } from "../src/spec.js";

const HEADER = "k,u_1,u_2,y_1,phi,alpha,w_1,w_2,S_eig_1,S_eig_2,D_fro,active,adapted";

function makeTrace(rows: string[]) {
  return parseTrace([HEADER, ...rows].join("\n"), "mem.csv");
}

const SINGLE = makeTrace(["0,-0.8,-0.5,0.075,4.81,0.01,0,0,1,1,0,,0"]);
const SHORT = makeTrace([
  "0,-0.8,-0.5,0.075,4.81,0.01,1.9,5.8,1,1,0.36,,0",
  "1,-0.781,-0.442,0.0746,4.44,0.01,1.78,5.66,1,1,0.34,,0",
  "2,-0.76,-0.39,0.074,4.1,0.01,1.6,5.5,2,2,0.3,,1",
]);

describe("render determinism", () => {
  it("identical inputs produce identical bytes", () => {
    const spec: FigureSpec = {
      kind: "objective-vs-iter", inputs: ["mem.csv"], output: "x.svg", title: "t",
    };
    const a = render(spec, [SHORT]);
    const b = render(spec, [SHORT]);
    expect(a).toBe(b);
    expect(a.startsWith("<svg ")).toBe(true);
    expect(a).not.toContain("NaN");
  });
});

describe("degenerate traces", () => {
  it("renders a single-record trace as the initial point only", () => {
    for (const kind of ["objective-vs-iter", "tracking-comparison",
                        "contour-trajectory", "inputs-comparison"] as const) {
      const spec: FigureSpec = {
        kind, inputs: ["mem.csv"], output: "x.svg",
        objective: kind === "contour-trajectory" ? "toy" : undefined,
      };
      const svg = render(spec, [SINGLE]);
      expect(svg).toContain("<circle");
      expect(svg).not.toContain("NaN");
    }
  });
});

describe("validation", () => {
  it("rejects unknown kinds and missing fields", () => {
    expect(() => validateSpec({ kind: "pie", inputs: ["a"], output: "b" }))
      .toThrowError(SpecError);
    expect(() => validateSpec({ kind: "objective-vs-iter", inputs: [], output: "b" }))
      .toThrowError(/non-empty/);
    expect(() => validateSpec({ kind: "contour-trajectory", inputs: ["a"], output: "b" }))
      .toThrowError(/objective/);
    expect(() => validateSpec({
      kind: "objective-vs-iter", inputs: ["a"], output: "b", labels: ["x", "y"],
    })).toThrowError(/labels/);
  });

  it("rejects log scale over non-positive data", () => {
    const spec: FigureSpec = {
      kind: "objective-vs-iter", inputs: ["mem.csv"], output: "x.svg", yscale: "log",
    };
    const negative = makeTrace(["0,-0.8,-0.5,0.075,-4.81,0.01,0,0,1,1,0,,0"]);
    expect(() => render(spec, [negative])).toThrowError(/positive/);
  });

  it("rejects contour specs with unknown objectives", () => {
    const spec: FigureSpec = {
      kind: "contour-trajectory", inputs: ["mem.csv"], output: "x.svg", objective: "nope",
    };
    expect(() => render(spec, [SHORT])).toThrowError(/unknown objective/);
  });
});

describe("figure content", () => {
  it("draws one curve per input and a legend", () => {
    const spec: FigureSpec = {
      kind: "objective-vs-iter", inputs: ["a.csv", "b.csv"], output: "x.svg",
      labels: ["first", "second"],
    };
    const svg = render(spec, [SHORT, SHORT]);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2);
    expect(svg).toContain(">first<");
    expect(svg).toContain(">second<");
  });

  it("steps metric elements and uses a log axis by default", () => {
    const spec: FigureSpec = {
      kind: "s-elements-vs-iter", inputs: ["a.csv"], output: "x.svg",
    };
    const svg = render(spec, [SHORT]);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2); // two metric elements
    expect(svg).toContain(">S_1<");
  });

  it("draws the setpoint staircase when a reference is given", () => {
    const spec: FigureSpec = {
      kind: "tracking-comparison", inputs: ["a.csv"], output: "x.svg",
      reference: [[0, 0.1], [2, 0.05]],
    };
    const svg = render(spec, [SHORT]);
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain(">setpoint<");
  });
});
