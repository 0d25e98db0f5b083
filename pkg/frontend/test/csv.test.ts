import { describe, expect, it } from "vitest";

import { SchemaError, parseHeader, parseTrace } from "../src/csv.js";

const HEADER = "k,u_1,u_2,y_1,phi,alpha,w_1,w_2,S_eig_1,S_eig_2,D_fro,active,adapted";

const ROW = "0,-0.8,-0.5,0.075,4.81,0.01,1.9,5.8,1,1,0.36,,0";

describe("parseHeader", () => {
  it("accepts the contract header and infers dimensions", () => {
    expect(parseHeader(HEADER)).toEqual([2, 1]);
    expect(parseHeader("k,u_1,y_1,y_2,phi,alpha,w_1,S_eig_1,D_fro,active,adapted"))
      .toEqual([1, 2]);
  });

  it("reports the offending column on mismatch", () => {
    const bad = HEADER.replace("S_eig_2", "S_2");
    expect(() => parseHeader(bad)).toThrowError(/column 10: expected "S_eig_2"/);
  });

  it("rejects trailing columns", () => {
    expect(() => parseHeader(HEADER + ",extra")).toThrowError(SchemaError);
  });
});

describe("parseTrace", () => {
  it("parses rows into typed columns", () => {
    const t = parseTrace([HEADER, ROW, ROW.replace(/^0/, "1").replace(",,0", ",1;3,1")].join("\n"));
    expect(t.nu).toBe(2);
    expect(t.k).toEqual([0, 1]);
    expect(t.u[0]).toEqual([-0.8, -0.5]);
    expect(t.active[0]).toEqual([]);
    expect(t.active[1]).toEqual([1, 3]);
    expect(t.adapted).toEqual([false, true]);
  });

  it("rejects rows with the wrong field count", () => {
    expect(() => parseTrace([HEADER, ROW + ",9"].join("\n"), "x.csv"))
      .toThrowError(/x.csv:2: expected 13 fields/);
  });

  it("rejects non-numeric fields", () => {
    expect(() => parseTrace([HEADER, ROW.replace("4.81", "oops")].join("\n")))
      .toThrowError(/not a finite number/);
  });
});
