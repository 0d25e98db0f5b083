/**
 * Reader for ofotune trace CSVs.
 *
 * Schema contract (one row per controller iteration plus a terminal row):
 *   k,u_1..u_nu,y_1..y_ny,phi,alpha,w_1..w_nu,S_eig_1..S_eig_nu,D_fro,active,adapted
 */

import { readFileSync } from "node:fs";

export interface Trace {
  path: string;
  nu: number;
  ny: number;
  k: number[];
  u: number[][];
  y: number[][];
  phi: number[];
  alpha: number[];
  w: number[][];
  sEigs: number[][];
  dFro: number[];
  active: number[][];
  adapted: boolean[];
}

export class SchemaError extends Error {}

function countPrefixed(cols: string[], start: number, prefix: string): number {
  let n = 0;
  while (start + n < cols.length && cols[start + n] === `${prefix}${n + 1}`) n++;
  return n;
}

/** Validate the header and return [nu, ny]; throws with a column diagnostic. */
export function parseHeader(header: string): [number, number] {
  const cols = header.split(",");
  if (cols[0] !== "k") {
    throw new SchemaError(`column 1: expected "k", found "${cols[0]}"`);
  }
  let at = 1;
  const nu = countPrefixed(cols, at, "u_");
  if (nu === 0) throw new SchemaError(`column ${at + 1}: expected "u_1", found "${cols[at]}"`);
  at += nu;
  const ny = countPrefixed(cols, at, "y_");
  if (ny === 0) throw new SchemaError(`column ${at + 1}: expected "y_1", found "${cols[at]}"`);
  at += ny;
  const tail = [
    "phi", "alpha",
    ...Array.from({ length: nu }, (_, i) => `w_${i + 1}`),
    ...Array.from({ length: nu }, (_, i) => `S_eig_${i + 1}`),
    "D_fro", "active", "adapted",
  ];
  for (const name of tail) {
    if (cols[at] !== name) {
      throw new SchemaError(`column ${at + 1}: expected "${name}", found "${cols[at] ?? "<missing>"}"`);
    }
    at++;
  }
  if (at !== cols.length) {
    throw new SchemaError(`unexpected trailing column "${cols[at]}" at position ${at + 1}`);
  }
  return [nu, ny];
}

function num(field: string, where: string): number {
  const v = Number(field);
  if (!Number.isFinite(v)) throw new SchemaError(`${where}: not a finite number: "${field}"`);
  return v;
}

export function parseTrace(text: string, path = "<string>"): Trace {
  const lines = text.trim().split("\n");
  if (lines.length === 0) throw new SchemaError(`${path}: empty file`);
  const [nu, ny] = parseHeader(lines[0]);
  const trace: Trace = {
    path, nu, ny,
    k: [], u: [], y: [], phi: [], alpha: [], w: [], sEigs: [], dFro: [],
    active: [], adapted: [],
  };
  const width = 1 + nu + ny + 2 + nu + nu + 3;
  for (let r = 1; r < lines.length; r++) {
    const parts = lines[r].split(",");
    if (parts.length !== width) {
      throw new SchemaError(`${path}:${r + 1}: expected ${width} fields, found ${parts.length}`);
    }
    const where = `${path}:${r + 1}`;
    let at = 0;
    trace.k.push(num(parts[at++], where));
    trace.u.push(parts.slice(at, at + nu).map((f) => num(f, where))); at += nu;
    trace.y.push(parts.slice(at, at + ny).map((f) => num(f, where))); at += ny;
    trace.phi.push(num(parts[at++], where));
    trace.alpha.push(num(parts[at++], where));
    trace.w.push(parts.slice(at, at + nu).map((f) => num(f, where))); at += nu;
    trace.sEigs.push(parts.slice(at, at + nu).map((f) => num(f, where))); at += nu;
    trace.dFro.push(num(parts[at++], where));
    trace.active.push(parts[at] === "" ? [] : parts[at].split(";").map((f) => num(f, where)));
    at++;
    trace.adapted.push(parts[at] === "1");
  }
  return trace;
}

export function loadTrace(path: string): Trace {
  return parseTrace(readFileSync(path, "utf8"), path);
}
