/** Figure specification files: JSON documents validated before rendering. */

import { readFileSync } from "node:fs";

export const KINDS = [
  "contour-trajectory",
  "objective-vs-iter",
  "alpha-vs-iter",
  "s-elements-vs-iter",
  "tracking-comparison",
  "inputs-comparison",
] as const;

export type FigureKind = (typeof KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  /** trace CSV paths, resolved relative to the spec file */
  inputs: string[];
  /** image output path, resolved relative to the spec file */
  output: string;
  labels?: string[];
  title?: string;
  /** named analytic objective for contour figures */
  objective?: string;
  /** (time, value) breakpoints of the setpoint, for tracking figures */
  reference?: [number, number][];
  yscale?: "linear" | "log";
  /** 1-based output channel for tracking figures (default: last) */
  channel?: number;
}

export class SpecError extends Error {}

export function validateSpec(raw: unknown, where = "<spec>"): FigureSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new SpecError(`${where}: spec must be a JSON object`);
  }
  const spec = raw as Record<string, unknown>;
  const kind = spec.kind;
  if (typeof kind !== "string" || !KINDS.includes(kind as FigureKind)) {
    throw new SpecError(`${where}: kind must be one of ${KINDS.join(", ")}`);
  }
  if (!Array.isArray(spec.inputs) || spec.inputs.length === 0
      || !spec.inputs.every((p) => typeof p === "string")) {
    throw new SpecError(`${where}: inputs must be a non-empty array of CSV paths`);
  }
  if (typeof spec.output !== "string" || spec.output.length === 0) {
    throw new SpecError(`${where}: output must be a path`);
  }
  if (spec.labels !== undefined) {
    if (!Array.isArray(spec.labels) || spec.labels.length !== spec.inputs.length) {
      throw new SpecError(`${where}: labels must match inputs (${spec.inputs.length})`);
    }
  }
  if (kind === "contour-trajectory" && typeof spec.objective !== "string") {
    throw new SpecError(`${where}: contour-trajectory needs an "objective" name`);
  }
  if (spec.yscale !== undefined && spec.yscale !== "linear" && spec.yscale !== "log") {
    throw new SpecError(`${where}: yscale must be "linear" or "log"`);
  }
  return spec as unknown as FigureSpec;
}

export function loadSpec(path: string): FigureSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new SpecError(`${path}: ${(err as Error).message}`);
  }
  return validateSpec(raw, path);
}
