#!/usr/bin/env node
/**
 * Figure renderer CLI.
 *
 *   render --spec <file.json>     render one figure spec
 *   render --all [--specs <dir>]  render every *.json spec in a directory
 *
 * Input CSVs and the output image path inside a spec are resolved relative
 * to the spec file, so spec bundles are relocatable.
 */

import { mkdirSync, readdirSync, writeFileSync } from "node:fs";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { loadTrace } from "./csv.js";
import { render } from "./figures.js";
import { loadSpec } from "./spec.js";

function renderSpecFile(specPath: string): string {
  const spec = loadSpec(specPath);
  const base = dirname(resolve(specPath));
  const traces = spec.inputs.map((p) => loadTrace(resolve(base, p)));
  const svg = render(spec, traces);
  const outPath = resolve(base, spec.output);
  mkdirSync(dirname(outPath), { recursive: true });
  writeFileSync(outPath, svg + "\n");
  return outPath;
}

export function main(argv: string[]): number {
  const args = [...argv];
  const command = args.shift();
  if (command !== "render") {
    process.stderr.write("usage: render --spec <file> | render --all [--specs <dir>]\n");
    return 2;
  }
  const opts = new Map<string, string>();
  let all = false;
  while (args.length > 0) {
    const flag = args.shift()!;
    if (flag === "--all") { all = true; continue; }
    if (flag === "--spec" || flag === "--specs") {
      const value = args.shift();
      if (value === undefined) {
        process.stderr.write(`missing value for ${flag}\n`);
        return 2;
      }
      opts.set(flag, value);
      continue;
    }
    process.stderr.write(`unknown flag ${flag}\n`);
    return 2;
  }
  try {
    if (all) {
      const here = dirname(fileURLToPath(import.meta.url));
      const dir = opts.get("--specs") ?? join(here, "..", "specs");
      const specs = readdirSync(dir).filter((f) => f.endsWith(".json")).sort();
      if (specs.length === 0) {
        process.stderr.write(`no .json specs in ${dir}\n`);
        return 1;
      }
      for (const name of specs) {
        const out = renderSpecFile(join(dir, name));
        process.stdout.write(`${name} -> ${out}\n`);
      }
    } else {
      const specPath = opts.get("--spec");
      if (!specPath) {
        process.stderr.write("render needs --spec <file> or --all\n");
        return 2;
      }
      const out = renderSpecFile(specPath);
      process.stdout.write(`${out}\n`);
    }
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  resolve(process.argv[1]) === fileURLToPath(import.meta.url);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
