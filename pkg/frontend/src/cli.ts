/**
 * Figure-rendering command line:
 *
 *   render --kind <recovery-rate|error-vs-k|error-vs-sigma> --in <csv> --out <svg>
 */

import * as fs from "fs";
import * as path from "path";

import { FIGURE_KINDS, FigureKind, renderFigure } from "./figure";
import { SchemaError } from "./schema";

function usage(): string {
  return (
    "usage: render --kind <" + FIGURE_KINDS.join("|") + "> --in <csv> --out <svg>"
  );
}

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    console.error(usage());
    return 2;
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) {
      console.error(usage());
      return 2;
    }
    flags.set(argv[i].slice(2), argv[i + 1]);
  }
  const kind = flags.get("kind");
  const input = flags.get("in");
  const output = flags.get("out");
  if (!kind || !input || !output) {
    console.error(usage());
    return 2;
  }
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    console.error(`unknown figure kind: ${kind}`);
    return 2;
  }
  let csvText: string;
  try {
    csvText = fs.readFileSync(input, "utf-8");
  } catch (err) {
    console.error(`cannot read ${input}: ${err}`);
    return 4;
  }
  let svg: string;
  try {
    svg = renderFigure(kind as FigureKind, csvText);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  try {
    fs.mkdirSync(path.dirname(output), { recursive: true });
    fs.writeFileSync(output, svg, "utf-8");
  } catch (err) {
    console.error(`cannot write ${output}: ${err}`);
    return 4;
  }
  console.log(`wrote ${output}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
