#!/usr/bin/env node
/**
 * Command-line entry point: reads the simulation tool's CSV/JSON outputs
 * and writes SVG figures. Exits with status 2 on any input problem.
 */

import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import {
  InputError,
  readEigen,
  readMetadata,
  readSweep,
  readTrajectory,
  Trajectory,
} from "./csv.js";
import { plotConcurrence, plotEigenvalues, plotPhaseSpace } from "./plots.js";

const SECTOR_LABELS = ["00", "01", "10", "11"];

function hashFrom(meta?: string): string | undefined {
  return meta ? readMetadata(meta).configHash : undefined;
}

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .scriptName("cqgate-plots")
    .command(
      "concurrence",
      "plot concurrence against cooperativity from a sweep CSV",
      (y) =>
        y
          .option("in", { type: "string", demandOption: true, describe: "sweep CSV" })
          .option("out", { type: "string", demandOption: true, describe: "output SVG" })
          .option("meta", { type: "string", describe: "metadata JSON with config_hash" }),
      (argv) => {
        const svg = plotConcurrence(readSweep(argv.in), hashFrom(argv.meta));
        writeFileSync(argv.out, svg);
      },
    )
    .command(
      "phase-space",
      "overlay the four conditioned cavity paths from sector trajectory CSVs",
      (y) =>
        y
          .option("in", {
            type: "string",
            demandOption: true,
            describe: "comma-separated trajectory CSVs for sectors 00,01,10,11",
          })
          .option("out", { type: "string", demandOption: true, describe: "output SVG" })
          .option("meta", { type: "string", describe: "metadata JSON with config_hash" }),
      (argv) => {
        const paths = argv.in.split(",");
        if (paths.length !== 4) {
          throw new InputError(`expected 4 trajectory files, got ${paths.length}`);
        }
        const sectors: Record<string, Trajectory> = {};
        SECTOR_LABELS.forEach((label, i) => {
          sectors[label] = readTrajectory(paths[i]);
        });
        const svg = plotPhaseSpace(sectors, hashFrom(argv.meta));
        writeFileSync(argv.out, svg);
      },
    )
    .command(
      "eigenvalues",
      "plot the four tracked branch energies from an eigenvalue CSV",
      (y) =>
        y
          .option("in", { type: "string", demandOption: true, describe: "eigenvalue CSV" })
          .option("out", { type: "string", demandOption: true, describe: "output SVG" })
          .option("meta", { type: "string", describe: "metadata JSON with config_hash" }),
      (argv) => {
        const svg = plotEigenvalues(readEigen(argv.in), hashFrom(argv.meta));
        writeFileSync(argv.out, svg);
      },
    )
    .demandCommand(1, "specify a figure to produce")
    .strict()
    .fail((msg, err) => {
      if (err instanceof InputError) {
        process.stderr.write(`error: ${err.message}\n`);
        process.exit(2);
      }
      if (err) throw err;
      process.stderr.write(`error: ${msg}\n`);
      process.exit(2);
    })
    .parseAsync();
}

main().catch((err: Error) => {
  const prefix = err instanceof InputError ? "error" : "unexpected error";
  process.stderr.write(`${prefix}: ${err.message}\n`);
  process.exit(2);
});
