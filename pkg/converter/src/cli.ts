#!/usr/bin/env node
/**
 * specmar-convert <source_dir> <out_dir> [--keep-ecg] [--fs <hz>]
 *
 * Converts every MAT recording in source_dir into <id>.csv (+
 * <id>.bpm.csv when a ground-truth file is found) under out_dir and
 * writes manifest.json describing the batch. Exit code 0 when every
 * file converted, 1 when any failed, 2 on usage errors.
 */

import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { convertDataset, DEFAULT_FS } from "./convert.js";

const USAGE =
  "usage: specmar-convert <source_dir> <out_dir> [--keep-ecg] [--fs <hz>]";

export function run(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        "keep-ecg": { type: "boolean", default: false },
        fs: { type: "string" },
        help: { type: "boolean", short: "h", default: false },
      },
      allowPositionals: true,
      strict: true,
    });
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    console.error(USAGE);
    return 2;
  }
  if (parsed.values.help) {
    console.log(USAGE);
    return 0;
  }
  if (parsed.positionals.length !== 2) {
    console.error(USAGE);
    return 2;
  }
  const fs = parsed.values.fs === undefined ? DEFAULT_FS : Number(parsed.values.fs);
  if (!Number.isFinite(fs) || fs <= 0) {
    console.error(`invalid --fs value: ${parsed.values.fs}`);
    return 2;
  }

  const [sourceDir, outDir] = parsed.positionals;
  let manifest;
  try {
    manifest = convertDataset(sourceDir, outDir, {
      keepEcg: parsed.values["keep-ecg"],
      fs,
    });
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }

  console.log(`converted ${manifest.converted} recording(s) -> ${manifest.out}`);
  for (const rec of manifest.recordings) {
    for (const w of rec.warnings) {
      console.warn(`warning: ${rec.id}: ${w}`);
    }
  }
  for (const e of manifest.errors) {
    console.error(`failed: ${e.sourceFile}: ${e.error}`);
  }
  return manifest.failed > 0 ? 1 : 0;
}

function invokedDirectly(): boolean {
  if (process.argv[1] === undefined) return false;
  try {
    return import.meta.url === pathToFileURL(realpathSync(process.argv[1])).href;
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  process.exit(run(process.argv.slice(2)));
}

