/**
 * Batch conversion of a directory of MAT containers into the CSV pair
 * layout (`<id>.csv` + `<id>.bpm.csv`) with a manifest describing what
 * was done to every file.
 *
 * Channel layout varies across the corpus's releases, so it is probed
 * per file: the signal variable is the first numeric matrix with 5 or
 * 6 channels along one dimension (transposed when samples come first);
 * 6 channels mean an ECG row precedes the two PPG and three
 * acceleration rows, 5 mean it is absent. The mapping actually used is
 * recorded in the manifest entry. A failed file is reported and
 * skipped; the rest of the batch still converts.
 */

import { createHash } from "node:crypto";
import { readdirSync, readFileSync, writeFileSync, mkdirSync, existsSync } from "node:fs";
import { basename, join, resolve } from "node:path";

import { bpmCsv, signalCsv, windowCount, type SignalChannels } from "./csv.js";
import { matrixRow, matrixVector, readMat, type MatMatrix } from "./matfile.js";

export const DEFAULT_FS = 125;

export interface RecordingEntry {
  id: string;
  sourceFile: string;
  truthFile: string | null;
  signalsCsv: string;
  bpmCsv: string | null;
  channelOrder: string[];
  transposed: boolean;
  samples: number;
  windowCount: number;
  bpmCount: number | null;
  sha256: { signals: string; bpm: string | null };
  warnings: string[];
}

export interface Manifest {
  source: string;
  out: string;
  fs: number;
  keepEcg: boolean;
  converted: number;
  failed: number;
  recordings: RecordingEntry[];
  errors: { sourceFile: string; error: string }[];
}

export interface ConvertOptions {
  keepEcg?: boolean;
  fs?: number;
}

const SIX_CHANNELS = ["ecg", "ppg1", "ppg2", "acc_x", "acc_y", "acc_z"];
const FIVE_CHANNELS = ["ppg1", "ppg2", "acc_x", "acc_y", "acc_z"];

function isTruthFile(name: string): boolean {
  return name.endsWith("_BPMtrace.mat") || name.startsWith("True_") || name.endsWith(".bpm.mat");
}

/** Candidate ground-truth paths for a signal file, in lookup order. */
export function truthCandidates(signalPath: string): string[] {
  const dir = resolve(signalPath, "..");
  const stem = basename(signalPath).replace(/\.mat$/i, "");
  const names = [`${stem}_BPMtrace.mat`];
  if (stem.startsWith("TEST_")) {
    names.push(`True_${stem.slice("TEST_".length)}.mat`);
  }
  names.push(`${stem}.bpm.mat`);
  return names.map((n) => join(dir, n));
}

interface ProbedSignal {
  channels: SignalChannels;
  channelOrder: string[];
  transposed: boolean;
  samples: number;
}

/** Orient the signal matrix and name its rows. */
export function probeSignal(matrices: MatMatrix[], file: string): ProbedSignal {
  let picked: MatMatrix | null = null;
  let transposed = false;
  for (const m of matrices) {
    if ((m.rows === 5 || m.rows === 6) && m.cols > m.rows) {
      picked = m;
      break;
    }
    if ((m.cols === 5 || m.cols === 6) && m.rows > m.cols) {
      picked = m;
      transposed = true;
      break;
    }
  }
  if (picked === null) {
    throw new Error(`${file}: no 5- or 6-channel signal matrix found`);
  }
  const sig = picked;
  const channelCount = transposed ? sig.cols : sig.rows;
  const samples = transposed ? sig.rows : sig.cols;
  const row = (i: number): Float64Array => {
    if (!transposed) return matrixRow(sig, i);
    // channels along columns: a column is contiguous in column-major data
    return sig.data.slice(i * sig.rows, (i + 1) * sig.rows);
  };
  if (channelCount === 6) {
    return {
      channels: {
        ecg: row(0),
        ppg1: row(1),
        ppg2: row(2),
        accX: row(3),
        accY: row(4),
        accZ: row(5),
      },
      channelOrder: [...SIX_CHANNELS],
      transposed,
      samples,
    };
  }
  return {
    channels: {
      ppg1: row(0),
      ppg2: row(1),
      accX: row(2),
      accY: row(3),
      accZ: row(4),
    },
    channelOrder: [...FIVE_CHANNELS],
    transposed,
    samples,
  };
}

function sha256(text: string): string {
  return createHash("sha256").update(text).digest("hex");
}

function convertOne(
  sourceFile: string,
  outDir: string,
  fs: number,
  keepEcg: boolean
): RecordingEntry {
  const id = basename(sourceFile).replace(/\.mat$/i, "");
  const warnings: string[] = [];

  const probed = probeSignal(readMat(readFileSync(sourceFile)), basename(sourceFile));
  const signalsText = signalCsv(probed.channels, fs, keepEcg);
  const signalsPath = join(outDir, `${id}.csv`);
  writeFileSync(signalsPath, signalsText);
  if (keepEcg && probed.channels.ecg === undefined) {
    warnings.push("ecg column requested but the source has no ecg channel");
  }

  const expectedWindows = windowCount(probed.samples, fs);
  let truthFile: string | null = null;
  let bpmPath: string | null = null;
  let bpmHash: string | null = null;
  let bpmCount: number | null = null;
  for (const candidate of truthCandidates(sourceFile)) {
    if (existsSync(candidate)) {
      truthFile = candidate;
      break;
    }
  }
  if (truthFile === null) {
    warnings.push("no ground-truth file found; converted signals only");
  } else {
    const vectors = readMat(readFileSync(truthFile)).filter((m) => m.rows === 1 || m.cols === 1);
    if (vectors.length === 0) {
      warnings.push(`${basename(truthFile)} holds no vector variable; converted signals only`);
      truthFile = null;
    } else {
      const named = vectors.find((m) => /bpm/i.test(m.name));
      const bpm = matrixVector(named ?? vectors[0]);
      bpmCount = bpm.length;
      const text = bpmCsv(bpm);
      bpmPath = join(outDir, `${id}.bpm.csv`);
      writeFileSync(bpmPath, text);
      bpmHash = sha256(text);
      if (bpm.length !== expectedWindows) {
        warnings.push(
          `ground truth has ${bpm.length} values but ${probed.samples} samples make ${expectedWindows} windows`
        );
      }
    }
  }

  return {
    id,
    sourceFile,
    truthFile,
    signalsCsv: signalsPath,
    bpmCsv: bpmPath,
    channelOrder: probed.channelOrder,
    transposed: probed.transposed,
    samples: probed.samples,
    windowCount: expectedWindows,
    bpmCount,
    sha256: { signals: sha256(signalsText), bpm: bpmHash },
    warnings,
  };
}

export function convertDataset(
  sourceDir: string,
  outDir: string,
  options: ConvertOptions = {}
): Manifest {
  const fs = options.fs ?? DEFAULT_FS;
  const keepEcg = options.keepEcg ?? false;
  const sources = readdirSync(sourceDir)
    .filter((n) => n.toLowerCase().endsWith(".mat") && !isTruthFile(n))
    .sort()
    .map((n) => join(sourceDir, n));
  mkdirSync(outDir, { recursive: true });

  const recordings: RecordingEntry[] = [];
  const errors: { sourceFile: string; error: string }[] = [];
  for (const file of sources) {
    try {
      recordings.push(convertOne(file, outDir, fs, keepEcg));
    } catch (err) {
      errors.push({ sourceFile: file, error: err instanceof Error ? err.message : String(err) });
    }
  }

  const manifest: Manifest = {
    source: resolve(sourceDir),
    out: resolve(outDir),
    fs,
    keepEcg,
    converted: recordings.length,
    failed: errors.length,
    recordings,
    errors,
  };
  writeFileSync(join(outDir, "manifest.json"), JSON.stringify(manifest, null, 2) + "\n");
  return manifest;
}
