/**
 * CSV emission in the layout the estimation pipeline loads: a signal
 * file with header `t,ppg1,ppg2,acc_x,acc_y,acc_z` (plus a trailing
 * `ecg` column when kept) and a ground-truth file with header `bpm`.
 * Numbers are written with JavaScript's shortest round-trip notation,
 * so re-reading a file reproduces the source values exactly.
 */

export const SIGNAL_HEADER = ["t", "ppg1", "ppg2", "acc_x", "acc_y", "acc_z"] as const;

export interface SignalChannels {
  ppg1: Float64Array;
  ppg2: Float64Array;
  accX: Float64Array;
  accY: Float64Array;
  accZ: Float64Array;
  ecg?: Float64Array;
}

export function signalCsv(channels: SignalChannels, fs: number, keepEcg: boolean): string {
  const { ppg1, ppg2, accX, accY, accZ, ecg } = channels;
  const n = ppg1.length;
  for (const [name, ch] of Object.entries({ ppg2, accX, accY, accZ })) {
    if (ch.length !== n) {
      throw new Error(`channel ${name} has ${ch.length} samples, expected ${n}`);
    }
  }
  const withEcg = keepEcg && ecg !== undefined;
  const header = withEcg ? [...SIGNAL_HEADER, "ecg"] : [...SIGNAL_HEADER];
  const lines = [header.join(",")];
  for (let i = 0; i < n; i++) {
    const row = [
      String(i / fs),
      String(ppg1[i]),
      String(ppg2[i]),
      String(accX[i]),
      String(accY[i]),
      String(accZ[i]),
    ];
    if (withEcg) row.push(String(ecg[i]));
    lines.push(row.join(","));
  }
  return lines.join("\n") + "\n";
}

export function bpmCsv(bpm: Float64Array): string {
  const lines = ["bpm"];
  for (const v of bpm) lines.push(String(v));
  return lines.join("\n") + "\n";
}

/** Windows an estimator will produce for a recording of n samples. */
export function windowCount(n: number, fs: number, windowS = 8.0, hopS = 2.0): number {
  const win = Math.round(fs * windowS);
  const hop = Math.round(fs * hopS);
  if (n < win) return 0;
  return Math.floor((n - win) / hop) + 1;
}
