/**
 * Minimal MAT v5 writer used only to build test fixtures. It emits the
 * same constructs the reader must accept: both byte orders, packed
 * tags for payloads of four bytes or fewer (names and tiny values),
 * zlib-compressed variables and int16-stored values.
 */

import { deflateSync } from "node:zlib";

export interface MatrixFixture {
  name: string;
  rows: number;
  cols: number;
  /** column-major */
  data: number[] | Float64Array;
  storage?: "double" | "int16";
}

export interface BuildOptions {
  bigEndian?: boolean;
  compress?: boolean;
}

const MI_INT8 = 1;
const MI_INT16 = 3;
const MI_INT32 = 5;
const MI_UINT32 = 6;
const MI_DOUBLE = 9;
const MI_MATRIX = 14;
const MI_COMPRESSED = 15;
const MX_DOUBLE_CLASS = 6;

class ByteSink {
  private chunks: Buffer[] = [];
  constructor(private little: boolean) {}

  u16(v: number) {
    const b = Buffer.alloc(2);
    this.little ? b.writeUInt16LE(v) : b.writeUInt16BE(v);
    this.chunks.push(b);
  }

  u32(v: number) {
    const b = Buffer.alloc(4);
    this.little ? b.writeUInt32LE(v) : b.writeUInt32BE(v);
    this.chunks.push(b);
  }

  i32(v: number) {
    const b = Buffer.alloc(4);
    this.little ? b.writeInt32LE(v) : b.writeInt32BE(v);
    this.chunks.push(b);
  }

  i16(v: number) {
    const b = Buffer.alloc(2);
    this.little ? b.writeInt16LE(v) : b.writeInt16BE(v);
    this.chunks.push(b);
  }

  f64(v: number) {
    const b = Buffer.alloc(8);
    this.little ? b.writeDoubleLE(v) : b.writeDoubleBE(v);
    this.chunks.push(b);
  }

  raw(b: Buffer) {
    this.chunks.push(b);
  }

  padTo8() {
    const size = this.size();
    const pad = (8 - (size % 8)) % 8;
    if (pad > 0) this.chunks.push(Buffer.alloc(pad));
  }

  size(): number {
    return this.chunks.reduce((n, c) => n + c.length, 0);
  }

  take(): Buffer {
    return Buffer.concat(this.chunks);
  }
}

/** One tagged element, packed when the payload is at most 4 bytes. */
function element(little: boolean, type: number, payload: Buffer): Buffer {
  const sink = new ByteSink(little);
  if (payload.length <= 4) {
    sink.u32((payload.length << 16) | type);
    sink.raw(payload);
    const pad = 4 - payload.length;
    if (pad > 0) sink.raw(Buffer.alloc(pad));
    return sink.take();
  }
  sink.u32(type);
  sink.u32(payload.length);
  sink.raw(payload);
  sink.padTo8();
  return sink.take();
}

function matrixElement(little: boolean, m: MatrixFixture): Buffer {
  const body = new ByteSink(little);

  const flags = new ByteSink(little);
  flags.u32(MX_DOUBLE_CLASS);
  flags.u32(0);
  body.raw(element(little, MI_UINT32, flags.take()));

  const dims = new ByteSink(little);
  dims.i32(m.rows);
  dims.i32(m.cols);
  body.raw(element(little, MI_INT32, dims.take()));

  body.raw(element(little, MI_INT8, Buffer.from(m.name, "ascii")));

  const values = new ByteSink(little);
  if (m.storage === "int16") {
    for (const v of m.data) {
      if (!Number.isInteger(v) || v < -32768 || v > 32767) {
        throw new Error(`value ${v} does not fit int16 storage`);
      }
      values.i16(v);
    }
    body.raw(element(little, MI_INT16, values.take()));
  } else {
    for (const v of m.data) values.f64(v);
    body.raw(element(little, MI_DOUBLE, values.take()));
  }

  return element(little, MI_MATRIX, body.take());
}

export function buildMat(matrices: MatrixFixture[], options: BuildOptions = {}): Buffer {
  const little = !options.bigEndian;

  const header = Buffer.alloc(128, 0x20);
  header.write("MATLAB 5.0 MAT-file, test fixture", 0, "ascii");
  if (little) {
    header.writeUInt16LE(0x0100, 124);
    header[126] = 0x49; // "IM"
    header[127] = 0x4d;
  } else {
    header.writeUInt16BE(0x0100, 124);
    header[126] = 0x4d; // "MI"
    header[127] = 0x49;
  }

  const parts: Buffer[] = [header];
  for (const m of matrices) {
    const raw = matrixElement(little, m);
    if (options.compress) {
      // compressed elements carry no trailing pad
      const z = deflateSync(raw);
      const tag = new ByteSink(little);
      tag.u32(MI_COMPRESSED);
      tag.u32(z.length);
      parts.push(tag.take(), z);
    } else {
      parts.push(raw);
    }
  }
  return Buffer.concat(parts);
}

/** Column-major data for a channels x samples matrix given per-channel rows. */
export function columnMajor(rows: number[][]): { rows: number; cols: number; data: number[] } {
  const nRows = rows.length;
  const nCols = rows[0].length;
  const data: number[] = new Array(nRows * nCols);
  for (let c = 0; c < nCols; c++) {
    for (let r = 0; r < nRows; r++) {
      data[c * nRows + r] = rows[r][c];
    }
  }
  return { rows: nRows, cols: nCols, data };
}

/** Deterministic pseudo-random channel for fixtures. */
export function channelData(n: number, seed: number): number[] {
  let state = seed >>> 0 || 1;
  const out: number[] = new Array(n);
  for (let i = 0; i < n; i++) {
    // xorshift32: cheap, reproducible, no dependencies
    state ^= state << 13;
    state >>>= 0;
    state ^= state >>> 17;
    state ^= state << 5;
    state >>>= 0;
    out[i] = (state / 0xffffffff) * 2 - 1;
  }
  return out;
}
