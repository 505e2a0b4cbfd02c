/**
 * Reader for Level 5 MAT containers, covering what the corpus uses:
 * real numeric 2D matrices, either byte order, packed ("small data
 * element") tags and zlib-compressed variables. Cell, struct, char and
 * complex variables are skipped rather than parsed.
 *
 * Layout: a 128-byte text header carries a version word at offset 124
 * and a two-byte order marker at 126 ("IM" when the writer was
 * little-endian, "MI" when big-endian). After the header the file is a
 * sequence of tagged elements. A tag is two uint32 words (type, byte
 * count) unless the upper half of the first word is nonzero: then the
 * tag is packed, the low half is the type, the high half a byte count
 * of at most 4, and the payload lives in the tag's second word.
 * Element payloads are padded to 8-byte boundaries. A matrix element
 * nests flags, dimensions, name and value sub-elements; values are
 * stored column-major.
 */

import { inflateSync } from "node:zlib";

export interface MatMatrix {
  name: string;
  rows: number;
  cols: number;
  /** column-major, exactly as stored */
  data: Float64Array;
}

const MI_INT8 = 1;
const MI_UINT8 = 2;
const MI_INT16 = 3;
const MI_UINT16 = 4;
const MI_INT32 = 5;
const MI_UINT32 = 6;
const MI_SINGLE = 7;
const MI_DOUBLE = 9;
const MI_INT64 = 12;
const MI_UINT64 = 13;
const MI_MATRIX = 14;
const MI_COMPRESSED = 15;

// array classes that hold plain numbers (double ... uint64)
const NUMERIC_CLASS_MIN = 6;
const NUMERIC_CLASS_MAX = 15;
const FLAG_COMPLEX = 0x08;

interface Tag {
  type: number;
  bytes: number;
  dataOffset: number;
  next: number;
}

function readTag(view: DataView, offset: number, little: boolean): Tag {
  if (offset + 8 > view.byteLength) {
    throw new Error("truncated element tag");
  }
  const first = view.getUint32(offset, little);
  const packedBytes = first >>> 16;
  if (packedBytes !== 0) {
    // packed tag: payload sits in the second word of the tag itself
    return { type: first & 0xffff, bytes: packedBytes, dataOffset: offset + 4, next: offset + 8 };
  }
  const bytes = view.getUint32(offset + 4, little);
  const end = offset + 8 + bytes;
  if (end > view.byteLength) {
    throw new Error("element payload runs past end of file");
  }
  return { type: first, bytes, dataOffset: offset + 8, next: offset + 8 + ((bytes + 7) & ~7) };
}

function readNumbers(view: DataView, tag: Tag, little: boolean): Float64Array {
  const at = tag.dataOffset;
  const read: [number, (i: number) => number] | null =
    tag.type === MI_INT8 ? [1, (i) => view.getInt8(at + i)] :
    tag.type === MI_UINT8 ? [1, (i) => view.getUint8(at + i)] :
    tag.type === MI_INT16 ? [2, (i) => view.getInt16(at + i, little)] :
    tag.type === MI_UINT16 ? [2, (i) => view.getUint16(at + i, little)] :
    tag.type === MI_INT32 ? [4, (i) => view.getInt32(at + i, little)] :
    tag.type === MI_UINT32 ? [4, (i) => view.getUint32(at + i, little)] :
    tag.type === MI_SINGLE ? [4, (i) => view.getFloat32(at + i, little)] :
    tag.type === MI_DOUBLE ? [8, (i) => view.getFloat64(at + i, little)] :
    tag.type === MI_INT64 ? [8, (i) => Number(view.getBigInt64(at + i, little))] :
    tag.type === MI_UINT64 ? [8, (i) => Number(view.getBigUint64(at + i, little))] :
    null;
  if (read === null) {
    throw new Error(`unsupported value type ${tag.type}`);
  }
  const [width, get] = read;
  const out = new Float64Array(Math.floor(tag.bytes / width));
  for (let i = 0; i < out.length; i++) {
    out[i] = get(i * width);
  }
  return out;
}

function readAscii(view: DataView, tag: Tag): string {
  let s = "";
  for (let i = 0; i < tag.bytes; i++) {
    const c = view.getUint8(tag.dataOffset + i);
    if (c !== 0) s += String.fromCharCode(c);
  }
  return s;
}

/** Parse one matrix element; null when the variable is not a real numeric 2D array. */
function parseMatrix(view: DataView, tag: Tag, little: boolean): MatMatrix | null {
  let offset = tag.dataOffset;
  const end = tag.dataOffset + tag.bytes;

  const flagsTag = readTag(view, offset, little);
  if (flagsTag.type !== MI_UINT32 || flagsTag.bytes < 8) {
    throw new Error("malformed matrix flags");
  }
  const flagsWord = view.getUint32(flagsTag.dataOffset, little);
  const arrayClass = flagsWord & 0xff;
  const complex = ((flagsWord >>> 8) & FLAG_COMPLEX) !== 0;
  offset = flagsTag.next;

  const dimsTag = readTag(view, offset, little);
  if (dimsTag.type !== MI_INT32) {
    throw new Error("malformed matrix dimensions");
  }
  const dims = readNumbers(view, dimsTag, little);
  offset = dimsTag.next;

  const nameTag = readTag(view, offset, little);
  if (nameTag.type !== MI_INT8) {
    throw new Error("malformed matrix name");
  }
  const name = readAscii(view, nameTag);
  offset = nameTag.next;

  if (
    arrayClass < NUMERIC_CLASS_MIN || arrayClass > NUMERIC_CLASS_MAX ||
    complex || dims.length !== 2
  ) {
    return null;
  }
  if (offset >= end) {
    throw new Error(`matrix ${name || "(unnamed)"} has no value element`);
  }
  const dataTag = readTag(view, offset, little);
  const data = readNumbers(view, dataTag, little);
  const rows = dims[0];
  const cols = dims[1];
  if (data.length !== rows * cols) {
    throw new Error(`matrix ${name || "(unnamed)"}: ${rows}x${cols} dims but ${data.length} values`);
  }
  return { name, rows, cols, data };
}

/** All real numeric 2D matrices in the container, in file order. */
export function readMat(buffer: Buffer): MatMatrix[] {
  if (buffer.length < 128) {
    throw new Error("not a MAT container: header too short");
  }
  const m0 = buffer[126];
  const m1 = buffer[127];
  let little: boolean;
  if (m0 === 0x49 && m1 === 0x4d) {
    little = true; // "IM"
  } else if (m0 === 0x4d && m1 === 0x49) {
    little = false; // "MI"
  } else {
    throw new Error("not a MAT container: missing byte-order marker");
  }
  const view = new DataView(buffer.buffer, buffer.byteOffset, buffer.byteLength);
  if (view.getUint16(124, little) !== 0x0100) {
    throw new Error("unsupported container version");
  }

  const matrices: MatMatrix[] = [];
  let offset = 128;
  while (offset < view.byteLength) {
    if (view.byteLength - offset < 8) {
      break; // trailing pad
    }
    const tag = readTag(view, offset, little);
    if (tag.type === MI_COMPRESSED) {
      // view offsets equal buffer indices: the view spans the whole buffer
      const packed = buffer.subarray(tag.dataOffset, tag.dataOffset + tag.bytes);
      const inflated = inflateSync(packed);
      const innerView = new DataView(inflated.buffer, inflated.byteOffset, inflated.byteLength);
      const innerTag = readTag(innerView, 0, little);
      if (innerTag.type === MI_MATRIX) {
        const m = parseMatrix(innerView, innerTag, little);
        if (m !== null) matrices.push(m);
      }
      // compressed payloads are stored without trailing pad
      offset = tag.dataOffset + tag.bytes;
      continue;
    }
    if (tag.type === MI_MATRIX) {
      const m = parseMatrix(view, tag, little);
      if (m !== null) matrices.push(m);
    }
    // any other element type (e.g. UTF-8 metadata) is skipped
    offset = tag.next;
  }
  return matrices;
}

/** Value at (row, col) of a column-major matrix. */
export function matrixValue(m: MatMatrix, row: number, col: number): number {
  return m.data[col * m.rows + row];
}

/** One row of a column-major matrix as a dense array. */
export function matrixRow(m: MatMatrix, row: number): Float64Array {
  const out = new Float64Array(m.cols);
  for (let c = 0; c < m.cols; c++) {
    out[c] = m.data[c * m.rows + row];
  }
  return out;
}

/** Flatten a 1xN or Nx1 matrix. */
export function matrixVector(m: MatMatrix): Float64Array {
  if (m.rows !== 1 && m.cols !== 1) {
    throw new Error(`matrix ${m.name || "(unnamed)"} is ${m.rows}x${m.cols}, not a vector`);
  }
  return m.data.slice();
}
