/** Minimal reader for the stored (uncompressed) ZIP archives the export
 * endpoint produces. Walks the central directory; supports only method 0
 * entries, which is all the service ever writes. */

export interface ZipEntry {
  name: string;
  data: Uint8Array;
}

const EOCD_SIG = 0x06054b50;
const CDIR_SIG = 0x02014b50;
const LOCAL_SIG = 0x04034b50;

function view(bytes: Uint8Array): DataView {
  return new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
}

export class ZipFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ZipFormatError";
  }
}

function findEocd(dv: DataView): number {
  // EOCD is at the end, preceded by an up-to-64KiB comment.
  const min = Math.max(0, dv.byteLength - 22 - 0xffff);
  for (let off = dv.byteLength - 22; off >= min; off--) {
    if (dv.getUint32(off, true) === EOCD_SIG) return off;
  }
  throw new ZipFormatError("end-of-central-directory record not found");
}

export function readZip(bytes: Uint8Array): ZipEntry[] {
  const dv = view(bytes);
  const eocd = findEocd(dv);
  const count = dv.getUint16(eocd + 10, true);
  let off = dv.getUint32(eocd + 16, true);

  const entries: ZipEntry[] = [];
  const decoder = new TextDecoder("utf-8");
  for (let i = 0; i < count; i++) {
    if (dv.getUint32(off, true) !== CDIR_SIG) {
      throw new ZipFormatError(`bad central directory signature at ${off}`);
    }
    const method = dv.getUint16(off + 10, true);
    const compressedSize = dv.getUint32(off + 20, true);
    const nameLen = dv.getUint16(off + 28, true);
    const extraLen = dv.getUint16(off + 30, true);
    const commentLen = dv.getUint16(off + 32, true);
    const localOff = dv.getUint32(off + 42, true);
    const name = decoder.decode(bytes.subarray(off + 46, off + 46 + nameLen));
    if (method !== 0) {
      throw new ZipFormatError(`entry ${name}: unsupported compression method ${method}`);
    }
    if (dv.getUint32(localOff, true) !== LOCAL_SIG) {
      throw new ZipFormatError(`entry ${name}: bad local header at ${localOff}`);
    }
    const localNameLen = dv.getUint16(localOff + 26, true);
    const localExtraLen = dv.getUint16(localOff + 28, true);
    const dataStart = localOff + 30 + localNameLen + localExtraLen;
    entries.push({ name, data: bytes.subarray(dataStart, dataStart + compressedSize) });
    off += 46 + nameLen + extraLen + commentLen;
  }
  return entries;
}
