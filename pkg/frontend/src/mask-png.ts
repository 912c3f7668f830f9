/**
 * Minimal PNG decoder for the 8-bit images the backend produces
 * (grayscale masks, RGB photographs). Pure TypeScript on top of pako's
 * inflate, so it runs identically in the browser and under vitest.
 */

import { inflate } from "pako";

export interface DecodedImage {
  width: number;
  height: number;
  channels: number;
  /** Row-major interleaved samples, `width * height * channels` bytes. */
  data: Uint8Array;
}

const PNG_SIGNATURE = [137, 80, 78, 71, 13, 10, 26, 10];

function readU32(bytes: Uint8Array, offset: number): number {
  return (
    ((bytes[offset] << 24) >>> 0) +
    (bytes[offset + 1] << 16) +
    (bytes[offset + 2] << 8) +
    bytes[offset + 3]
  );
}

function paeth(a: number, b: number, c: number): number {
  const p = a + b - c;
  const pa = Math.abs(p - a);
  const pb = Math.abs(p - b);
  const pc = Math.abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

export function decodePng(bytes: Uint8Array): DecodedImage {
  for (let i = 0; i < PNG_SIGNATURE.length; i++) {
    if (bytes[i] !== PNG_SIGNATURE[i]) throw new Error("not a PNG file");
  }
  let offset = 8;
  let width = 0;
  let height = 0;
  let bitDepth = 0;
  let colorType = 0;
  const idat: Uint8Array[] = [];
  while (offset < bytes.length) {
    const length = readU32(bytes, offset);
    const type = String.fromCharCode(...bytes.slice(offset + 4, offset + 8));
    const data = bytes.slice(offset + 8, offset + 8 + length);
    if (type === "IHDR") {
      width = readU32(data, 0);
      height = readU32(data, 4);
      bitDepth = data[8];
      colorType = data[9];
      if (data[12] !== 0) throw new Error("interlaced PNG not supported");
    } else if (type === "IDAT") {
      idat.push(data);
    } else if (type === "IEND") {
      break;
    }
    offset += 12 + length; // length + type + data + crc
  }
  if (bitDepth !== 8) throw new Error(`unsupported bit depth ${bitDepth}`);
  const channelsByType: Record<number, number> = { 0: 1, 2: 3, 4: 2, 6: 4 };
  const channels = channelsByType[colorType];
  if (!channels) throw new Error(`unsupported color type ${colorType}`);

  const compressed = new Uint8Array(idat.reduce((n, c) => n + c.length, 0));
  let pos = 0;
  for (const chunk of idat) {
    compressed.set(chunk, pos);
    pos += chunk.length;
  }
  const raw = inflate(compressed);

  const stride = width * channels;
  const out = new Uint8Array(stride * height);
  const bpp = channels;
  for (let y = 0; y < height; y++) {
    const filter = raw[y * (stride + 1)];
    const rowIn = y * (stride + 1) + 1;
    const rowOut = y * stride;
    for (let x = 0; x < stride; x++) {
      const value = raw[rowIn + x];
      const left = x >= bpp ? out[rowOut + x - bpp] : 0;
      const up = y > 0 ? out[rowOut - stride + x] : 0;
      const upLeft = y > 0 && x >= bpp ? out[rowOut - stride + x - bpp] : 0;
      let recon: number;
      switch (filter) {
        case 0:
          recon = value;
          break;
        case 1:
          recon = value + left;
          break;
        case 2:
          recon = value + up;
          break;
        case 3:
          recon = value + ((left + up) >> 1);
          break;
        case 4:
          recon = value + paeth(left, up, upLeft);
          break;
        default:
          throw new Error(`unknown PNG filter ${filter}`);
      }
      out[rowOut + x] = recon & 0xff;
    }
  }
  return { width, height, channels, data: out };
}

export interface MaskGrid {
  width: number;
  height: number;
  /** One byte per pixel, 1 = lesion. */
  data: Uint8Array;
}

/** Decode a base64 mask PNG into a boolean grid (>=128 is foreground). */
export function decodeMask(base64: string): MaskGrid {
  const binary = atob(base64);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
  const image = decodePng(bytes);
  const grid = new Uint8Array(image.width * image.height);
  for (let i = 0; i < grid.length; i++) {
    grid[i] = image.data[i * image.channels] >= 128 ? 1 : 0;
  }
  return { width: image.width, height: image.height, data: grid };
}

export function maskPixelCount(mask: MaskGrid): number {
  let n = 0;
  for (let i = 0; i < mask.data.length; i++) n += mask.data[i];
  return n;
}
