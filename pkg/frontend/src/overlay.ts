/**
 * Mask overlay rasterization. The working-size mask is expanded with
 * nearest-neighbor sampling so mask pixels stay faithful blocks instead
 * of being smeared by interpolation.
 */

import type { MaskGrid } from "./mask-png";

export interface Rgba {
  r: number;
  g: number;
  b: number;
  a: number;
}

export const OVERLAY_COLOR: Rgba = { r: 64, g: 220, b: 110, a: 110 };

/** RGBA buffer of the mask at scale x, transparent outside the lesion. */
export function overlayBuffer(mask: MaskGrid, scaleX: number, scaleY: number, color: Rgba = OVERLAY_COLOR): Uint8ClampedArray {
  const outW = Math.round(mask.width * scaleX);
  const outH = Math.round(mask.height * scaleY);
  const buf = new Uint8ClampedArray(outW * outH * 4);
  for (let y = 0; y < outH; y++) {
    const sy = Math.min(mask.height - 1, Math.floor(y / scaleY));
    for (let x = 0; x < outW; x++) {
      const sx = Math.min(mask.width - 1, Math.floor(x / scaleX));
      if (mask.data[sy * mask.width + sx]) {
        const o = (y * outW + x) * 4;
        buf[o] = color.r;
        buf[o + 1] = color.g;
        buf[o + 2] = color.b;
        buf[o + 3] = color.a;
      }
    }
  }
  return buf;
}

/** Count of opaque overlay pixels, used by tests and the status line. */
export function opaquePixels(buf: Uint8ClampedArray): number {
  let n = 0;
  for (let i = 3; i < buf.length; i += 4) if (buf[i] > 0) n++;
  return n;
}
