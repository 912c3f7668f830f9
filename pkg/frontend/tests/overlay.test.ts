import { describe, expect, it } from "vitest";

import type { MaskGrid } from "../src/mask-png";
import { OVERLAY_COLOR, opaquePixels, overlayBuffer } from "../src/overlay";

function grid(width: number, height: number, on: Array<[number, number]>): MaskGrid {
  const data = new Uint8Array(width * height);
  for (const [y, x] of on) data[y * width + x] = 1;
  return { width, height, data };
}

describe("overlayBuffer", () => {
  it("paints exactly the scaled mask blocks", () => {
    const mask = grid(4, 3, [[1, 2]]);
    const buf = overlayBuffer(mask, 2, 2);
    expect(buf.length).toBe(8 * 6 * 4);
    expect(opaquePixels(buf)).toBe(4); // one mask pixel becomes a 2x2 block
    // The block sits at display (4..5, 2..3).
    for (const [y, x] of [[2, 4], [2, 5], [3, 4], [3, 5]] as const) {
      const o = (y * 8 + x) * 4;
      expect(buf[o + 3]).toBe(OVERLAY_COLOR.a);
      expect(buf[o]).toBe(OVERLAY_COLOR.r);
    }
    expect(buf[(0 * 8 + 0) * 4 + 3]).toBe(0);
  });

  it("keeps blocks crisp under nearest-neighbor scaling", () => {
    const mask = grid(2, 1, [[0, 0]]);
    const buf = overlayBuffer(mask, 3, 3);
    // Left half opaque, right half transparent, no blending in between.
    const alphas: number[] = [];
    for (let x = 0; x < 6; x++) alphas.push(buf[(1 * 6 + x) * 4 + 3]);
    expect(alphas).toEqual([110, 110, 110, 0, 0, 0]);
  });

  it("an empty mask paints nothing", () => {
    const buf = overlayBuffer(grid(5, 5, []), 2, 2);
    expect(opaquePixels(buf)).toBe(0);
  });
});
