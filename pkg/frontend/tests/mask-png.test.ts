import { describe, expect, it } from "vitest";

import { decodeMask, decodePng, maskPixelCount } from "../src/mask-png";
import fixtures from "./png-fixtures.json";

interface Fixture {
  png_b64: string;
  width: number;
  height: number;
  channels: number;
  pixels: number[];
}

function bytesOf(b64: string): Uint8Array {
  const binary = atob(b64);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
  return bytes;
}

describe("decodePng", () => {
  for (const [name, fixture] of Object.entries(fixtures as Record<string, Fixture>)) {
    it(`decodes the ${name} fixture byte-exactly`, () => {
      const image = decodePng(bytesOf(fixture.png_b64));
      expect(image.width).toBe(fixture.width);
      expect(image.height).toBe(fixture.height);
      expect(image.channels).toBe(fixture.channels);
      expect(Array.from(image.data)).toEqual(fixture.pixels);
    });
  }

  it("rejects non-PNG input", () => {
    expect(() => decodePng(new Uint8Array([1, 2, 3, 4, 5, 6, 7, 8]))).toThrow(/not a PNG/);
  });
});

describe("decodeMask", () => {
  it("thresholds the grayscale fixture at 128", () => {
    const fixture = (fixtures as Record<string, Fixture>).gray_mask;
    const mask = decodeMask(fixture.png_b64);
    expect(mask.width).toBe(12);
    expect(mask.height).toBe(9);
    expect(maskPixelCount(mask)).toBe(5 * 6);
    expect(mask.data[2 * 12 + 3]).toBe(1);
    expect(mask.data[0]).toBe(0);
  });
});
