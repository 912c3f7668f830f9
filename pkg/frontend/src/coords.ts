/**
 * Coordinate mapping between display pixels and the 300x225 working
 * frame every API payload uses, plus the erase-tool nearest-seed rule.
 */

export const WORKING_WIDTH = 300;
export const WORKING_HEIGHT = 225;

export interface Seed {
  x: number;
  y: number;
  label: "fg" | "bg";
}

export interface DisplayRect {
  left: number;
  top: number;
  width: number;
  height: number;
}

/** Map a click in display coordinates onto the working grid. */
export function displayToWorking(
  clientX: number,
  clientY: number,
  rect: DisplayRect,
): { x: number; y: number } {
  const fx = (clientX - rect.left) / rect.width;
  const fy = (clientY - rect.top) / rect.height;
  const x = Math.min(WORKING_WIDTH - 1, Math.max(0, Math.floor(fx * WORKING_WIDTH)));
  const y = Math.min(WORKING_HEIGHT - 1, Math.max(0, Math.floor(fy * WORKING_HEIGHT)));
  return { x, y };
}

/** Working coordinates back to the display pixel center, for drawing. */
export function workingToDisplay(
  x: number,
  y: number,
  rect: DisplayRect,
): { x: number; y: number } {
  return {
    x: ((x + 0.5) / WORKING_WIDTH) * rect.width,
    y: ((y + 0.5) / WORKING_HEIGHT) * rect.height,
  };
}

/**
 * Index of the seed nearest to a display click, or -1 when none is
 * within the radius (10 display pixels by default).
 */
export function nearestSeedIndex(
  seeds: readonly Seed[],
  clientX: number,
  clientY: number,
  rect: DisplayRect,
  radius = 10,
): number {
  let best = -1;
  let bestDist = radius;
  seeds.forEach((seed, i) => {
    const p = workingToDisplay(seed.x, seed.y, rect);
    const d = Math.hypot(p.x - (clientX - rect.left), p.y - (clientY - rect.top));
    if (d <= bestDist) {
      bestDist = d;
      best = i;
    }
  });
  return best;
}
