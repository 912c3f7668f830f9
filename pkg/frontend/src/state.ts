/**
 * View state. Everything here mirrors the server session plus the local
 * tool mode, so re-fetching the session after a refresh reconstructs an
 * identical view.
 */

import type { Diagnosis, ModelInfo } from "./api";
import type { Seed } from "./coords";
import type { MaskGrid } from "./mask-png";

export type Tool = "fg" | "bg" | "erase";

export interface AppState {
  imageId: string | null;
  sessionId: string | null;
  tool: Tool;
  m: number;
  seeds: Seed[];
  mask: MaskGrid | null;
  jaccard: number | null;
  hint: string | null;
  diagnosis: Diagnosis | null;
  model: ModelInfo | null;
}

export function initialState(): AppState {
  return {
    imageId: null,
    sessionId: null,
    tool: "fg",
    m: 0.1,
    seeds: [],
    mask: null,
    jaccard: null,
    hint: null,
    diagnosis: null,
    model: null,
  };
}

/** Feature-name groups in response order: 5 + 7 + 24 + 23 entries. */
export function groupFeatures(features: Record<string, number>): Array<[string, Array<[string, number]>]> {
  const entries = Object.entries(features);
  return [
    ["Asymmetry", entries.slice(0, 5)],
    ["Border", entries.slice(5, 12)],
    ["Color", entries.slice(12, 36)],
    ["Texture", entries.slice(36, 59)],
  ];
}
