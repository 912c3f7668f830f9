/** Typed client for the annotation backend. */

import type { Seed } from "./coords";

export interface ImageEntry {
  id: string;
  name: string;
}

export interface SessionInfo {
  session_id: string;
  image_id: string;
  width: number;
  height: number;
}

export interface SeedsResponse {
  session_id: string;
  seeds: Seed[];
  mask_png_base64: string;
  foreground_pixels: number;
  jaccard?: number;
}

export interface ModelInfo {
  loaded: boolean;
  classes?: string[];
  context_schema?: string[];
  hidden?: number;
  gamma_exp?: number;
  n_inputs?: number;
}

export interface Diagnosis {
  label: string;
  outputs: Record<string, number>;
  features: Record<string, number>;
  model: { classes: string[]; context_schema: string[] };
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function parse<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  listImages(): Promise<ImageEntry[]> {
    return fetch(`${this.base}/api/images`).then((r) => parse<ImageEntry[]>(r));
  }

  imageUrl(id: string): string {
    return `${this.base}/api/images/${id}`;
  }

  modelInfo(): Promise<ModelInfo> {
    return fetch(`${this.base}/api/model`).then((r) => parse<ModelInfo>(r));
  }

  createSession(imageId: string): Promise<SessionInfo> {
    return fetch(`${this.base}/api/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ image_id: imageId }),
    }).then((r) => parse<SessionInfo>(r));
  }

  addSeeds(sessionId: string, seeds: Seed[], m = 0.1): Promise<SeedsResponse> {
    return fetch(`${this.base}/api/sessions/${sessionId}/seeds`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ seeds, m }),
    }).then((r) => parse<SeedsResponse>(r));
  }

  resetSeeds(sessionId: string): Promise<void> {
    return fetch(`${this.base}/api/sessions/${sessionId}/reset`, {
      method: "POST",
    }).then((r) => parse<unknown>(r)) as Promise<void>;
  }

  classify(sessionId: string, context: Record<string, unknown> | null): Promise<Diagnosis> {
    return fetch(`${this.base}/api/sessions/${sessionId}/classify`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(context ? { context } : {}),
    }).then((r) => parse<Diagnosis>(r));
  }
}
