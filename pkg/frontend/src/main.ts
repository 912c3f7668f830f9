/**
 * Annotator application: click to place lesion/background seeds, watch
 * the segmentation overlay, refine, then request a diagnosis with the
 * patient context form.
 */

import { ApiClient, ApiError, type Diagnosis } from "./api";
import {
  WORKING_HEIGHT,
  WORKING_WIDTH,
  displayToWorking,
  nearestSeedIndex,
  workingToDisplay,
  type Seed,
} from "./coords";
import { decodeMask } from "./mask-png";
import { overlayBuffer } from "./overlay";
import { groupFeatures, initialState, type AppState, type Tool } from "./state";

const DISPLAY_SCALE = 2;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class AnnotatorApp {
  readonly state: AppState = initialState();
  readonly canvas: HTMLCanvasElement;
  readonly photo: HTMLImageElement;
  readonly hintBox: HTMLElement;
  readonly statusBox: HTMLElement;
  readonly imageSelect: HTMLSelectElement;
  readonly toolButtons = new Map<Tool, HTMLButtonElement>();
  readonly contextForm: HTMLFormElement;
  readonly submitButton: HTMLButtonElement;
  readonly panel: HTMLElement;

  private pendingSeeds: Seed[] = [];
  private inFlight = false;
  private flushResolvers: Array<() => void> = [];
  private eraseInFlight: Promise<void> | null = null;

  constructor(
    readonly root: HTMLElement,
    readonly api: ApiClient,
  ) {
    root.innerHTML = "";
    const header = el("div", "toolbar");
    this.imageSelect = el("select", "image-select");
    this.imageSelect.addEventListener("change", () => {
      void this.selectImage(this.imageSelect.value);
    });
    header.appendChild(this.imageSelect);
    for (const tool of ["fg", "bg", "erase"] as Tool[]) {
      const label = tool === "fg" ? "Lesion" : tool === "bg" ? "Skin" : "Erase";
      const button = el("button", `tool tool-${tool}`, label);
      button.type = "button";
      button.addEventListener("click", () => this.setTool(tool));
      this.toolButtons.set(tool, button);
      header.appendChild(button);
    }
    root.appendChild(header);

    const viewer = el("div", "viewer");
    viewer.style.position = "relative";
    this.photo = el("img", "photo");
    this.photo.width = WORKING_WIDTH * DISPLAY_SCALE;
    this.photo.height = WORKING_HEIGHT * DISPLAY_SCALE;
    this.canvas = el("canvas", "overlay");
    this.canvas.width = WORKING_WIDTH * DISPLAY_SCALE;
    this.canvas.height = WORKING_HEIGHT * DISPLAY_SCALE;
    this.canvas.style.position = "absolute";
    this.canvas.style.left = "0";
    this.canvas.style.top = "0";
    this.canvas.addEventListener("click", (event) => this.onCanvasClick(event));
    viewer.appendChild(this.photo);
    viewer.appendChild(this.canvas);
    root.appendChild(viewer);

    this.hintBox = el("div", "hint");
    root.appendChild(this.hintBox);
    this.statusBox = el("div", "status");
    root.appendChild(this.statusBox);

    this.contextForm = el("form", "context-form");
    this.contextForm.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.requestDiagnosis();
    });
    this.submitButton = el("button", "diagnose", "Diagnose");
    this.submitButton.type = "submit";
    this.submitButton.disabled = true;
    root.appendChild(this.contextForm);

    this.panel = el("div", "diagnosis-panel");
    root.appendChild(this.panel);

    this.setTool("fg");
  }

  async init(): Promise<void> {
    const [images, model] = await Promise.all([
      this.api.listImages(),
      this.api.modelInfo(),
    ]);
    this.state.model = model;
    this.buildContextForm();
    this.imageSelect.innerHTML = "";
    for (const image of images) {
      const option = el("option");
      option.value = image.id;
      option.textContent = image.name;
      this.imageSelect.appendChild(option);
    }
    if (images.length > 0) {
      await this.selectImage(images[0].id);
    }
  }

  async selectImage(imageId: string): Promise<void> {
    const session = await this.api.createSession(imageId);
    this.state.imageId = imageId;
    this.state.sessionId = session.session_id;
    this.state.seeds = [];
    this.state.mask = null;
    this.state.jaccard = null;
    this.state.diagnosis = null;
    this.state.hint = "Click the lesion, then the surrounding skin.";
    this.photo.src = this.api.imageUrl(imageId);
    this.imageSelect.value = imageId;
    this.render();
  }

  setTool(tool: Tool): void {
    this.state.tool = tool;
    for (const [name, button] of this.toolButtons) {
      button.classList.toggle("active", name === tool);
    }
  }

  private onCanvasClick(event: MouseEvent): void {
    const rect = this.canvas.getBoundingClientRect();
    if (rect.width === 0 || rect.height === 0) return;
    if (this.state.tool === "erase") {
      const index = nearestSeedIndex(this.state.seeds, event.clientX, event.clientY, rect);
      if (index >= 0) {
        this.eraseInFlight = this.eraseSeed(index).finally(() => {
          this.eraseInFlight = null;
        });
      }
      return;
    }
    const point = displayToWorking(event.clientX, event.clientY, rect);
    void this.placeSeedAt(point.x, point.y);
  }

  /** Queue one seed of the active tool at working coordinates. */
  placeSeedAt(x: number, y: number): Promise<void> {
    if (this.state.tool === "erase") return Promise.resolve();
    this.pendingSeeds.push({ x, y, label: this.state.tool });
    const done = new Promise<void>((resolve) => this.flushResolvers.push(resolve));
    this.pump();
    return done;
  }

  /** Rapid clicks coalesce: everything queued ships as one request. */
  private pump(): void {
    if (this.inFlight || this.pendingSeeds.length === 0 || !this.state.sessionId) {
      if (!this.inFlight && this.pendingSeeds.length === 0) this.settleFlush();
      return;
    }
    const batch = this.pendingSeeds.splice(0, this.pendingSeeds.length);
    this.inFlight = true;
    this.api
      .addSeeds(this.state.sessionId, batch, this.state.m)
      .then((response) => {
        this.state.seeds = response.seeds;
        this.state.mask = decodeMask(response.mask_png_base64);
        this.state.jaccard = response.jaccard ?? null;
        this.state.hint = null;
      })
      .catch((error: unknown) => {
        if (error instanceof ApiError && error.status === 422) {
          // Seeds were stored; segmentation just needs both labels.
          this.state.seeds = [...this.state.seeds, ...batch];
          this.state.hint = "Add at least one seed of each type.";
        } else {
          this.state.hint = error instanceof Error ? error.message : String(error);
        }
      })
      .finally(() => {
        this.inFlight = false;
        this.render();
        this.pump();
      });
  }

  private settleFlush(): void {
    const resolvers = this.flushResolvers.splice(0, this.flushResolvers.length);
    for (const resolve of resolvers) resolve();
  }

  /** Wait for queued seed requests only (erase calls this internally). */
  private seedsIdle(): Promise<void> {
    if (!this.inFlight && this.pendingSeeds.length === 0) return Promise.resolve();
    return new Promise((resolve) => this.flushResolvers.push(resolve));
  }

  /** Wait until every queued seed request (and any erase) has settled. */
  idle(): Promise<void> {
    if (this.eraseInFlight) {
      return this.eraseInFlight.then(() => this.idle());
    }
    return this.seedsIdle();
  }

  async eraseSeed(index: number): Promise<void> {
    if (!this.state.sessionId) return;
    const remaining = this.state.seeds.filter((_, i) => i !== index);
    await this.api.resetSeeds(this.state.sessionId);
    this.state.seeds = [];
    this.state.mask = null;
    this.state.jaccard = null;
    if (remaining.length > 0) {
      this.pendingSeeds.push(...remaining);
      this.pump();
      await this.seedsIdle();
    } else {
      this.state.hint = "Click the lesion, then the surrounding skin.";
      this.render();
    }
  }

  private buildContextForm(): void {
    this.contextForm.innerHTML = "";
    const schema = this.state.model?.context_schema ?? [];
    for (const field of schema) {
      const row = el("label", `field field-${field}`);
      row.appendChild(el("span", "field-name", field));
      if (field === "age") {
        const input = el("input");
        input.type = "number";
        input.name = field;
        input.min = "0";
        input.required = true;
        input.addEventListener("input", () => this.updateSubmitState());
        row.appendChild(input);
      } else if (field === "sex") {
        const select = el("select");
        select.name = field;
        for (const value of ["male", "female"]) {
          const option = el("option", undefined, value);
          option.value = value;
          select.appendChild(option);
        }
        row.appendChild(select);
      } else {
        const box = el("input");
        box.type = "checkbox";
        box.name = field;
        row.appendChild(box);
      }
      this.contextForm.appendChild(row);
    }
    if (schema.length === 0) {
      this.contextForm.appendChild(
        el("div", "no-context", "This model uses image features only."),
      );
    }
    this.contextForm.appendChild(this.submitButton);
  }

  contextFromForm(): Record<string, unknown> | null {
    const schema = this.state.model?.context_schema ?? [];
    if (schema.length === 0) return null;
    const context: Record<string, unknown> = {};
    for (const field of schema) {
      const input = this.contextForm.elements.namedItem(field) as
        | HTMLInputElement
        | HTMLSelectElement
        | null;
      if (!input) continue;
      if (field === "age") {
        context[field] = Number((input as HTMLInputElement).value);
      } else if (field === "sex") {
        context[field] = input.value;
      } else {
        context[field] = (input as HTMLInputElement).checked ? "Yes" : "No";
      }
    }
    return context;
  }

  private formComplete(): boolean {
    const schema = this.state.model?.context_schema ?? [];
    if (!schema.includes("age")) return true;
    const input = this.contextForm.elements.namedItem("age") as HTMLInputElement | null;
    return input !== null && input.value !== "";
  }

  updateSubmitState(): void {
    const ready =
      this.state.mask !== null && this.state.model?.loaded === true && this.formComplete();
    this.submitButton.disabled = !ready;
  }

  async requestDiagnosis(): Promise<Diagnosis | null> {
    if (!this.state.sessionId || this.state.mask === null) return null;
    try {
      const diagnosis = await this.api.classify(this.state.sessionId, this.contextFromForm());
      this.state.diagnosis = diagnosis;
      this.state.hint = null;
    } catch (error) {
      this.state.hint = error instanceof Error ? error.message : String(error);
      this.state.diagnosis = null;
    }
    this.render();
    return this.state.diagnosis;
  }

  render(): void {
    this.hintBox.textContent = this.state.hint ?? "";
    this.hintBox.classList.toggle("visible", this.state.hint !== null);
    const fg = this.state.seeds.filter((s) => s.label === "fg").length;
    const bg = this.state.seeds.length - fg;
    const ji = this.state.jaccard !== null ? ` | Jaccard vs truth: ${this.state.jaccard.toFixed(3)}` : "";
    this.statusBox.textContent = `Seeds: ${fg} lesion, ${bg} skin${ji}`;
    this.drawOverlay();
    this.renderPanel();
    this.updateSubmitState();
  }

  private drawOverlay(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return; // headless test environment renders state only
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    if (this.state.mask) {
      const buf = overlayBuffer(this.state.mask, DISPLAY_SCALE, DISPLAY_SCALE);
      ctx.putImageData(new ImageData(buf, this.canvas.width, this.canvas.height), 0, 0);
    }
    const rect = { left: 0, top: 0, width: this.canvas.width, height: this.canvas.height };
    for (const seed of this.state.seeds) {
      const p = workingToDisplay(seed.x, seed.y, rect);
      ctx.beginPath();
      ctx.arc(p.x, p.y, 4, 0, Math.PI * 2);
      ctx.fillStyle = seed.label === "fg" ? "#e03131" : "#1971c2";
      ctx.fill();
      ctx.strokeStyle = "white";
      ctx.stroke();
    }
  }

  private renderPanel(): void {
    this.panel.innerHTML = "";
    const diagnosis = this.state.diagnosis;
    if (!diagnosis) return;
    this.panel.appendChild(el("div", "label", diagnosis.label));
    const outputs = el("div", "outputs");
    const values = Object.values(diagnosis.outputs);
    const max = Math.max(...values.map(Math.abs), 1e-9);
    for (const [name, value] of Object.entries(diagnosis.outputs)) {
      const row = el("div", "output-row");
      row.appendChild(el("span", "output-name", name));
      const bar = el("div", "output-bar");
      bar.style.width = `${Math.max(2, Math.round((Math.abs(value) / max) * 160))}px`;
      bar.title = value.toFixed(4);
      row.appendChild(bar);
      row.appendChild(el("span", "output-value", value.toFixed(3)));
      outputs.appendChild(row);
    }
    this.panel.appendChild(outputs);
    const featureList = el("div", "features");
    for (const [group, entries] of groupFeatures(diagnosis.features)) {
      const section = el("details", `feature-group group-${group.toLowerCase()}`);
      section.appendChild(el("summary", undefined, `${group} (${entries.length})`));
      for (const [name, value] of entries) {
        const row = el("div", "feature-row");
        row.appendChild(el("span", "feature-name", name));
        row.appendChild(el("span", "feature-value", value.toFixed(5)));
        section.appendChild(row);
      }
      featureList.appendChild(section);
    }
    this.panel.appendChild(featureList);
  }
}

export function createApp(root: HTMLElement, apiBase = ""): AnnotatorApp {
  return new AnnotatorApp(root, new ApiClient(apiBase));
}
