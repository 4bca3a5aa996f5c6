// Six-slider calibration panel model. DOM-free so the serialization and
// request behavior can be tested headlessly; main.ts binds it to elements.

import { ApiClient, TrialAssignment } from "./api.js";
import { RateLimiter } from "./throttle.js";

// serialization order expected by the preview endpoint
export const ALPHA_ORDER = [
  "alpha_s",
  "alpha_yb",
  "alpha_rg",
  "alpha_lc",
  "alpha_b",
  "alpha_p",
] as const;

export type AlphaName = (typeof ALPHA_ORDER)[number];

export const SLIDER_RANGES: Record<AlphaName, [number, number]> = {
  alpha_s: [-1, 3],
  alpha_yb: [-1, 1],
  alpha_rg: [-1, 1],
  alpha_lc: [-0.5, 0.5],
  alpha_b: [-0.5, 0.5],
  alpha_p: [-0.5, 2],
};

export interface SliderPanelState {
  values: Record<AlphaName, number>;
  dirty: boolean;
  trialId: string | null;
}

export function zeroValues(): Record<AlphaName, number> {
  return {
    alpha_s: 0,
    alpha_yb: 0,
    alpha_rg: 0,
    alpha_lc: 0,
    alpha_b: 0,
    alpha_p: 0,
  };
}

// loss-free at 2 decimals, no trailing zero noise: 0 -> "0", 0.19 -> "0.19"
export function formatAlpha(v: number): string {
  return String(Number(v.toFixed(2)));
}

export function serializeAlphas(values: Record<AlphaName, number>): string {
  return ALPHA_ORDER.map((name) => formatAlpha(values[name])).join(",");
}

export interface PanelEvents {
  onPreview?: (blob: Blob) => void;
  onTrial?: (trial: TrialAssignment) => void;
  onSessionDone?: () => void;
  confirmUnchanged?: () => boolean;
}

export class SliderPanel {
  state: SliderPanelState = { values: zeroValues(), dirty: false, trialId: null };
  private limiter: RateLimiter;
  private seq = 0;
  private imageId: string | null = null;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private events: PanelEvents = {},
    previewIntervalMs = 100
  ) {
    this.limiter = new RateLimiter(previewIntervalMs);
  }

  beginTrial(trial: TrialAssignment): void {
    this.state = { values: zeroValues(), dirty: false, trialId: trial.trial_id };
    this.imageId = trial.image_id;
    this.events.onTrial?.(trial);
  }

  setSlider(name: AlphaName, value: number): void {
    const [lo, hi] = SLIDER_RANGES[name];
    const clamped = Math.min(hi, Math.max(lo, value));
    if (clamped === this.state.values[name]) return; // no change, no request
    this.state.values[name] = clamped;
    this.state.dirty = true;
    this.requestPreview("draft");
  }

  // full-quality render on slider release
  releaseSlider(): void {
    this.requestPreview("full");
  }

  private requestPreview(quality: "draft" | "full"): void {
    if (this.imageId === null) return;
    const imageId = this.imageId;
    const alphas = serializeAlphas(this.state.values);
    this.limiter.schedule(() => {
      const mySeq = ++this.seq;
      this.api
        .fetchPreview(imageId, alphas, quality)
        .then((blob) => {
          if (mySeq === this.seq) this.events.onPreview?.(blob); // stale drop
        })
        .catch(() => undefined);
    });
  }

  async submit(): Promise<void> {
    if (this.state.trialId === null) return;
    if (!this.state.dirty && !(this.events.confirmUnchanged?.() ?? true)) {
      return;
    }
    await this.api.submitCalibration({
      session_id: this.sessionId,
      trial_id: this.state.trialId,
      vector: { ...this.state.values },
    });
    await this.advance();
  }

  async advance(): Promise<void> {
    try {
      const trial = await this.api.nextTrial(this.sessionId);
      this.beginTrial(trial);
      this.requestPreview("full");
    } catch (err) {
      if ((err as { status?: number }).status === 410) {
        this.state.trialId = null;
        this.events.onSessionDone?.();
        return;
      }
      throw err;
    }
  }
}
