// Thin typed client over the calibration service HTTP endpoints.
// The fetch function is injectable so tests can capture requests.

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface SessionInfo {
  session_id: string;
  subject_id: string;
  seed: number;
  trial_count: number;
}

export interface TrialAssignment {
  trial_id: string;
  image_id: string;
  target_emotion: string;
  instruction: string;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (u, i) => fetch(u, i)
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path);
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as T;
  }

  newSession(subject: string, seed?: number): Promise<SessionInfo> {
    const q = seed === undefined ? "" : `&seed=${seed}`;
    return this.getJson(`/session/new?subject=${encodeURIComponent(subject)}${q}`);
  }

  nextTrial(sessionId: string): Promise<TrialAssignment> {
    return this.getJson(`/trial/next?session=${encodeURIComponent(sessionId)}`);
  }

  previewUrl(imageId: string, alphas: string, quality: "draft" | "full"): string {
    return (
      `${this.baseUrl}/preview?image=${encodeURIComponent(imageId)}` +
      `&alphas=${encodeURIComponent(alphas)}&quality=${quality}`
    );
  }

  async fetchPreview(
    imageId: string,
    alphas: string,
    quality: "draft" | "full"
  ): Promise<Blob> {
    const res = await this.fetchFn(this.previewUrl(imageId, alphas, quality));
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return res.blob();
  }

  async submitCalibration(body: {
    session_id: string;
    trial_id: string;
    vector: Record<string, number>;
  }): Promise<{ status: string; completed: number }> {
    const res = await this.fetchFn(`${this.baseUrl}/calibration`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return res.json();
  }

  async submitAbChoice(body: {
    session_id: string;
    trial_id: string;
    clip_id: string;
    shown_emotion: string;
    is_correct_emotion: boolean;
    side: string;
    choice: string;
  }): Promise<{ status: string; completed: number }> {
    const res = await this.fetchFn(`${this.baseUrl}/ab-choice`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return res.json();
  }
}
