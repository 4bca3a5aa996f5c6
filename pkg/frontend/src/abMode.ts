// Two-pane A/B preference mode. The pair descriptor knows which side holds
// the emotion render, but that never reaches the screen: the view exposes
// only left/right panes and the question text, and the choice handler maps
// the picked side to a condition token for the record endpoint.

import { ApiClient } from "./api.js";

export const AB_QUESTION =
  "As a movie director or content creator, which video result would you " +
  "prefer to use?";

export interface ABPairDescriptor {
  trial_id: string;
  clip_id: string;
  shown_emotion: string;
  is_correct_emotion: boolean;
  emotion_side: "left" | "right";
  left_url: string;
  right_url: string;
}

export interface ABViewModel {
  question: string;
  leftUrl: string;
  rightUrl: string;
  leftLabel: string;
  rightLabel: string;
}

// everything the screen shows; deliberately no emotion or side-assignment info
export function abViewModel(pair: ABPairDescriptor): ABViewModel {
  return {
    question: AB_QUESTION,
    leftUrl: pair.left_url,
    rightUrl: pair.right_url,
    leftLabel: "A",
    rightLabel: "B",
  };
}

export type PickedSide = "left" | "right";

export function choiceToken(pair: ABPairDescriptor, picked: PickedSide): string {
  return picked === pair.emotion_side ? "emotion_side" : "neutral_side";
}

export function keyToSide(key: string): PickedSide | null {
  if (key === "ArrowLeft") return "left";
  if (key === "ArrowRight") return "right";
  return null;
}

export class ABMode {
  private submitted = false;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private pair: ABPairDescriptor,
    private onDone: () => void = () => undefined
  ) {}

  view(): ABViewModel {
    return abViewModel(this.pair);
  }

  async choose(picked: PickedSide): Promise<void> {
    if (this.submitted) return;
    this.submitted = true;
    await this.api.submitAbChoice({
      session_id: this.sessionId,
      trial_id: this.pair.trial_id,
      clip_id: this.pair.clip_id,
      shown_emotion: this.pair.shown_emotion,
      is_correct_emotion: this.pair.is_correct_emotion,
      side: this.pair.emotion_side,
      choice: choiceToken(this.pair, picked),
    });
    this.onDone();
  }

  async handleKey(key: string): Promise<void> {
    const side = keyToSide(key);
    if (side !== null) await this.choose(side);
  }
}
