// DOM wiring for the calibration panel. Served next to the service, e.g.
//   python3 -m http.server 8080  (from frontend/)
// with the service on localhost:8321.

import { ApiClient } from "./api.js";
import {
  ALPHA_ORDER,
  AlphaName,
  SLIDER_RANGES,
  SliderPanel,
} from "./sliderPanel.js";

const SLIDER_LABELS: Record<AlphaName, string> = {
  alpha_s: "Saturation",
  alpha_yb: "Yellow-Blue",
  alpha_rg: "Red-Green",
  alpha_lc: "Local contrast",
  alpha_b: "Brightness",
  alpha_p: "Sharpness",
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function start(): Promise<void> {
  const api = new ApiClient("http://127.0.0.1:8321");
  const subject = new URLSearchParams(location.search).get("subject") ?? "anon";
  const session = await api.newSession(subject);

  const banner = el<HTMLDivElement>("banner");
  const instruction = el<HTMLDivElement>("instruction");
  const preview = el<HTMLImageElement>("preview");
  const sliderBox = el<HTMLDivElement>("sliders");

  const panel = new SliderPanel(api, session.session_id, {
    onPreview: (blob) => {
      const url = URL.createObjectURL(blob);
      preview.onload = () => URL.revokeObjectURL(url);
      preview.src = url;
    },
    onTrial: (trial) => {
      banner.textContent = `Target emotion: ${trial.target_emotion}`;
      instruction.textContent = trial.instruction;
      for (const name of ALPHA_ORDER) {
        el<HTMLInputElement>(`slider-${name}`).value = "0";
        el<HTMLSpanElement>(`value-${name}`).textContent = "0";
      }
    },
    onSessionDone: () => {
      banner.textContent = "Session complete. Thank you!";
      sliderBox.style.display = "none";
    },
    confirmUnchanged: () =>
      window.confirm("You have not moved any slider. Submit anyway?"),
  });

  for (const name of ALPHA_ORDER) {
    const [lo, hi] = SLIDER_RANGES[name];
    const row = document.createElement("div");
    row.innerHTML =
      `<label for="slider-${name}">${SLIDER_LABELS[name]}</label>` +
      `<input type="range" id="slider-${name}" min="${lo}" max="${hi}" ` +
      `step="0.01" value="0">` +
      `<span id="value-${name}">0</span>`;
    sliderBox.appendChild(row);
    const input = row.querySelector("input")!;
    input.addEventListener("input", () => {
      panel.setSlider(name, Number(input.value));
      el<HTMLSpanElement>(`value-${name}`).textContent = input.value;
    });
    input.addEventListener("change", () => panel.releaseSlider());
  }

  el<HTMLButtonElement>("submit").addEventListener("click", () => {
    void panel.submit();
  });

  await panel.advance();
}

void start();
