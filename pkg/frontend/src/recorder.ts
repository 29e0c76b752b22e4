/** Context-history recorder: a 2D stand-in for living through a day.
 *
 * The user steps a clock through the day, picks what is happening at each
 * step, and captures steps onto a draft timeline. Draft blocks can be
 * inspected by hover and deleted by click. Saving the day opens a new day on
 * the server and posts every captured step as a scene; the timeline then
 * mirrors the server's history.
 */

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { SessionStore } from "./state.js";

interface DraftStep {
  time: string;
  values: Record<string, string>;
}

export function createRecorder(
  container: HTMLElement,
  api: ApiClient,
  store: SessionStore,
): { render: () => void } {
  container.classList.add("recorder");
  let clockIndex = 0;
  let draft: DraftStep[] = [];

  const controls = document.createElement("div");
  controls.className = "recorder-controls";
  const clockLabel = document.createElement("span");
  clockLabel.id = "clock";
  clockLabel.setAttribute("aria-live", "polite");

  const earlier = button("clock-back", "◀ earlier", () => {
    clockIndex = Math.max(0, clockIndex - 1);
    render();
  });
  const later = button("clock-forward", "later ▶", () => {
    const times = timeInstances();
    clockIndex = Math.min(times.length - 1, clockIndex + 1);
    render();
  });

  const pickers = document.createElement("div");
  pickers.className = "recorder-pickers";

  const capture = button("capture-step", "capture step", () => {
    const values: Record<string, string> = {};
    for (const select of pickers.querySelectorAll("select")) {
      values[select.dataset.factor as string] = select.value;
    }
    draft.push({ time: currentTime(), values });
    render();
  });

  const saveDay = button("save-day", "save day", () => void persistDay());
  const errorBox = document.createElement("p");
  errorBox.id = "recorder-error";
  errorBox.className = "error";

  const timeline = document.createElement("ol");
  timeline.id = "timeline";
  timeline.setAttribute("aria-label", "timeline");

  controls.append(earlier, clockLabel, later, capture, saveDay);
  container.append(controls, pickers, errorBox, timeline);

  function button(id: string, label: string, onClick: () => void): HTMLButtonElement {
    const b = document.createElement("button");
    b.id = id;
    b.type = "button";
    b.textContent = label;
    b.addEventListener("click", onClick);
    return b;
  }

  function timeInstances(): string[] {
    const env = store.state.env;
    const time = env?.factors.find((f) => f.kind === "Time");
    return time?.instances ?? [];
  }

  function currentTime(): string {
    return timeInstances()[clockIndex] ?? "";
  }

  function describe(step: DraftStep): string {
    const parts = Object.entries(step.values).map(([f, v]) => `${f}=${v}`);
    return `${step.time}: ${parts.join(", ")}`;
  }

  async function persistDay(): Promise<void> {
    errorBox.textContent = "";
    try {
      await api.newDay();
      for (const step of draft) {
        const env = store.state.env;
        const timeFactor = env?.factors.find((f) => f.kind === "Time")?.id ?? "time";
        await api.appendScene({ [timeFactor]: step.time, ...step.values });
      }
      draft = [];
      store.update({ history: await api.history(), notice: "day saved" });
    } catch (err) {
      errorBox.textContent =
        err instanceof ApiError ? `${err.error}: ${err.detail}` : String(err);
    }
    render();
  }

  function renderPickers(): void {
    pickers.textContent = "";
    const env = store.state.env;
    if (!env) return;
    for (const factor of env.factors) {
      if (factor.kind === "Time") continue;
      const label = document.createElement("label");
      label.textContent = `${factor.id} `;
      const select = document.createElement("select");
      select.dataset.factor = factor.id;
      for (const instance of factor.instances) {
        const option = document.createElement("option");
        option.value = instance;
        option.textContent = instance;
        option.selected = instance === factor.default_instance;
        select.append(option);
      }
      label.append(select);
      pickers.append(label);
    }
  }

  function renderTimeline(): void {
    timeline.textContent = "";
    const scenes = store.state.history?.scenes ?? [];
    for (const scene of scenes.slice(-12)) {
      const block = document.createElement("li");
      block.className = "timeline-block saved";
      const parts = Object.entries(scene.assignments).map(([f, v]) => `${f}=${v}`);
      block.title = `scene ${scene.seq}` + (scene.day !== undefined ? ` (day ${scene.day})` : "") +
        `: ${parts.join(", ")}`;
      block.textContent = `#${scene.seq} ${scene.assignments["time"] ?? ""}`;
      timeline.append(block);
    }
    draft.forEach((step, index) => {
      const block = document.createElement("li");
      block.className = "timeline-block draft";
      block.title = describe(step) + " (click to delete)";
      block.textContent = `draft ${step.time}`;
      block.tabIndex = 0;
      block.setAttribute("role", "button");
      block.addEventListener("click", () => {
        draft.splice(index, 1);
        render();
      });
      timeline.append(block);
    });
  }

  function render(): void {
    clockLabel.textContent = `clock: ${currentTime() || "-"}`;
    if (pickers.childElementCount === 0) renderPickers();
    renderTimeline();
  }

  return { render };
}
