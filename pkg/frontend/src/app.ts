/** Composition root: wires the store, API client, and the three panels. */

import { ApiClient } from "./api.js";
import { createAuthoring } from "./authoring.js";
import { createFloorplan } from "./floorplan.js";
import { createRecorder } from "./recorder.js";
import { SessionStore } from "./state.js";
import { createValidation } from "./validation.js";

export interface App {
  store: SessionStore;
  api: ApiClient;
  root: HTMLElement;
  /** Initial data load; resolves when the environment and history are in. */
  ready: Promise<void>;
}

export function createApp(
  root: HTMLElement,
  baseUrl: string,
  generation: { threshold: number; seed: number } = { threshold: 0.5, seed: 0 },
): App {
  const api = new ApiClient(baseUrl);
  const store = new SessionStore();

  root.innerHTML = "";
  const header = document.createElement("header");
  const title = document.createElement("h1");
  title.textContent = "capforge workbench";
  const notice = document.createElement("p");
  notice.id = "notice";
  notice.setAttribute("aria-live", "polite");
  header.append(title, notice);

  const planSection = section(root, "plan", "floorplan");
  const recordSection = section(root, "record", "record a day");
  const authorSection = section(root, "author", "author a policy");
  const validateSection = section(root, "validate", "validate and refine");
  root.prepend(header);

  const authoring = createAuthoring(authorSection, api, store);
  const floorplan = createFloorplan(planSection, store, {
    onToggle: (factor, instance, selected) =>
      authoring.toggleInstance(factor, instance, selected),
  });
  const recorder = createRecorder(recordSection, api, store);
  const validation = createValidation(validateSection, api, store, generation);

  store.subscribe(() => {
    notice.textContent = store.state.notice;
    floorplan.render();
    recorder.render();
    authoring.render();
    validation.render();
  });

  const ready = (async () => {
    const [env, history, policies] = await Promise.all([
      api.environment(),
      api.history(),
      api.listPolicies(),
    ]);
    store.update({ env, history, policies: policies.policies });
  })();

  return { store, api, root, ready };
}

function section(root: HTMLElement, id: string, heading: string): HTMLElement {
  const el = document.createElement("section");
  el.id = id;
  const h = document.createElement("h2");
  h.textContent = heading;
  el.append(h);
  root.append(el);
  return el;
}

/** Browser entry: mount on #app using ?api=… or the current origin. */
export function mount(): void {
  const root = document.getElementById("app");
  if (!root) return;
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? window.location.origin;
  createApp(root, base);
}
