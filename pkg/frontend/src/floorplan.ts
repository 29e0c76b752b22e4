/** Floorplan with anchored factor nodes plus a side panel for the rest.
 *
 * Anchored factors (locations, activities, object states) render as nodes
 * positioned on the plan; time, user and digital states sit in a fixed side
 * panel. Every instance row is a checkbox that edits the active trigger,
 * color-coded Blue/Pink/Red with a matching text label so color is never the
 * only signal.
 */

import type { SessionStore } from "./state.js";
import type { EnvironmentDoc, FactorDoc } from "./types.js";

export interface FloorplanCallbacks {
  /** Toggle an instance in the active policy's trigger. */
  onToggle: (factor: string, instance: string, selected: boolean) => void;
}

const ANCHORED = new Set(["Location", "Activity", "ObjectState"]);

export function createFloorplan(
  container: HTMLElement,
  store: SessionStore,
  callbacks: FloorplanCallbacks,
): { render: () => void } {
  container.classList.add("floorplan-wrap");
  const plan = document.createElement("div");
  plan.className = "floorplan";
  plan.setAttribute("role", "group");
  plan.setAttribute("aria-label", "floorplan");
  const side = document.createElement("div");
  side.className = "side-panel";
  side.setAttribute("role", "group");
  side.setAttribute("aria-label", "spatially-insensitive factors");
  container.append(plan, side);

  function factorNode(env: EnvironmentDoc, factor: FactorDoc): HTMLElement {
    const node = document.createElement("fieldset");
    node.className = "factor-node";
    node.dataset.factor = factor.id;
    if (factor.anchor) {
      node.style.left = `${factor.anchor[0] * 100}%`;
      node.style.top = `${factor.anchor[1] * 100}%`;
      node.classList.add("anchored");
    }
    const title = document.createElement("legend");
    title.textContent = `${factor.id} (${factor.kind})`;
    node.append(title);

    const states = store.displayStates();
    const policy = store.state.activePolicy;
    const actionFactor = policy?.action.factor ?? null;
    for (const instance of factor.instances) {
      const state = states?.[factor.id]?.[instance] ?? "Blue";
      const row = document.createElement("label");
      row.className = `instance state-${state.toLowerCase()}`;
      row.dataset.factor = factor.id;
      row.dataset.instance = instance;
      row.dataset.state = state;

      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = state === "Pink" || isSelected(factor.id, instance);
      if (factor.id === actionFactor) {
        box.disabled = true;
        row.title = "the action's own factor cannot appear in the trigger";
      }
      box.addEventListener("change", () =>
        callbacks.onToggle(factor.id, instance, box.checked),
      );

      const text = document.createElement("span");
      text.textContent = `${instance} [${state}]`;
      row.append(box, text);
      node.append(row);
    }
    return node;
  }

  function isSelected(factor: string, instance: string): boolean {
    const trigger = store.state.activePolicy?.trigger ?? {};
    return (trigger[factor] ?? []).includes(instance);
  }

  function render(): void {
    const env = store.state.env;
    plan.textContent = "";
    side.textContent = "";
    if (!env) return;
    for (const factor of env.factors) {
      const target = ANCHORED.has(factor.kind) ? plan : side;
      target.append(factorNode(env, factor));
    }
  }

  return { render };
}
