/** Policy authoring: list, new/save/delete, action picker, trigger summary.
 *
 * Trigger edits go straight to the server (create on the first instance
 * click, update on every later one), so the plan's colors always reflect a
 * saved policy and 400 bodies surface inline next to the control that
 * caused them.
 */

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { SessionStore } from "./state.js";
import type { PolicyDoc } from "./types.js";

export function createAuthoring(
  container: HTMLElement,
  api: ApiClient,
  store: SessionStore,
): { render: () => void; toggleInstance: (f: string, v: string, on: boolean) => void } {
  container.classList.add("authoring");

  let draftId = "";
  let draftAction = "";
  let drafting = false;

  const list = document.createElement("select");
  list.id = "policy-list";
  list.setAttribute("aria-label", "saved policies");
  list.addEventListener("change", () => void activate(list.value));

  const newButton = button("new-policy", "new", () => {
    drafting = true;
    draftId = "";
    draftAction = "";
    store.update({ activePolicy: null, suite: null, enactedCase: null, enactment: null });
  });
  const saveButton = button("save-policy", "save", () => void save());
  const deleteButton = button("delete-policy", "delete", () => void remove());

  const idInput = document.createElement("input");
  idInput.id = "policy-id";
  idInput.placeholder = "policy id";
  idInput.setAttribute("aria-label", "policy id");
  idInput.addEventListener("input", () => {
    draftId = idInput.value;
  });

  const actionPicker = document.createElement("select");
  actionPicker.id = "action-picker";
  actionPicker.setAttribute("aria-label", "action (controllable instances only)");
  actionPicker.addEventListener("change", () => {
    draftAction = actionPicker.value;
  });

  const summary = document.createElement("div");
  summary.id = "trigger-summary";
  summary.setAttribute("aria-live", "polite");

  const errorBox = document.createElement("p");
  errorBox.id = "authoring-error";
  errorBox.className = "error";

  container.append(list, newButton, saveButton, deleteButton, idInput, actionPicker,
                   errorBox, summary);

  function button(id: string, label: string, onClick: () => void): HTMLButtonElement {
    const b = document.createElement("button");
    b.id = id;
    b.type = "button";
    b.textContent = label;
    b.addEventListener("click", onClick);
    return b;
  }

  function fail(err: unknown): void {
    errorBox.textContent =
      err instanceof ApiError ? `${err.error}: ${err.detail}` : String(err);
  }

  async function refreshPolicies(activeId?: string): Promise<void> {
    const { policies } = await api.listPolicies();
    const active = activeId
      ? policies.find((p) => p.id === activeId) ?? null
      : store.state.activePolicy;
    store.update({ policies, activePolicy: active });
  }

  async function activate(policyId: string): Promise<void> {
    errorBox.textContent = "";
    try {
      const policy = await api.getPolicy(policyId);
      drafting = false;
      store.update({
        activePolicy: policy,
        suite: null,
        enactedCase: null,
        enactment: null,
        metrics: null,
      });
    } catch (err) {
      fail(err);
    }
  }

  /** First click creates the policy; later clicks edit the saved trigger. */
  function toggleInstance(factor: string, instance: string, selected: boolean): void {
    errorBox.textContent = "";
    const active = store.state.activePolicy;
    if (!active && drafting) {
      const [actionFactor, actionInstance] = draftAction.split("=");
      if (!draftId || !actionFactor || !actionInstance) {
        errorBox.textContent = "enter a policy id and pick an action first";
        return;
      }
      const doc: PolicyDoc = {
        id: draftId,
        action: { factor: actionFactor, instance: actionInstance },
        trigger: { [factor]: [instance] },
      };
      void api
        .createPolicy(doc)
        .then(async (created) => {
          drafting = false;
          store.update({ activePolicy: created });
          await refreshPolicies(created.id);
        })
        .catch(fail);
      return;
    }
    if (!active) {
      errorBox.textContent = "press 'new' to start a policy";
      return;
    }
    const trigger: Record<string, string[]> = {};
    for (const [f, vs] of Object.entries(active.trigger)) {
      trigger[f] = [...vs];
    }
    const current = new Set(trigger[factor] ?? []);
    if (selected) {
      current.add(instance);
    } else {
      current.delete(instance);
    }
    if (current.size === 0) {
      delete trigger[factor];
    } else {
      trigger[factor] = [...current];
    }
    void api
      .updatePolicy({ ...active, trigger })
      .then(async (updated) => {
        store.update({
          activePolicy: updated,
          suite: null,
          enactedCase: null,
          enactment: null,
        });
        await refreshPolicies(updated.id);
      })
      .catch(fail);
  }

  async function save(): Promise<void> {
    const active = store.state.activePolicy;
    if (!active) {
      errorBox.textContent = "nothing to save yet; click an instance to create the trigger";
      return;
    }
    try {
      const saved = await api.updatePolicy(active);
      store.update({ activePolicy: saved, notice: "policy saved" });
      await refreshPolicies(saved.id);
    } catch (err) {
      fail(err);
    }
  }

  async function remove(): Promise<void> {
    const active = store.state.activePolicy;
    if (!active) return;
    try {
      await api.deletePolicy(active.id);
      store.update({
        activePolicy: null,
        suite: null,
        enactedCase: null,
        enactment: null,
        metrics: null,
      });
      await refreshPolicies();
    } catch (err) {
      fail(err);
    }
  }

  function render(): void {
    const { policies, activePolicy, env } = store.state;
    list.textContent = "";
    for (const policy of policies) {
      const option = document.createElement("option");
      option.value = policy.id;
      option.textContent = policy.id;
      option.selected = policy.id === activePolicy?.id;
      list.append(option);
    }
    idInput.value = activePolicy?.id ?? draftId;
    idInput.disabled = !drafting && activePolicy !== null;

    actionPicker.textContent = "";
    if (env) {
      for (const factor of env.factors) {
        if (!factor.controllable) continue;
        for (const instance of factor.instances) {
          const option = document.createElement("option");
          option.value = `${factor.id}=${instance}`;
          option.textContent = `${factor.id} = ${instance}`;
          option.selected = activePolicy
            ? factor.id === activePolicy.action.factor &&
              instance === activePolicy.action.instance
            : `${factor.id}=${instance}` === draftAction;
          actionPicker.append(option);
        }
      }
    }
    actionPicker.disabled = !drafting && activePolicy !== null;
    if (drafting && !draftAction && actionPicker.options.length > 0) {
      draftAction = actionPicker.value;
    }

    if (activePolicy) {
      const entries = Object.entries(activePolicy.trigger)
        .map(([f, vs]) => `${f} ∈ {${vs.join(", ")}}`)
        .join(" AND ");
      summary.textContent =
        `when ${entries} then ${activePolicy.action.factor} = ${activePolicy.action.instance}`;
    } else {
      summary.textContent = drafting
        ? "drafting: pick an action, then click instances on the plan"
        : "no active policy";
    }
  }

  return { render, toggleInstance };
}
