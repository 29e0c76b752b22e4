/** Validation flow: request a suite, walk cases one at a time, fast-forward
 * each one, refine, and watch the suite regenerate. Also hosts the metrics
 * tab. The device icon flips according to the enactment the server returns,
 * never according to local reasoning.
 */

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import { caseAssignments, type SessionStore } from "./state.js";
import type { RefineDecision } from "./types.js";

export function createValidation(
  container: HTMLElement,
  api: ApiClient,
  store: SessionStore,
  generation: { threshold: number; seed: number } = { threshold: 0.5, seed: 0 },
): { render: () => void } {
  container.classList.add("validation");

  const start = button("start-validation", "start validation", () => void requestSuite());
  const caseCard = document.createElement("div");
  caseCard.id = "case-card";

  const enactButton = button("enact-case", "enact", () => void enactShown());
  const nextButton = button("next-case", "next case", () => {
    const suite = store.state.suite;
    if (!suite || suite.cases.length === 0) return;
    store.update({
      caseIndex: (store.state.caseIndex + 1) % suite.cases.length,
      enactment: null,
    });
  });

  const refineBar = document.createElement("div");
  refineBar.id = "refine-bar";
  refineBar.append(
    button("accept-suggestion", "accept suggestion", () => void refine("add_suggested")),
    button("widen-selection", "widen selection", () => void refine("widen_selected")),
    button("remove-factor", "remove factor", () => void refine("remove_focus_factor")),
    button("dismiss-case", "dismiss", () => void refine("dismiss")),
  );

  const outcome = document.createElement("div");
  outcome.id = "enactment-outcome";
  const deviceIcon = document.createElement("div");
  deviceIcon.id = "device-icon";
  deviceIcon.dataset.state = "";

  const errorBox = document.createElement("p");
  errorBox.id = "validation-error";
  errorBox.className = "error";

  const metricsPanel = document.createElement("div");
  metricsPanel.id = "metrics-panel";
  const splitPicker = document.createElement("select");
  splitPicker.id = "metrics-split";
  for (const split of ["eval", "train", "all"]) {
    const option = document.createElement("option");
    option.value = split;
    option.textContent = `${split} split`;
    splitPicker.append(option);
  }
  const metricsButton = button("refresh-metrics", "refresh metrics", () => void fetchMetrics());
  const metricsTable = document.createElement("table");
  metricsTable.id = "metrics-table";
  metricsPanel.append(splitPicker, metricsButton, metricsTable);

  container.append(start, caseCard, enactButton, nextButton, refineBar,
                   deviceIcon, outcome, errorBox, metricsPanel);

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

  async function requestSuite(): Promise<void> {
    errorBox.textContent = "";
    const policy = store.state.activePolicy;
    if (!policy) {
      errorBox.textContent = "author or select a policy first";
      return;
    }
    try {
      const suite = await api.suite(policy.id, generation.threshold, generation.seed);
      store.update({ suite, caseIndex: 0, enactment: null });
    } catch (err) {
      fail(err);
    }
  }

  async function enactShown(): Promise<void> {
    errorBox.textContent = "";
    const policy = store.state.activePolicy;
    const shown = store.shownCase;
    if (!policy || !shown) return;
    try {
      const enactment = await api.enact(policy.id, shown.id);
      store.update({ enactment, enactedCase: shown });
    } catch (err) {
      fail(err);
    }
  }

  /** Apply a decision, then auto-refresh policy and suite. */
  async function refine(decision: RefineDecision): Promise<void> {
    errorBox.textContent = "";
    const policy = store.state.activePolicy;
    const shown = store.shownCase;
    if (!policy || !shown) return;
    try {
      const updated = await api.refine(policy.id, shown.id, decision);
      const suite = await api.suite(updated.id, generation.threshold, generation.seed);
      store.update({
        activePolicy: updated,
        suite,
        caseIndex: 0,
        enactedCase: null,
        enactment: null,
      });
    } catch (err) {
      fail(err);
    }
  }

  async function fetchMetrics(): Promise<void> {
    errorBox.textContent = "";
    const policy = store.state.activePolicy;
    if (!policy) return;
    try {
      const metrics = await api.metrics(
        policy.id,
        splitPicker.value as "train" | "eval" | "all",
        generation.seed,
      );
      store.update({ metrics });
    } catch (err) {
      fail(err);
    }
  }

  function renderCase(): void {
    const suite = store.state.suite;
    const shown = store.shownCase;
    caseCard.textContent = "";
    if (!suite) {
      caseCard.textContent = "no suite requested yet";
      return;
    }
    if (suite.cases.length === 0) {
      caseCard.textContent = "no test cases: the policy agrees with the history";
      caseCard.dataset.empty = "true";
      return;
    }
    delete caseCard.dataset.empty;
    if (!shown) return;
    const heading = document.createElement("h3");
    heading.textContent =
      `case ${store.state.caseIndex + 1}/${suite.cases.length}: ${shown.id} ` +
      `(condition ${shown.condition})`;
    const rationale = document.createElement("p");
    rationale.className = "rationale";
    rationale.textContent = shown.rationale;
    const scenario = document.createElement("ul");
    scenario.className = "scenario";
    for (const [factor, instance] of Object.entries(caseAssignments(shown))) {
      const li = document.createElement("li");
      li.textContent = `${factor} = ${instance}`;
      li.dataset.factor = factor;
      scenario.append(li);
    }
    caseCard.dataset.caseId = shown.id;
    caseCard.dataset.condition = String(shown.condition);
    caseCard.append(heading, rationale, scenario);
  }

  function renderOutcome(): void {
    const { enactment, activePolicy } = store.state;
    outcome.textContent = "";
    if (!activePolicy) {
      deviceIcon.dataset.state = "";
      deviceIcon.textContent = "";
      return;
    }
    const device = activePolicy.action.factor;
    if (!enactment) {
      deviceIcon.dataset.state = "idle";
      deviceIcon.textContent = `${device}: idle`;
      return;
    }
    const fires = enactment.triggered;
    deviceIcon.dataset.state = fires ? "on" : "off";
    deviceIcon.textContent = fires
      ? `${device} turns ${activePolicy.action.instance}`
      : `${device} stays unchanged`;
    const table = document.createElement("table");
    table.className = "match-detail";
    for (const match of enactment.matches) {
      const row = table.insertRow();
      row.insertCell().textContent = match.factor;
      row.insertCell().textContent = match.actual;
      row.insertCell().textContent = `selected: ${match.selected.join(", ")}`;
      row.insertCell().textContent = match.matched ? "match" : "MISS";
      row.dataset.matched = String(match.matched);
    }
    outcome.append(table);
  }

  function renderMetrics(): void {
    const metrics = store.state.metrics;
    metricsTable.textContent = "";
    if (!metrics) return;
    const rows: Array<[string, string]> = [
      ["precision", metrics.precision.toFixed(4)],
      ["recall", metrics.recall.toFixed(4)],
      ["f-score", metrics.f_score.toFixed(4)],
      ["tp/fp/fn/tn", `${metrics.tp}/${metrics.fp}/${metrics.fn}/${metrics.tn}`],
    ];
    for (const [name, value] of rows) {
      const row = metricsTable.insertRow();
      row.insertCell().textContent = name;
      row.insertCell().textContent = value;
    }
  }

  function render(): void {
    renderCase();
    renderOutcome();
    renderMetrics();
  }

  return { render };
}
