// Application shell: mounts the wizard, owns the single mutable state
// reference, delegates DOM events to the pure transition functions, and
// re-renders. Wizard drafts persist in sessionStorage so state survives
// reloads and back/forward navigation within the session.

import { SizerApi, ApiFailure } from "./api.js";
import * as wizard from "./views/wizard.js";
import { renderResults } from "./views/results.js";
import {
  buildRequest,
  editField,
  goBack,
  goNext,
  initialState,
  setActiveTier,
  setArchitecture,
  setBulkType,
  setRuntimeField,
  setRuntimeSkipped,
  setServiceCount,
  setServiceField,
  setSubmitErrors,
  showResults,
  startOver,
  type Screen,
  type WizardState,
} from "./state.js";

const DRAFT_KEY = "sizer_wizard_draft";

function saveDraft(state: WizardState): void {
  try {
    sessionStorage.setItem(DRAFT_KEY, JSON.stringify({
      screen: state.screen === "results" ? "summary" : state.screen,
      deployment: state.deployment,
      runtime: state.runtime,
    }));
  } catch {
    // storage may be unavailable; drafts are best-effort
  }
}

function loadDraft(): WizardState | null {
  try {
    const raw = sessionStorage.getItem(DRAFT_KEY);
    if (!raw) return null;
    const draft = JSON.parse(raw);
    return { ...initialState(), screen: draft.screen, deployment: draft.deployment, runtime: draft.runtime };
  } catch {
    return null;
  }
}

export function mount(root: HTMLElement, api: SizerApi = new SizerApi()): void {
  let state = loadDraft() ?? initialState();

  function render(): void {
    switch (state.screen) {
      case "deployment":
        root.innerHTML = wizard.renderDeploymentStep(state);
        break;
      case "runtime":
        root.innerHTML = wizard.renderRuntimeStep(state);
        break;
      case "summary":
        root.innerHTML = wizard.renderSummary(state);
        break;
      case "results":
        root.innerHTML = renderResults(state);
        break;
    }
  }

  function update(next: WizardState, focus?: { selector: string; caret: number | null }): void {
    const screenChanged = next.screen !== state.screen;
    state = next;
    saveDraft(state);
    render();
    if (screenChanged) {
      history.pushState({ screen: state.screen }, "", "");
      window.scrollTo(0, 0);
    } else if (focus) {
      const el = root.querySelector<HTMLInputElement>(focus.selector);
      if (el) {
        el.focus();
        if (focus.caret !== null) el.setSelectionRange(focus.caret, focus.caret);
      }
    }
  }

  async function submit(): Promise<void> {
    try {
      const result = await api.postSize(buildRequest(state));
      update(showResults(state, result));
    } catch (err) {
      const errors = err instanceof ApiFailure
        ? err.errors.map((e) => ({ message: e.message, path: e.path }))
        : [{ message: `request failed: ${String(err)}` }];
      update(setSubmitErrors(state, errors));
    }
  }

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action;
    if (action === "edit-field") {
      event.preventDefault();
      update(editField(state, target.dataset.owner as "deployment" | "runtime"));
    } else if (action === "next") {
      update(goNext(state));
    } else if (action === "back") {
      update(goBack(state));
    } else if (action === "confirm") {
      void submit();
    } else if (action === "select-tier") {
      update(setActiveTier(state, target.dataset.tier ?? ""));
    } else if (action === "start-over") {
      update(startOver(state));
    }
  });

  root.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    const action = target.dataset.action;
    if (!action) return;
    const caret = target.selectionStart;
    const index = Number(target.dataset.index ?? -1);
    const focus = { selector: `[data-action="${action}"]` + (target.dataset.index !== undefined ? `[data-index="${index}"]` : ""), caret };
    switch (action) {
      case "service-count":
        update(setServiceCount(state, target.value), focus);
        break;
      case "service-id":
        update(setServiceField(state, index, "id", target.value), focus);
        break;
      case "concurrency":
        update(setRuntimeField(state, "concurrency", target.value), focus);
        break;
      case "throughput":
        update(setRuntimeField(state, "throughput", target.value), focus);
        break;
      case "payload-request":
        update(setRuntimeField(state, "payloadRequestKb", target.value), focus);
        break;
      case "payload-response":
        update(setRuntimeField(state, "payloadResponseKb", target.value), focus);
        break;
    }
  });

  root.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    const action = target.dataset.action;
    if (!action) return;
    const index = Number(target.dataset.index ?? -1);
    switch (action) {
      case "bulk-impl":
        update(setBulkType(state, "implementation", target.value));
        break;
      case "bulk-binding":
        update(setBulkType(state, "binding", target.value));
        break;
      case "service-impl":
        update(setServiceField(state, index, "implementationType", target.value));
        break;
      case "service-binding":
        update(setServiceField(state, index, "bindingType", target.value));
        break;
      case "skip-runtime":
        update(setRuntimeSkipped(state, target.checked));
        break;
      case "workload-type":
        update(setRuntimeField(state, "workloadType", target.value));
        break;
      case "architecture":
        update(setArchitecture(state, target.value as "single" | "distributed"));
        break;
    }
  });

  window.addEventListener("popstate", (event) => {
    const screen = (event.state && event.state.screen) as Screen | undefined;
    if (!screen || (screen === "results" && state.result === null)) {
      state = { ...state, screen: "deployment" };
    } else {
      state = { ...state, screen };
    }
    saveDraft(state);
    render();
  });

  history.replaceState({ screen: state.screen }, "", "");
  render();
}

const rootEl = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootEl) {
  mount(rootEl);
}
