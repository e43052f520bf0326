// Wizard screens: deployment inputs, runtime inputs, and the summary
// page that collates everything and links each field back to its step.

import {
  BINDING_TYPES,
  IMPLEMENTATION_TYPES,
  deploymentErrors,
  runtimeErrors,
  type WizardState,
} from "../state.js";
import { errorList, esc, option } from "./html.js";

function stepHeader(active: "deployment" | "runtime" | "summary"): string {
  const steps: [string, string][] = [
    ["deployment", "1. Deployment"],
    ["runtime", "2. Runtime"],
    ["summary", "3. Summary"],
  ];
  const items = steps
    .map(([key, label]) =>
      `<li class="${key === active ? "active" : ""}">${esc(label)}</li>`)
    .join("");
  return `<ol class="steps">${items}</ol>`;
}

export function renderDeploymentStep(state: WizardState): string {
  const form = state.deployment;
  const errors = deploymentErrors(form);
  const byField = new Map(errors.map((e) => [e.field, e.message]));
  const countError = byField.get("serviceCount");

  const rows = form.services
    .map((svc, i) => {
      const implOptions = IMPLEMENTATION_TYPES.map((t) => option(t, svc.implementationType)).join("");
      const bindingOptions = BINDING_TYPES.map((t) => option(t, svc.bindingType)).join("");
      const idError = byField.get(`service-${i}-id`);
      return `
        <tr>
          <td><input data-action="service-id" data-index="${i}" value="${esc(svc.id)}"
                     aria-invalid="${idError ? "true" : "false"}"></td>
          <td><select data-action="service-impl" data-index="${i}">${implOptions}</select></td>
          <td><select data-action="service-binding" data-index="${i}">${bindingOptions}</select></td>
        </tr>`;
    })
    .join("");

  return `
    ${stepHeader("deployment")}
    <section class="card" data-screen="deployment">
      <h2>Deployment time inputs</h2>
      <p class="hint">How many services will be deployed, and how is each implemented and bound?</p>
      <label>Number of services
        <input data-action="service-count" inputmode="numeric" value="${esc(form.serviceCount)}"
               aria-invalid="${countError ? "true" : "false"}">
      </label>
      ${countError ? `<p class="inline-error">${esc(countError)}</p>` : ""}
      <div class="bulk-row">
        <label>Implementation type (applied to all)
          <select data-action="bulk-impl">${IMPLEMENTATION_TYPES.map((t) => option(t, form.bulkImplementation)).join("")}</select>
        </label>
        <label>Binding type (applied to all)
          <select data-action="bulk-binding">${BINDING_TYPES.map((t) => option(t, form.bulkBinding)).join("")}</select>
        </label>
      </div>
      ${form.services.length > 0 ? `
      <table class="service-table">
        <thead><tr><th>id</th><th>implementation</th><th>binding</th></tr></thead>
        <tbody>${rows}</tbody>
      </table>` : `<p class="hint">No services yet; the sizing result will be empty.</p>`}
      ${errorList(errors.filter((e) => e.field !== "serviceCount").map((e) => e.message))}
      <div class="nav-row">
        <span></span>
        <button data-action="next" ${errors.length > 0 ? "disabled" : ""}>Next</button>
      </div>
    </section>`;
}

export function renderRuntimeStep(state: WizardState): string {
  const form = state.runtime;
  const errors = runtimeErrors(form);
  const byField = new Map(errors.map((e) => [e.field, e.message]));

  const numberField = (
    action: string,
    label: string,
    value: string,
    field: string,
  ): string => `
    <label>${esc(label)}
      <input data-action="${action}" value="${esc(value)}" ${form.skipped ? "disabled" : ""}
             aria-invalid="${byField.get(field) ? "true" : "false"}">
    </label>
    ${byField.get(field) ? `<p class="inline-error">${esc(byField.get(field))}</p>` : ""}`;

  return `
    ${stepHeader("runtime")}
    <section class="card" data-screen="runtime">
      <h2>Runtime inputs</h2>
      <p class="hint">Describe the workload, or skip for a deployment-only sizing.</p>
      <label class="skip-row">
        <input type="checkbox" data-action="skip-runtime" ${form.skipped ? "checked" : ""}>
        Skip runtime inputs (deployment-level sizing)
      </label>
      <div class="runtime-fields ${form.skipped ? "disabled" : ""}">
        <label>Workload type
          <select data-action="workload-type" ${form.skipped ? "disabled" : ""}>
            ${option("steady", form.workloadType)}${option("burst", form.workloadType)}
          </select>
        </label>
        ${numberField("concurrency", "Concurrent users", form.concurrency, "concurrency")}
        ${numberField("throughput", "Throughput (requests/second)", form.throughput, "throughput")}
        ${numberField("payload-request", "Request payload (KB)", form.payloadRequestKb, "payloadRequestKb")}
        ${numberField("payload-response", "Response payload (KB)", form.payloadResponseKb, "payloadResponseKb")}
      </div>
      <fieldset class="arch-row">
        <legend>Architecture</legend>
        <label><input type="radio" name="architecture" data-action="architecture" value="single"
                      ${form.architecture === "single" ? "checked" : ""}> Single</label>
        <label><input type="radio" name="architecture" data-action="architecture" value="distributed"
                      ${form.architecture === "distributed" ? "checked" : ""}> Distributed</label>
      </fieldset>
      <div class="nav-row">
        <button data-action="back">Back</button>
        <button data-action="next" ${errors.length > 0 ? "disabled" : ""}>Next</button>
      </div>
    </section>`;
}

export function renderSummary(state: WizardState): string {
  const dep = state.deployment;
  const run = state.runtime;

  const editLink = (owner: "deployment" | "runtime", label: string): string =>
    `<a href="#" data-action="edit-field" data-owner="${owner}" class="edit-link">${esc(label)}</a>`;

  const serviceRows = dep.services
    .map((s) => `<tr><td>${esc(s.id)}</td><td>${esc(s.implementationType)}</td><td>${esc(s.bindingType)}</td></tr>`)
    .join("");

  const runtimeRows = run.skipped
    ? `<tr><td>runtime inputs</td><td>skipped (deployment-level sizing)</td><td>${editLink("runtime", "edit")}</td></tr>`
    : `
      <tr><td>workload type</td><td data-field="workload-type">${esc(run.workloadType)}</td><td>${editLink("runtime", "edit")}</td></tr>
      <tr><td>concurrent users</td><td data-field="concurrency">${esc(run.concurrency)}</td><td>${editLink("runtime", "edit")}</td></tr>
      <tr><td>throughput (req/s)</td><td data-field="throughput">${esc(run.throughput)}</td><td>${editLink("runtime", "edit")}</td></tr>
      <tr><td>request payload (KB)</td><td data-field="payload-request">${esc(run.payloadRequestKb)}</td><td>${editLink("runtime", "edit")}</td></tr>
      <tr><td>response payload (KB)</td><td data-field="payload-response">${esc(run.payloadResponseKb)}</td><td>${editLink("runtime", "edit")}</td></tr>`;

  return `
    ${stepHeader("summary")}
    <section class="card" data-screen="summary">
      <h2>Summary</h2>
      <p class="hint">Check the collected inputs; any value links back to its step.</p>
      <table class="summary-table">
        <tbody>
          <tr><td>number of services</td><td data-field="service-count">${esc(String(dep.services.length))}</td><td>${editLink("deployment", "edit")}</td></tr>
          ${runtimeRows}
          <tr><td>architecture</td><td data-field="architecture">${esc(run.architecture)}</td><td>${editLink("runtime", "edit")}</td></tr>
          <tr><td>sizing level</td><td data-field="level">${run.skipped ? "deployment" : "runtime"}</td><td>${editLink("runtime", "edit")}</td></tr>
        </tbody>
      </table>
      ${dep.services.length > 0 ? `
      <h3>Services</h3>
      <table class="service-table">
        <thead><tr><th>id</th><th>implementation</th><th>binding</th></tr></thead>
        <tbody>${serviceRows}</tbody>
      </table>
      <p>${editLink("deployment", "edit services")}</p>` : ""}
      ${state.submitErrors && state.submitErrors.length > 0 ? `
      <div class="banner banner-error">
        <p>The server rejected the request:</p>
        <ul class="field-errors">
          ${state.submitErrors.map((e) =>
            `<li>${e.path ? `<code>${esc(e.path)}</code>: ` : ""}${esc(e.message)}</li>`).join("")}
        </ul>
      </div>` : ""}
      <div class="nav-row">
        <button data-action="back">Back</button>
        <button data-action="confirm">Confirm and size</button>
      </div>
    </section>`;
}
