// Wizard state machine. Pure functions over an immutable state object:
// every transition returns a new state, which keeps trace-back editing
// ("jump to the owning step, everything else preserved") trivially true
// and the whole flow testable without a DOM.
//
// Form fields are kept as raw input strings and only parsed when the
// request is built; validation mirrors the server's rules so the user
// sees problems before submitting.

import type {
  Architecture,
  RuntimeProfile,
  ServiceSpec,
  SizingRequestBody,
  SizingResult,
  WorkloadType,
} from "./types.js";

export const IMPLEMENTATION_TYPES = ["java", "mediation", "webapp"] as const;
export const BINDING_TYPES = ["soap_http", "jms", "rest"] as const;
export const MAX_IDENTIFIER_LEN = 64;

export type Screen = "deployment" | "runtime" | "summary" | "results";

export interface ServiceDraft {
  id: string;
  implementationType: string;
  bindingType: string;
}

export interface DeploymentForm {
  serviceCount: string;
  bulkImplementation: string;
  bulkBinding: string;
  services: ServiceDraft[];
}

export interface RuntimeForm {
  skipped: boolean;
  workloadType: WorkloadType;
  concurrency: string;
  throughput: string;
  payloadRequestKb: string;
  payloadResponseKb: string;
  architecture: Architecture;
}

export interface SubmitError {
  message: string;
  /** canonical request path naming the originating field, when known */
  path?: string;
}

export interface WizardState {
  screen: Screen;
  deployment: DeploymentForm;
  runtime: RuntimeForm;
  result: SizingResult | null;
  activeTier: string | null;
  submitErrors: SubmitError[] | null;
}

export function initialState(): WizardState {
  return {
    screen: "deployment",
    deployment: {
      serviceCount: "1",
      bulkImplementation: "java",
      bulkBinding: "soap_http",
      services: [{ id: "svc-01", implementationType: "java", bindingType: "soap_http" }],
    },
    runtime: {
      skipped: false,
      workloadType: "steady",
      concurrency: "0",
      throughput: "0",
      payloadRequestKb: "0",
      payloadResponseKb: "0",
      architecture: "distributed",
    },
    result: null,
    activeTier: null,
    submitErrors: null,
  };
}

function defaultServiceId(index: number): string {
  return `svc-${String(index + 1).padStart(2, "0")}`;
}

function expandServices(form: DeploymentForm, count: number): ServiceDraft[] {
  const services: ServiceDraft[] = [];
  for (let i = 0; i < count; i++) {
    services.push(
      form.services[i] ?? {
        id: defaultServiceId(i),
        implementationType: form.bulkImplementation,
        bindingType: form.bulkBinding,
      },
    );
  }
  return services;
}

// ---------------------------------------------------------------------------
// Transitions
// ---------------------------------------------------------------------------

export function setServiceCount(state: WizardState, raw: string): WizardState {
  const count = parseCount(raw);
  const deployment = {
    ...state.deployment,
    serviceCount: raw,
    services: count === null ? state.deployment.services : expandServices(state.deployment, count),
  };
  return { ...state, deployment };
}

export function setBulkType(
  state: WizardState,
  which: "implementation" | "binding",
  value: string,
): WizardState {
  const deployment = { ...state.deployment };
  if (which === "implementation") {
    deployment.bulkImplementation = value;
    deployment.services = deployment.services.map((s) => ({ ...s, implementationType: value }));
  } else {
    deployment.bulkBinding = value;
    deployment.services = deployment.services.map((s) => ({ ...s, bindingType: value }));
  }
  return { ...state, deployment };
}

export function setServiceField(
  state: WizardState,
  index: number,
  field: keyof ServiceDraft,
  value: string,
): WizardState {
  const services = state.deployment.services.map((s, i) =>
    i === index ? { ...s, [field]: value } : s,
  );
  return { ...state, deployment: { ...state.deployment, services } };
}

export function setRuntimeField(
  state: WizardState,
  field: "workloadType" | "concurrency" | "throughput" | "payloadRequestKb" | "payloadResponseKb",
  value: string,
): WizardState {
  const runtime = { ...state.runtime, [field]: value } as RuntimeForm;
  return { ...state, runtime };
}

export function setRuntimeSkipped(state: WizardState, skipped: boolean): WizardState {
  return { ...state, runtime: { ...state.runtime, skipped } };
}

export function setArchitecture(state: WizardState, architecture: Architecture): WizardState {
  return { ...state, runtime: { ...state.runtime, architecture } };
}

export function goNext(state: WizardState): WizardState {
  if (state.screen === "deployment" && deploymentErrors(state.deployment).length === 0) {
    return { ...state, screen: "runtime" };
  }
  if (state.screen === "runtime" && runtimeErrors(state.runtime).length === 0) {
    return { ...state, screen: "summary" };
  }
  return state;
}

export function goBack(state: WizardState): WizardState {
  if (state.screen === "runtime") return { ...state, screen: "deployment" };
  if (state.screen === "summary") return { ...state, screen: "runtime" };
  return state;
}

/** Trace-back from the summary: jump to the step that owns a field,
 *  leaving every other part of the state untouched. */
export function editField(state: WizardState, owner: "deployment" | "runtime"): WizardState {
  return { ...state, screen: owner };
}

export function showResults(state: WizardState, result: SizingResult): WizardState {
  const feasible = Object.keys(result.per_tier);
  const first = feasible.length > 0 ? feasible[0] : Object.keys(result.per_tier_errors)[0] ?? null;
  return { ...state, screen: "results", result, activeTier: first, submitErrors: null };
}

export function setActiveTier(state: WizardState, tier: string): WizardState {
  return { ...state, activeTier: tier };
}

export function setSubmitErrors(state: WizardState, errors: SubmitError[]): WizardState {
  return { ...state, submitErrors: errors };
}

export function startOver(state: WizardState): WizardState {
  return { ...initialState(), deployment: state.deployment, runtime: state.runtime };
}

// ---------------------------------------------------------------------------
// Validation (mirrors the server's request rules)
// ---------------------------------------------------------------------------

export interface FieldError {
  field: string;
  message: string;
}

function parseCount(raw: string): number | null {
  if (!/^\d+$/.test(raw.trim())) return null;
  return parseInt(raw.trim(), 10);
}

function isNonNegativeNumber(raw: string): boolean {
  if (raw.trim() === "") return false;
  const value = Number(raw);
  return Number.isFinite(value) && value >= 0;
}

function isNonNegativeInteger(raw: string): boolean {
  return /^\d+$/.test(raw.trim());
}

export function deploymentErrors(form: DeploymentForm): FieldError[] {
  const errors: FieldError[] = [];
  const count = parseCount(form.serviceCount);
  if (count === null) {
    errors.push({ field: "serviceCount", message: "service count must be a whole number of 0 or more" });
  }
  const seen = new Set<string>();
  form.services.forEach((svc, i) => {
    if (!svc.id || svc.id.length > MAX_IDENTIFIER_LEN) {
      errors.push({ field: `service-${i}-id`, message: `service ${i + 1}: id must be 1-${MAX_IDENTIFIER_LEN} characters` });
    } else if (seen.has(svc.id)) {
      errors.push({ field: `service-${i}-id`, message: `service ${i + 1}: duplicate id "${svc.id}"` });
    }
    seen.add(svc.id);
    if (!(IMPLEMENTATION_TYPES as readonly string[]).includes(svc.implementationType)) {
      errors.push({ field: `service-${i}-impl`, message: `service ${i + 1}: unknown implementation type` });
    }
    if (!(BINDING_TYPES as readonly string[]).includes(svc.bindingType)) {
      errors.push({ field: `service-${i}-binding`, message: `service ${i + 1}: unknown binding type` });
    }
  });
  return errors;
}

export function runtimeErrors(form: RuntimeForm): FieldError[] {
  if (form.skipped) return [];
  const errors: FieldError[] = [];
  if (!isNonNegativeInteger(form.concurrency)) {
    errors.push({ field: "concurrency", message: "concurrency must be a whole number of 0 or more" });
  }
  for (const [field, label] of [
    ["throughput", "throughput"],
    ["payloadRequestKb", "request payload"],
    ["payloadResponseKb", "response payload"],
  ] as const) {
    if (!isNonNegativeNumber(form[field])) {
      errors.push({ field, message: `${label} must be a number of 0 or more` });
    }
  }
  return errors;
}

export function canProceed(state: WizardState): boolean {
  if (state.screen === "deployment") return deploymentErrors(state.deployment).length === 0;
  if (state.screen === "runtime") return runtimeErrors(state.runtime).length === 0;
  return true;
}

// ---------------------------------------------------------------------------
// Request building
// ---------------------------------------------------------------------------

export function buildProfile(form: RuntimeForm): RuntimeProfile {
  return {
    workload_type: form.workloadType,
    concurrency: parseInt(form.concurrency, 10),
    throughput: Number(form.throughput),
    payload_request_kb: Number(form.payloadRequestKb),
    payload_response_kb: Number(form.payloadResponseKb),
  };
}

/** The JSON the wizard submits; validates against the same schema the
 *  batch CLI consumes. Skipping the runtime step yields a
 *  deployment-level request with no profile. */
export function buildRequest(state: WizardState): SizingRequestBody {
  const services: ServiceSpec[] = state.deployment.services.map((s) => ({
    id: s.id,
    implementation_type: s.implementationType,
    binding_type: s.bindingType,
    profile: null,
  }));
  if (state.runtime.skipped) {
    return { services, architecture: state.runtime.architecture, level: "deployment" };
  }
  return {
    services,
    architecture: state.runtime.architecture,
    level: "runtime",
    default_profile: buildProfile(state.runtime),
  };
}
