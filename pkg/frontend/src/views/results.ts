// Results screen: tabs per tier with topology and curve, the
// infrastructure view for the top-ranked tier, recommendation banners,
// and report downloads. Render-only: every value comes from the result.

import { rankTiers } from "../ranking.js";
import type { WizardState } from "../state.js";
import type { SizingResult } from "../types.js";
import { renderCurveSvg } from "./curve.js";
import { esc } from "./html.js";
import { renderTopology } from "./topology.js";

function banners(result: SizingResult): string {
  const recs = result.recommendations
    .map((r) => `<div class="banner banner-rec">${esc(r.message)}</div>`)
    .join("");
  const warns = result.warnings
    .map((w) => `<div class="banner banner-warn">${esc(w.message)}</div>`)
    .join("");
  return recs + warns;
}

function downloadLinks(result: SizingResult, tier: string | null): string {
  const base = `/api/v1/runs/${encodeURIComponent(result.run_id)}/report`;
  const links = [
    `<a href="${esc(`${base}?format=markdown`)}" download>summary report (.md)</a>`,
    `<a href="${esc(`${base}?format=dot`)}" download>infrastructure (.dot)</a>`,
  ];
  if (tier !== null && tier in result.per_tier) {
    const url = `${base}?format=dot&tier=${encodeURIComponent(tier)}`;
    links.push(`<a href="${esc(url)}" download>topology ${esc(tier)} (.dot)</a>`);
  }
  if (tier !== null && tier in result.curves) {
    const url = `${base}?format=csv&tier=${encodeURIComponent(tier)}`;
    links.push(`<a href="${esc(url)}" download>curve ${esc(tier)} (.csv)</a>`);
  }
  return `<div class="downloads">${links.join(" ")}</div>`;
}

function infrastructureView(result: SizingResult): string {
  const ranking = rankTiers(result);
  if (ranking.length === 0) return "";
  const top = ranking[0];
  const topology = result.per_tier[top];
  const machines = topology.machines
    .map((m) => {
      const hosts = m.hosts
        .map((h) => `<div class="infra-host">${esc(h.id)} (${h.nodes.length} node${h.nodes.length === 1 ? "" : "s"})</div>`)
        .join("");
      return `<div class="infra-machine" data-machine="${m.index}">
        <div class="infra-box">machine ${m.index}</div>${hosts}</div>`;
    })
    .join("");
  return `
    <section class="card" data-panel="infrastructure">
      <h3>Infrastructure (recommended: ${esc(top)})</h3>
      <div class="infra">
        <div class="infra-box infra-lb">load balancer</div>
        <div class="infra-machines">${machines}</div>
        <div class="infra-box infra-mon">management &amp; monitoring</div>
      </div>
    </section>`;
}

export function renderResults(state: WizardState): string {
  const result = state.result;
  if (result === null) {
    return `<section class="card"><p class="hint">No result yet.</p></section>`;
  }
  if (result.request_echo.services.length === 0) {
    return `
      <section class="card" data-screen="results">
        <h2>Sizing result</h2>
        ${banners(result)}
        <p class="placeholder">No services were requested, so there is nothing to deploy.</p>
        ${downloadLinks(result, null)}
        <div class="nav-row"><button data-action="start-over">Start over</button><span></span></div>
      </section>`;
  }

  const tierOrder = result.request_echo.tiers.map((t) => t.name);
  const active = state.activeTier ?? tierOrder[0];
  const tabs = tierOrder
    .map((name) => {
      const feasible = name in result.per_tier;
      const classes = ["tab", name === active ? "active" : "", feasible ? "" : "errored"]
        .filter(Boolean)
        .join(" ");
      const count = feasible ? `${result.per_tier[name].machines.length}` : "!";
      return `<button class="${classes}" data-action="select-tier" data-tier="${esc(name)}">
        ${esc(name)} <span class="count">${esc(count)}</span></button>`;
    })
    .join("");

  let panel: string;
  if (active in result.per_tier) {
    const topology = result.per_tier[active];
    const curve = result.curves[active];
    const machineWord = topology.machines.length === 1 ? "machine" : "machines";
    panel = `
      <div data-panel="tier" data-tier="${esc(active)}">
        <p class="machine-count" data-machine-count="${topology.machines.length}">
          ${topology.machines.length} ${machineWord}</p>
        ${renderTopology(topology)}
        ${curve ? renderCurveSvg(curve, result.request_echo.packer.cpu_cap_pct) : ""}
      </div>`;
  } else {
    const err = result.per_tier_errors[active];
    panel = `
      <div data-panel="tier-error" data-tier="${esc(active)}">
        <div class="banner banner-error">${esc(err ? err.message : "not sized")}</div>
      </div>`;
  }

  return `
    <section class="card" data-screen="results">
      <h2>Sizing result</h2>
      <p class="hint">run ${esc(result.run_id)}${result.created_at ? ` &middot; ${esc(result.created_at)}` : ""}</p>
      ${banners(result)}
      <div class="tabs">${tabs}</div>
      ${panel}
      ${infrastructureView(result)}
      ${downloadLinks(result, active)}
      <div class="nav-row"><button data-action="start-over">Start over</button><span></span></div>
    </section>`;
}
