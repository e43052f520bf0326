// Topology rendered natively from the result JSON: machines containing
// hosts containing nodes containing service chips. DOT stays available
// as a download; nothing here re-computes any number.

import type { Topology } from "../types.js";
import { esc } from "./html.js";

function fmt(value: number): string {
  return Number.isInteger(value) ? `${value}.0` : String(value);
}

export function renderTopology(topology: Topology): string {
  if (topology.machines.length === 0) {
    return `<p class="hint">No machines needed.</p>`;
  }
  const machines = topology.machines
    .map((machine) => {
      const hosts = machine.hosts
        .map((host) => {
          const nodes = host.nodes
            .map((node) => {
              const chips = node.service_ids
                .map((sid) => `<span class="chip">${esc(sid)}</span>`)
                .join("");
              return `<div class="node" data-node="${esc(node.id)}">
                <span class="node-name">${esc(node.id)}</span>${chips}</div>`;
            })
            .join("");
          return `<div class="host" data-host="${esc(host.id)}">
            <h5>host ${esc(host.id)}</h5>${nodes}</div>`;
        })
        .join("");
      return `<div class="machine-card" data-machine="${machine.index}">
        <h4>${esc(topology.tier)} machine ${machine.index}</h4>
        <p class="totals">${esc(fmt(machine.total_cpu_pct))}% CPU &middot;
           ${esc(fmt(machine.total_memory_mb))} MB</p>
        ${hosts}</div>`;
    })
    .join("");
  return `<div class="topology">${machines}</div>`;
}
