// Presentation order for tier tabs and the infrastructure view. Uses
// only fields already present in the fetched result (machine counts and
// the echoed tier table); mirrors the ordering the server applies when
// it picks the tier for the infrastructure diagram.

import type { SizingResult } from "./types.js";

function capacityUnits(result: SizingResult, name: string): number {
  const tier = result.request_echo.tiers.find((t) => t.name === name);
  if (!tier) return Number.POSITIVE_INFINITY;
  return tier.processors * tier.cores_per_processor * tier.frequency_ghz;
}

/** Feasible tiers, best (least deployed capacity) first. */
export function rankTiers(result: SizingResult): string[] {
  const order = result.request_echo.tiers.map((t) => t.name);
  const feasible = order.filter((name) => name in result.per_tier);
  return feasible.sort((a, b) => {
    const machinesA = result.per_tier[a].machines.length;
    const machinesB = result.per_tier[b].machines.length;
    const deployedA = machinesA * capacityUnits(result, a);
    const deployedB = machinesB * capacityUnits(result, b);
    if (deployedA !== deployedB) return deployedA - deployedB;
    if (machinesA !== machinesB) return machinesA - machinesB;
    return order.indexOf(a) - order.indexOf(b);
  });
}
