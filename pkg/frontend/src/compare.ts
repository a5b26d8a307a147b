/** Scenario comparison.  Rows are aligned by individual id across the two
 * snapshots; an id that only exists in the newer scenario is flagged as new
 * rather than being given a made-up change.  Numbers are the server's stored
 * carrier probabilities — nothing is recomputed here. */

import { Scenario } from "./state.js";

export interface CompareRow {
  id: string;
  before: number | null;
  after: number | null;
  delta: number | null;
  isNew: boolean;
}

export function compareScenarios(base: Scenario, other: Scenario): CompareRow[] {
  const baseIds = new Set(base.pedigree.individuals.map((ind) => ind.id));
  const order: string[] = other.pedigree.individuals.map((ind) => ind.id);
  for (const ind of base.pedigree.individuals) {
    if (!order.includes(ind.id)) order.push(ind.id);
  }
  return order.map((id) => {
    const before = base.carrier !== null && id in base.carrier ? base.carrier[id] : null;
    const after = other.carrier !== null && id in other.carrier ? other.carrier[id] : null;
    return {
      id,
      before,
      after,
      delta: before !== null && after !== null ? after - before : null,
      isNew: !baseIds.has(id),
    };
  });
}
