/** Client-side pedigree editing: every operation returns a fresh document and
 * keeps it schema-valid, or the validator flags the offending field so the
 * editor can mark it inline.  Scenario snapshots are deep-frozen so a named
 * what-if state can never drift after it is taken. */

import {
  AnalyzeResponse,
  GENOTYPES,
  Genotype,
  IndividualDoc,
  PedigreeDoc,
  PhenotypeDoc,
  Sex,
  TestDoc,
} from "./types.js";

export interface ValidationIssue {
  field: string;
  message: string;
}

export interface Scenario {
  readonly name: string;
  readonly pedigree: PedigreeDoc;
  /** Server numbers captured with the snapshot; null before the first response. */
  readonly carrier: Readonly<Record<string, number>> | null;
}

export function emptyPedigree(): PedigreeDoc {
  return { individuals: [] };
}

function cloneDoc<T>(doc: T): T {
  return JSON.parse(JSON.stringify(doc)) as T;
}

function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === "object") {
    for (const child of Object.values(value as object)) deepFreeze(child);
    Object.freeze(value);
  }
  return value;
}

function byId(ped: PedigreeDoc, id: string): IndividualDoc | undefined {
  return ped.individuals.find((ind) => ind.id === id);
}

export function addIndividual(
  ped: PedigreeDoc,
  ind: { id: string; sex?: Sex; father?: string | null; mother?: string | null },
): PedigreeDoc {
  const next = cloneDoc(ped);
  next.individuals.push({
    id: ind.id,
    sex: ind.sex ?? "U",
    father: ind.father ?? null,
    mother: ind.mother ?? null,
    phenotype: null,
    twin_group: null,
  });
  return next;
}

/** Children of a removed parent become founders on that side; their tests go too. */
export function removeIndividual(ped: PedigreeDoc, id: string): PedigreeDoc {
  const next = cloneDoc(ped);
  next.individuals = next.individuals.filter((ind) => ind.id !== id);
  for (const ind of next.individuals) {
    if (ind.father === id) ind.father = null;
    if (ind.mother === id) ind.mother = null;
  }
  if (next.tests) {
    next.tests = next.tests.filter((t) => t.id !== id);
    if (next.tests.length === 0) delete next.tests;
  }
  return next;
}

export function setPhenotype(
  ped: PedigreeDoc,
  id: string,
  phenotype: PhenotypeDoc | null,
): PedigreeDoc {
  const next = cloneDoc(ped);
  const ind = byId(next, id);
  if (ind) ind.phenotype = phenotype ? { ...phenotype } : null;
  return next;
}

/** The full genotype set is the no-constraint state and is not serialized. */
export function setConstraint(
  ped: PedigreeDoc,
  id: string,
  genotypes: Genotype[] | null,
): PedigreeDoc {
  const next = cloneDoc(ped);
  const ind = byId(next, id);
  if (!ind) return next;
  if (genotypes === null || genotypes.length === GENOTYPES.length) {
    delete ind.genotypes;
  } else {
    ind.genotypes = [...genotypes].sort();
  }
  return next;
}

/** One test per individual in the editor; null clears it. */
export function setTest(ped: PedigreeDoc, id: string, test: Omit<TestDoc, "id"> | null): PedigreeDoc {
  const next = cloneDoc(ped);
  const kept = (next.tests ?? []).filter((t) => t.id !== id);
  if (test !== null) kept.push({ id, ...test });
  if (kept.length > 0) {
    next.tests = kept;
  } else {
    delete next.tests;
  }
  return next;
}

export function validatePedigree(ped: PedigreeDoc): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  const seen = new Set<string>();
  const ids = new Set(ped.individuals.map((ind) => ind.id));

  ped.individuals.forEach((ind, k) => {
    const at = (suffix: string) => `individuals[${k}].${suffix}`;
    if (!ind.id) issues.push({ field: at("id"), message: "id must be non-empty" });
    if (seen.has(ind.id)) issues.push({ field: at("id"), message: `duplicate id "${ind.id}"` });
    seen.add(ind.id);
    if ((ind.father === null) !== (ind.mother === null)) {
      issues.push({ field: at("father"), message: "both parents or neither" });
    }
    for (const [key, parent] of [["father", ind.father], ["mother", ind.mother]] as const) {
      if (parent !== null && !ids.has(parent)) {
        issues.push({ field: at(key), message: `unknown ${key} "${parent}"` });
      }
      if (parent === ind.id) {
        issues.push({ field: at(key), message: "individual cannot be its own parent" });
      }
    }
    if (ind.phenotype && !(ind.phenotype.age >= 0)) {
      issues.push({ field: at("phenotype.age"), message: "age must be nonnegative" });
    }
    if (ind.genotypes !== undefined && ind.genotypes.length === 0) {
      issues.push({ field: at("genotypes"), message: "constraint cannot be empty" });
    }
  });

  (ped.tests ?? []).forEach((t, k) => {
    if (!ids.has(t.id)) {
      issues.push({ field: `tests[${k}].id`, message: `unknown individual "${t.id}"` });
    }
    for (const key of ["sensitivity", "specificity"] as const) {
      if (!(t[key] > 0 && t[key] <= 1)) {
        issues.push({ field: `tests[${k}].${key}`, message: `${key} must be in (0, 1]` });
      }
    }
  });

  if (hasAncestryCycle(ped)) {
    issues.push({ field: "individuals", message: "ancestry contains a cycle" });
  }
  return issues;
}

function hasAncestryCycle(ped: PedigreeDoc): boolean {
  const parents = new Map<string, string[]>();
  for (const ind of ped.individuals) {
    parents.set(ind.id, [ind.father, ind.mother].filter((p): p is string => p !== null));
  }
  const state = new Map<string, "visiting" | "done">();
  const visit = (id: string): boolean => {
    const mark = state.get(id);
    if (mark === "visiting") return true;
    if (mark === "done") return false;
    state.set(id, "visiting");
    for (const parent of parents.get(id) ?? []) if (visit(parent)) return true;
    state.set(id, "done");
    return false;
  };
  return ped.individuals.some((ind) => visit(ind.id));
}

export type EditDisposition =
  | { action: "clear" }
  | { action: "reject"; issues: ValidationIssue[] }
  | { action: "analyze" };

/** What the editor must do after an edit: an empty pedigree clears the
 * results and sends nothing, a locally invalid one is flagged without
 * bothering the server, anything else is analyzed. */
export function dispositionAfterEdit(ped: PedigreeDoc): EditDisposition {
  if (ped.individuals.length === 0) return { action: "clear" };
  const issues = validatePedigree(ped);
  if (issues.length > 0) return { action: "reject", issues };
  return { action: "analyze" };
}

export function snapshotScenario(
  name: string,
  pedigree: PedigreeDoc,
  response: AnalyzeResponse | null,
): Scenario {
  return deepFreeze({
    name,
    pedigree: cloneDoc(pedigree),
    carrier: response?.carrier_probability ? { ...response.carrier_probability } : null,
  });
}
