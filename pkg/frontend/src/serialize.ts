/** Lossless pedigree export/import in the service's JSON schema.  Import is
 * as strict as the server: unknown keys anywhere are an error, so a file that
 * loads here will not be rejected later by the API. */

import { GENOTYPES, Genotype, IndividualDoc, PedigreeDoc, TestDoc } from "./types.js";

export function exportPedigree(ped: PedigreeDoc): string {
  const individuals = ped.individuals.map((ind) => {
    const entry: IndividualDoc = {
      id: ind.id,
      sex: ind.sex,
      father: ind.father,
      mother: ind.mother,
      phenotype: ind.phenotype ? { kind: ind.phenotype.kind, age: ind.phenotype.age } : null,
      twin_group: ind.twin_group,
    };
    if (ind.genotypes !== undefined) entry.genotypes = [...ind.genotypes].sort();
    return entry;
  });
  const doc: PedigreeDoc = { individuals };
  if (ped.tests && ped.tests.length > 0) {
    doc.tests = ped.tests.map((t) => ({
      id: t.id,
      result: t.result,
      sensitivity: t.sensitivity,
      specificity: t.specificity,
    }));
  }
  return JSON.stringify(doc, null, 2) + "\n";
}

export class PedigreeImportError extends Error {}

function fail(message: string): never {
  throw new PedigreeImportError(message);
}

function record(value: unknown, where: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(`${where} must be an object`);
  }
  return value as Record<string, unknown>;
}

function onlyKeys(doc: Record<string, unknown>, allowed: string[], where: string): void {
  for (const key of Object.keys(doc)) {
    if (!allowed.includes(key)) fail(`unknown key "${key}" in ${where}`);
  }
}

function str(value: unknown, where: string): string {
  if (typeof value !== "string") fail(`${where} must be a string`);
  return value;
}

function strOrNull(value: unknown, where: string): string | null {
  if (value === null || value === undefined) return null;
  return str(value, where);
}

function num(value: unknown, where: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) fail(`${where} must be a number`);
  return value;
}

function oneOf<T extends string>(value: unknown, options: readonly T[], where: string): T {
  const text = str(value, where);
  if (!(options as readonly string[]).includes(text)) {
    fail(`${where} must be one of ${options.join("|")}`);
  }
  return text as T;
}

export function importPedigree(text: string): PedigreeDoc {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (err) {
    fail(`not valid JSON: ${(err as Error).message}`);
  }
  const doc = record(parsed, "pedigree");
  onlyKeys(doc, ["individuals", "tests"], "pedigree");
  if (!Array.isArray(doc.individuals)) fail("individuals must be a list");

  const individuals = doc.individuals.map((raw, k): IndividualDoc => {
    const where = `individuals[${k}]`;
    const entry = record(raw, where);
    onlyKeys(entry, ["id", "sex", "father", "mother", "phenotype", "genotypes", "twin_group"], where);
    const ind: IndividualDoc = {
      id: str(entry.id, `${where}.id`),
      sex: entry.sex === undefined ? "U" : oneOf(entry.sex, ["M", "F", "U"] as const, `${where}.sex`),
      father: strOrNull(entry.father, `${where}.father`),
      mother: strOrNull(entry.mother, `${where}.mother`),
      phenotype: null,
      twin_group: strOrNull(entry.twin_group, `${where}.twin_group`),
    };
    if (entry.phenotype !== null && entry.phenotype !== undefined) {
      const ph = record(entry.phenotype, `${where}.phenotype`);
      onlyKeys(ph, ["kind", "age"], `${where}.phenotype`);
      ind.phenotype = {
        kind: oneOf(ph.kind, ["affected", "unaffected"] as const, `${where}.phenotype.kind`),
        age: num(ph.age, `${where}.phenotype.age`),
      };
    }
    if (entry.genotypes !== undefined) {
      if (!Array.isArray(entry.genotypes)) fail(`${where}.genotypes must be a list`);
      ind.genotypes = entry.genotypes
        .map((g, j) => oneOf(g, GENOTYPES as readonly Genotype[], `${where}.genotypes[${j}]`))
        .sort();
    }
    return ind;
  });

  const out: PedigreeDoc = { individuals };
  if (doc.tests !== undefined) {
    if (!Array.isArray(doc.tests)) fail("tests must be a list");
    out.tests = doc.tests.map((raw, k): TestDoc => {
      const where = `tests[${k}]`;
      const entry = record(raw, where);
      onlyKeys(entry, ["id", "result", "sensitivity", "specificity"], where);
      return {
        id: str(entry.id, `${where}.id`),
        result: oneOf(entry.result, ["positive", "negative"] as const, `${where}.result`),
        sensitivity: num(entry.sensitivity, `${where}.sensitivity`),
        specificity: num(entry.specificity, `${where}.specificity`),
      };
    });
    if (out.tests.length === 0) delete out.tests;
  }
  return out;
}
