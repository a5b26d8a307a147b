import { describe, expect, it } from "vitest";
import {
  addIndividual,
  dispositionAfterEdit,
  emptyPedigree,
  removeIndividual,
  setConstraint,
  setPhenotype,
  setTest,
  snapshotScenario,
  validatePedigree,
} from "../src/state.js";
import { AnalyzeResponse, PedigreeDoc } from "../src/types.js";

function trio(): PedigreeDoc {
  let ped = emptyPedigree();
  ped = addIndividual(ped, { id: "dad", sex: "M" });
  ped = addIndividual(ped, { id: "mum", sex: "F" });
  ped = addIndividual(ped, { id: "kid", father: "dad", mother: "mum" });
  return ped;
}

describe("edit operations", () => {
  it("adds individuals with safe defaults", () => {
    const ped = addIndividual(emptyPedigree(), { id: "a" });
    expect(ped.individuals).toEqual([
      { id: "a", sex: "U", father: null, mother: null, phenotype: null, twin_group: null },
    ]);
  });

  it("never mutates the input document", () => {
    const ped = trio();
    const before = JSON.stringify(ped);
    setPhenotype(ped, "kid", { kind: "affected", age: 40 });
    setConstraint(ped, "kid", ["11"]);
    setTest(ped, "kid", { result: "positive", sensitivity: 0.9, specificity: 0.99 });
    removeIndividual(ped, "dad");
    expect(JSON.stringify(ped)).toBe(before);
  });

  it("removing a parent turns the children into founders on that side", () => {
    let ped = trio();
    ped = setTest(ped, "dad", { result: "positive", sensitivity: 0.9, specificity: 0.99 });
    ped = removeIndividual(ped, "dad");
    const kid = ped.individuals.find((i) => i.id === "kid")!;
    expect(kid.father).toBeNull();
    expect(kid.mother).toBe("mum");
    expect(ped.tests).toBeUndefined(); // the removed individual's test goes too
  });

  it("stores constraints sorted and drops the no-op full set", () => {
    let ped = trio();
    ped = setConstraint(ped, "kid", ["11", "01"]);
    expect(ped.individuals[2].genotypes).toEqual(["01", "11"]);
    ped = setConstraint(ped, "kid", ["10", "00", "11", "01"]);
    expect(ped.individuals[2].genotypes).toBeUndefined();
    ped = setConstraint(setConstraint(ped, "kid", ["11"]), "kid", null);
    expect(ped.individuals[2].genotypes).toBeUndefined();
  });

  it("keeps one test per individual and clears it with null", () => {
    let ped = trio();
    ped = setTest(ped, "kid", { result: "positive", sensitivity: 0.9, specificity: 0.99 });
    ped = setTest(ped, "kid", { result: "negative", sensitivity: 0.8, specificity: 0.95 });
    expect(ped.tests).toHaveLength(1);
    expect(ped.tests![0].result).toBe("negative");
    ped = setTest(ped, "kid", null);
    expect(ped.tests).toBeUndefined();
  });

  it("sets and clears phenotypes", () => {
    let ped = trio();
    ped = setPhenotype(ped, "mum", { kind: "unaffected", age: 70 });
    expect(ped.individuals[1].phenotype).toEqual({ kind: "unaffected", age: 70 });
    ped = setPhenotype(ped, "mum", null);
    expect(ped.individuals[1].phenotype).toBeNull();
  });
});

describe("validatePedigree", () => {
  it("accepts a well-formed family", () => {
    expect(validatePedigree(trio())).toEqual([]);
  });

  it.each([
    [
      "duplicate id",
      (p: PedigreeDoc) => addIndividual(p, { id: "dad" }),
      "individuals[3].id",
    ],
    [
      "single parent",
      (p: PedigreeDoc) => addIndividual(p, { id: "x", father: "dad" }),
      "individuals[3].father",
    ],
    [
      "unknown mother",
      (p: PedigreeDoc) => addIndividual(p, { id: "x", father: "dad", mother: "ghost" }),
      "individuals[3].mother",
    ],
  ])("flags %s at the offending field", (_name, edit, field) => {
    const issues = validatePedigree(edit(trio()));
    expect(issues.map((i) => i.field)).toContain(field);
  });

  it("flags a negative phenotype age", () => {
    const ped = setPhenotype(trio(), "kid", { kind: "affected", age: -3 });
    expect(validatePedigree(ped).map((i) => i.field)).toContain("individuals[2].phenotype.age");
  });

  it("flags an empty genotype constraint", () => {
    const ped = trio();
    ped.individuals[0] = { ...ped.individuals[0], genotypes: [] };
    expect(validatePedigree(ped).map((i) => i.field)).toContain("individuals[0].genotypes");
  });

  it("flags tests pointing at nobody and rates outside (0, 1]", () => {
    let ped = trio();
    ped = setTest(ped, "kid", { result: "positive", sensitivity: 0, specificity: 1.2 });
    ped = { ...ped, tests: [...ped.tests!, { id: "ghost", result: "negative", sensitivity: 0.9, specificity: 0.9 }] };
    const fields = validatePedigree(ped).map((i) => i.field);
    expect(fields).toContain("tests[0].sensitivity");
    expect(fields).toContain("tests[0].specificity");
    expect(fields).toContain("tests[1].id");
  });

  it("flags ancestry cycles", () => {
    const ped: PedigreeDoc = {
      individuals: [
        { id: "a", sex: "M", father: "c", mother: "b", phenotype: null, twin_group: null },
        { id: "b", sex: "F", father: null, mother: null, phenotype: null, twin_group: null },
        { id: "c", sex: "M", father: "a", mother: "b", phenotype: null, twin_group: null },
      ],
    };
    expect(validatePedigree(ped).map((i) => i.field)).toContain("individuals");
  });
});

describe("dispositionAfterEdit", () => {
  it("clears instead of querying when the pedigree is empty", () => {
    expect(dispositionAfterEdit(emptyPedigree())).toEqual({ action: "clear" });
  });

  it("rejects locally invalid pedigrees without a server round-trip", () => {
    const bad = addIndividual(trio(), { id: "x", father: "dad" });
    const disposition = dispositionAfterEdit(bad);
    expect(disposition.action).toBe("reject");
    if (disposition.action === "reject") {
      expect(disposition.issues.length).toBeGreaterThan(0);
    }
  });

  it("analyzes anything valid", () => {
    expect(dispositionAfterEdit(trio())).toEqual({ action: "analyze" });
  });
});

describe("snapshotScenario", () => {
  const response: AnalyzeResponse = {
    log_evidence: -1.5,
    tree_stats: { variables: 3, cliques: 2, treewidth: 3, table_cost: 64 },
    warnings: [],
    carrier_probability: { dad: 0.25, mum: 0.5, kid: 0.75 },
  };

  it("captures the server's numbers and the pedigree by value", () => {
    const ped = trio();
    const snap = snapshotScenario("base", ped, response);
    expect(snap.carrier).toEqual({ dad: 0.25, mum: 0.5, kid: 0.75 });
    response.carrier_probability!.dad = 0.99;
    expect(snap.carrier!.dad).toBe(0.25);
  });

  it("is immutable once taken", () => {
    const snap = snapshotScenario("base", trio(), response);
    expect(Object.isFrozen(snap)).toBe(true);
    expect(Object.isFrozen(snap.pedigree.individuals[0])).toBe(true);
    expect(() => {
      (snap.pedigree.individuals as unknown as unknown[]).push("intruder");
    }).toThrow();
  });

  it("records a null carrier map before the first response", () => {
    expect(snapshotScenario("early", trio(), null).carrier).toBeNull();
  });
});
