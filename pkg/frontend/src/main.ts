/** DOM wiring.  All decisions live in the pure modules (state, serialize,
 * api, layout, compare, render); this file only moves strings between them
 * and the page.  Probabilities on screen always come from the server. */

import { AnalyzeOutcome, AnalyzeScheduler, SchedulerView } from "./api.js";
import { compareScenarios } from "./compare.js";
import { layoutPedigree } from "./layout.js";
import {
  renderBanner,
  renderDeltaBars,
  renderPedigreeSvg,
  renderPosteriorBars,
  renderRiskChart,
} from "./render.js";
import { exportPedigree, importPedigree, PedigreeImportError } from "./serialize.js";
import {
  addIndividual,
  dispositionAfterEdit,
  emptyPedigree,
  removeIndividual,
  Scenario,
  setConstraint,
  setPhenotype,
  setTest,
  snapshotScenario,
} from "./state.js";
import { AnalyzeRequest, AnalyzeResponse, GENOTYPES, Genotype, PedigreeDoc, Query, Sex } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

let pedigree: PedigreeDoc = emptyPedigree();
let selectedId: string | null = null;
let riskAge: number | null = null;
let lastResponse: AnalyzeResponse | null = null;
let lastOutcome: AnalyzeOutcome = { status: "ok", body: { log_evidence: 0, tree_stats: { variables: 0, cliques: 0, treewidth: 0, table_cost: 0 }, warnings: [] } };
const scenarios: Scenario[] = [];

// Same-origin by default; `index.html?api=http://localhost:8000` points the
// page at an analysis server running elsewhere (CORS on the API is open).
const API_BASE = new URLSearchParams(location.search).get("api") ?? "";

const scheduler = new AnalyzeScheduler(onResult, onViewChange, API_BASE);

function buildRequest(): AnalyzeRequest {
  const queries: Query[] = [{ type: "posterior" }];
  const selected = pedigree.individuals.find((ind) => ind.id === selectedId);
  if (selected && riskAge !== null && selected.phenotype?.kind !== "affected") {
    queries.push({ type: "risk", individual: selected.id, tau: riskAge, dt: 1.0 });
  }
  return { pedigree, queries };
}

/** Called after every edit: validate locally, then either clear (empty
 * pedigree sends no request), flag the bad field, or schedule an analyze. */
function refresh(): void {
  paintPedigree();
  const disposition = dispositionAfterEdit(pedigree);
  if (disposition.action === "clear") {
    scheduler.cancel();
    lastResponse = null;
    $("banner").innerHTML = "";
    $("posterior").innerHTML = "";
    $("risk").innerHTML = "";
    return;
  }
  if (disposition.action === "reject") {
    scheduler.cancel();
    $("banner").innerHTML = renderBanner({
      status: "invalid",
      message: disposition.issues.map((i) => `${i.field}: ${i.message}`).join("; "),
    });
    return;
  }
  scheduler.schedule(buildRequest());
}

function onResult(outcome: AnalyzeOutcome): void {
  lastOutcome = outcome;
  if (outcome.status === "ok") lastResponse = outcome.body;
  $("banner").innerHTML = renderBanner(outcome);
  paintResults();
}

function onViewChange(view: SchedulerView): void {
  paintResults();
  $("status").textContent = view.inFlight ? "computing…" : view.stale ? "edited…" : "";
}

function paintPedigree(): void {
  $("chart").innerHTML = renderPedigreeSvg(pedigree, layoutPedigree(pedigree), selectedId);
  for (const node of document.querySelectorAll<SVGGElement>("#chart g.node")) {
    node.addEventListener("click", () => {
      selectedId = node.dataset.id ?? null;
      paintPedigree();
      paintEditor();
    });
  }
  const options = pedigree.individuals.map((ind) => `<option value="${ind.id}">${ind.id}</option>`).join("");
  for (const id of ["new-father", "new-mother"]) {
    $<HTMLSelectElement>(id).innerHTML = `<option value="">—</option>` + options;
  }
}

function paintResults(): void {
  if (lastResponse?.carrier_probability) {
    const order = pedigree.individuals.map((ind) => ind.id);
    $("posterior").innerHTML = renderPosteriorBars(order, lastResponse.carrier_probability, scheduler.view.stale);
  }
  const curve = lastResponse?.curves?.[0];
  $("risk").innerHTML = curve ? renderRiskChart(curve.individual, curve) : "";
}

function paintEditor(): void {
  const ind = pedigree.individuals.find((i) => i.id === selectedId);
  $("editor").style.display = ind ? "block" : "none";
  if (!ind) return;
  $("editor-title").textContent = `Individual ${ind.id}`;
  const ph = ind.phenotype;
  $<HTMLSelectElement>("phenotype-kind").value = ph ? ph.kind : "none";
  $<HTMLInputElement>("phenotype-age").value = ph ? String(ph.age) : "";
  const allowed = new Set(ind.genotypes ?? GENOTYPES);
  for (const g of GENOTYPES) {
    $<HTMLInputElement>(`geno-${g}`).checked = allowed.has(g);
  }
  const test = pedigree.tests?.find((t) => t.id === ind.id) ?? null;
  $<HTMLSelectElement>("test-result").value = test ? test.result : "none";
  $<HTMLInputElement>("test-sensitivity").value = test ? String(test.sensitivity) : "0.99";
  $<HTMLInputElement>("test-specificity").value = test ? String(test.specificity) : "0.999";
}

function paintScenarios(): void {
  const options = scenarios.map((s, k) => `<option value="${k}">${s.name}</option>`).join("");
  $<HTMLSelectElement>("compare-base").innerHTML = options;
  $<HTMLSelectElement>("compare-other").innerHTML = options;
}

function wire(): void {
  $("add-individual").addEventListener("click", () => {
    const id = $<HTMLInputElement>("new-id").value.trim();
    if (!id) return;
    const father = $<HTMLSelectElement>("new-father").value || null;
    const mother = $<HTMLSelectElement>("new-mother").value || null;
    pedigree = addIndividual(pedigree, {
      id,
      sex: $<HTMLSelectElement>("new-sex").value as Sex,
      father,
      mother,
    });
    $<HTMLInputElement>("new-id").value = "";
    selectedId = id;
    paintEditor();
    refresh();
  });

  $("remove-individual").addEventListener("click", () => {
    if (selectedId === null) return;
    pedigree = removeIndividual(pedigree, selectedId);
    selectedId = null;
    paintEditor();
    refresh();
  });

  const applyPhenotype = () => {
    if (selectedId === null) return;
    const kind = $<HTMLSelectElement>("phenotype-kind").value;
    const age = Number($<HTMLInputElement>("phenotype-age").value);
    pedigree =
      kind === "none" || !Number.isFinite(age)
        ? setPhenotype(pedigree, selectedId, null)
        : setPhenotype(pedigree, selectedId, { kind: kind as "affected" | "unaffected", age });
    refresh();
  };
  $("phenotype-kind").addEventListener("change", applyPhenotype);
  $("phenotype-age").addEventListener("change", applyPhenotype);

  for (const g of GENOTYPES) {
    $(`geno-${g}`).addEventListener("change", () => {
      if (selectedId === null) return;
      const picked = GENOTYPES.filter((gg) => $<HTMLInputElement>(`geno-${gg}`).checked) as Genotype[];
      pedigree = setConstraint(pedigree, selectedId, picked.length === 0 ? null : picked);
      refresh();
    });
  }

  const applyTest = () => {
    if (selectedId === null) return;
    const result = $<HTMLSelectElement>("test-result").value;
    pedigree =
      result === "none"
        ? setTest(pedigree, selectedId, null)
        : setTest(pedigree, selectedId, {
            result: result as "positive" | "negative",
            sensitivity: Number($<HTMLInputElement>("test-sensitivity").value),
            specificity: Number($<HTMLInputElement>("test-specificity").value),
          });
    refresh();
  };
  for (const id of ["test-result", "test-sensitivity", "test-specificity"]) {
    $(id).addEventListener("change", applyTest);
  }

  $("risk-run").addEventListener("click", () => {
    const age = Number($<HTMLInputElement>("risk-age").value);
    riskAge = Number.isFinite(age) && age > 0 ? age : null;
    refresh();
  });

  $("scenario-save").addEventListener("click", () => {
    const name = $<HTMLInputElement>("scenario-name").value.trim() || `scenario ${scenarios.length + 1}`;
    scenarios.push(snapshotScenario(name, pedigree, lastOutcome.status === "ok" ? lastOutcome.body : null));
    $<HTMLInputElement>("scenario-name").value = "";
    paintScenarios();
  });

  $("scenario-compare").addEventListener("click", () => {
    const base = scenarios[Number($<HTMLSelectElement>("compare-base").value)];
    const other = scenarios[Number($<HTMLSelectElement>("compare-other").value)];
    if (base && other) $("compare").innerHTML = renderDeltaBars(compareScenarios(base, other));
  });

  $("export").addEventListener("click", () => {
    const blob = new Blob([exportPedigree(pedigree)], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "pedigree.json";
    link.click();
    URL.revokeObjectURL(link.href);
  });

  $<HTMLInputElement>("import").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      pedigree = importPedigree(await file.text());
      selectedId = null;
      paintEditor();
      refresh();
    } catch (err) {
      if (!(err instanceof PedigreeImportError)) throw err;
      $("banner").innerHTML = renderBanner({ status: "invalid", message: err.message });
    }
  });
}

wire();
paintPedigree();
paintEditor();
