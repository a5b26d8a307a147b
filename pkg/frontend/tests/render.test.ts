import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { layoutPedigree } from "../src/layout.js";
import {
  escapeHtml,
  formatPercent,
  formatSignedPoints,
  renderBanner,
  renderPedigreeSvg,
  renderPosteriorBars,
  renderRiskChart,
} from "../src/render.js";
import { setPhenotype } from "../src/state.js";
import { AnalyzeResponse, PedigreeDoc } from "../src/types.js";

const load = <T>(name: string): T =>
  JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8")) as T;

const clampPed = load<PedigreeDoc>("clamp11_pedigree.json");
const clampResp = load<AnalyzeResponse>("clamp11_response.json");
const impossible = load<{ detail: { explanation: string } }>("impossible_response.json");

describe("posterior bars", () => {
  it("clamping a child to genotype 11 shows both parents as certain carriers", () => {
    // The child's genotype is pinned to 11 in the fixture pedigree, and the
    // recorded server response must surface on screen as exactly 100.0% for
    // dad and mum — the UI formats the server's numbers, nothing more.
    const order = clampPed.individuals.map((i) => i.id);
    const html = renderPosteriorBars(order, clampResp.carrier_probability!, false);
    const shown = Object.fromEntries(
      [...html.matchAll(/data-id="([^"]+)".*?data-role="carrier">([^<]+)</g)].map((m) => [m[1], m[2]]),
    );
    expect(shown).toEqual({ dad: "100.0%", mum: "100.0%", kid: "100.0%" });
  });

  it("keeps the pedigree's display order", () => {
    const html = renderPosteriorBars(["mum", "dad"], clampResp.carrier_probability!, false);
    expect(html.indexOf(`data-id="mum"`)).toBeLessThan(html.indexOf(`data-id="dad"`));
    expect(html).not.toContain(`data-id="kid"`);
  });

  it("dims the whole block while results are stale", () => {
    const order = clampPed.individuals.map((i) => i.id);
    expect(renderPosteriorBars(order, clampResp.carrier_probability!, true)).toContain(
      `class="posterior-bars stale"`,
    );
    expect(renderPosteriorBars(order, clampResp.carrier_probability!, false)).toContain(
      `class="posterior-bars"`,
    );
  });
});

describe("banner", () => {
  it("shows the impossible-configuration banner with the server's explanation", () => {
    const html = renderBanner({ status: "impossible", explanation: impossible.detail.explanation });
    expect(html).toContain(`class="banner impossible"`);
    expect(html).toContain("Impossible configuration:");
    expect(html).toContain("observed data has probability zero under the model");
  });

  it("escapes markup in server text", () => {
    const html = renderBanner({ status: "impossible", explanation: `<script>alert("x")</script>` });
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("is empty on success and styled for invalid input and transport errors", () => {
    expect(renderBanner({ status: "ok", body: clampResp })).toBe("");
    expect(renderBanner({ status: "invalid", message: "bad field" })).toContain(`class="banner invalid"`);
    expect(renderBanner({ status: "error", message: "server returned 500" })).toContain(`class="banner error"`);
  });
});

describe("risk chart", () => {
  const withRisk = load<AnalyzeResponse>("counseling_stage6_risk_response.json");

  it("draws both curves from the server grid", () => {
    const curve = withRisk.curves![0];
    const svg = renderRiskChart(curve.individual, curve);
    expect(svg).toContain(`data-id="${curve.individual}"`);
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain(`class="curve plain"`);
    expect(svg).toContain(`class="curve competing"`);
    // One point per grid age, for each curve.
    const pts = [...svg.matchAll(/points="([^"]+)"/g)].map((m) => m[1].split(" ").length);
    expect(pts).toEqual([curve.ages.length, curve.ages.length]);
  });

  it("omits the competing curve when mortality is disabled", () => {
    const curve = { ...withRisk.curves![0], risk_competing: null };
    const svg = renderRiskChart(curve.individual, curve);
    expect(svg.match(/<polyline/g)).toHaveLength(1);
    expect(svg).not.toContain(`class="curve competing"`);
  });
});

describe("pedigree chart", () => {
  it("uses squares for males, circles for females, and marks the selection", () => {
    const svg = renderPedigreeSvg(clampPed, layoutPedigree(clampPed), "kid");
    expect(svg.match(/<rect class="person/g)).toHaveLength(1); // dad
    expect(svg.match(/<circle class="person/g)).toHaveLength(2); // mum, kid
    expect(svg).toContain(`class="person selected"`);
  });

  it("fills affected individuals", () => {
    const ped = setPhenotype(clampPed, "mum", { kind: "affected", age: 45 });
    const svg = renderPedigreeSvg(ped, layoutPedigree(ped));
    expect(svg.match(/person affected/g)).toHaveLength(1);
  });

  it("draws mating-loop duplicates with a dashed identity link and a star label", () => {
    const cousinLoop: PedigreeDoc = {
      individuals: [
        { id: "gp1", sex: "M", father: null, mother: null, phenotype: null, twin_group: null },
        { id: "gp2", sex: "F", father: null, mother: null, phenotype: null, twin_group: null },
        { id: "a", sex: "M", father: "gp1", mother: "gp2", phenotype: null, twin_group: null },
        { id: "b", sex: "F", father: "gp1", mother: "gp2", phenotype: null, twin_group: null },
        { id: "s1", sex: "F", father: null, mother: null, phenotype: null, twin_group: null },
        { id: "s2", sex: "M", father: null, mother: null, phenotype: null, twin_group: null },
        { id: "x", sex: "F", father: "a", mother: "s1", phenotype: null, twin_group: null },
        { id: "y", sex: "M", father: "s2", mother: "b", phenotype: null, twin_group: null },
        { id: "c", sex: "U", father: "y", mother: "x", phenotype: null, twin_group: null },
      ],
    };
    const svg = renderPedigreeSvg(cousinLoop, layoutPedigree(cousinLoop));
    expect(svg).toContain(`class="link identity"`);
    expect(svg).toContain("person duplicate");
    expect(svg).toMatch(/>y\*</); // the duplicate is labelled as a copy
    expect(svg).toContain(`<path class="person"`); // unknown sex drawn as a diamond
  });

  it("escapes ids in markup", () => {
    expect(escapeHtml(`<&">`)).toBe("&lt;&amp;&quot;&gt;");
  });
});

describe("formatting", () => {
  it("renders probabilities as one-decimal percentages", () => {
    expect(formatPercent(0.9999999999999999)).toBe("100.0%");
    expect(formatPercent(0.00658911)).toBe("0.7%");
    expect(formatPercent(0)).toBe("0.0%");
  });

  it("renders deltas as signed percentage points", () => {
    expect(formatSignedPoints(0.398469)).toBe("+39.8 pp");
    expect(formatSignedPoints(-0.0954)).toBe("-9.5 pp");
    expect(formatSignedPoints(0)).toBe("+0.0 pp");
  });
});
