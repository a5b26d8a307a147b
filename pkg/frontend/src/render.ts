/** HTML/SVG fragment builders.  Everything here is a pure function from data
 * to markup strings: no DOM access, so the exact pixels and figures the user
 * sees can be asserted in plain node tests.  All probabilities shown come
 * from the analysis server verbatim; this module only formats them. */

import { AnalyzeOutcome } from "./api.js";
import { CompareRow } from "./compare.js";
import { PedigreeLayout } from "./layout.js";
import { CurvePayload, PedigreeDoc } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function formatPercent(p: number): string {
  return (100 * p).toFixed(1) + "%";
}

export function formatSignedPoints(delta: number): string {
  const points = (100 * delta).toFixed(1);
  return (delta >= 0 ? "+" : "") + points + " pp";
}

/** Carrier-probability bars, one row per individual, in pedigree order.
 * `stale` dims the whole block while an edit is waiting on the server. */
export function renderPosteriorBars(
  order: string[],
  carrier: Record<string, number>,
  stale: boolean,
): string {
  const rows = order
    .filter((id) => id in carrier)
    .map((id) => {
      const p = carrier[id];
      const width = (100 * p).toFixed(2);
      return (
        `<li class="bar-row" data-id="${escapeHtml(id)}">` +
        `<span class="bar-label">${escapeHtml(id)}</span>` +
        `<span class="bar-track"><span class="bar-fill" style="width:${width}%"></span></span>` +
        `<span class="bar-value" data-role="carrier">${formatPercent(p)}</span>` +
        `</li>`
      );
    })
    .join("");
  return `<ul class="posterior-bars${stale ? " stale" : ""}">${rows}</ul>`;
}

/** Scenario-comparison bars: signed carrier-probability changes per
 * individual, aligned by id; individuals absent from the base scenario are
 * flagged as new instead of getting a fabricated delta. */
export function renderDeltaBars(rows: CompareRow[]): string {
  const items = rows
    .map((row) => {
      const id = escapeHtml(row.id);
      if (row.isNew) {
        return (
          `<li class="delta-row new" data-id="${id}">` +
          `<span class="bar-label">${id}</span>` +
          `<span class="delta-flag">new</span>` +
          `<span class="bar-value">${row.after === null ? "–" : formatPercent(row.after)}</span>` +
          `</li>`
        );
      }
      if (row.delta === null) {
        return (
          `<li class="delta-row missing" data-id="${id}">` +
          `<span class="bar-label">${id}</span>` +
          `<span class="delta-flag">no result</span>` +
          `</li>`
        );
      }
      const direction = row.delta > 0 ? "up" : row.delta < 0 ? "down" : "flat";
      const width = Math.min(100, Math.abs(100 * row.delta)).toFixed(2);
      return (
        `<li class="delta-row ${direction}" data-id="${id}">` +
        `<span class="bar-label">${id}</span>` +
        `<span class="bar-track"><span class="bar-fill" style="width:${width}%"></span></span>` +
        `<span class="bar-value" data-role="delta">${formatSignedPoints(row.delta)}</span>` +
        `</li>`
      );
    })
    .join("");
  return `<ul class="delta-bars">${items}</ul>`;
}

/** Status banner.  An impossible configuration (evidence with zero
 * probability) is a statement about the data, not a bug, and gets its own
 * styling plus the server's explanation of where the conflict sits. */
export function renderBanner(outcome: AnalyzeOutcome): string {
  switch (outcome.status) {
    case "ok":
      return "";
    case "impossible":
      return `<div class="banner impossible">Impossible configuration: ${escapeHtml(outcome.explanation)}</div>`;
    case "invalid":
      return `<div class="banner invalid">Invalid input: ${escapeHtml(outcome.message)}</div>`;
    case "error":
      return `<div class="banner error">${escapeHtml(outcome.message)}</div>`;
  }
}

function polyline(ages: number[], values: number[], x: (a: number) => number, y: (v: number) => number, cls: string): string {
  const points = ages.map((age, i) => `${x(age).toFixed(1)},${y(values[i]).toFixed(1)}`).join(" ");
  return `<polyline class="${cls}" fill="none" points="${points}" />`;
}

/** Cumulative-risk chart for one individual: the plain curve and the curve
 * with competing mortality, drawn from the server's grid as-is. */
export function renderRiskChart(id: string, curve: CurvePayload, width = 640, height = 240): string {
  const pad = 40;
  const ages = curve.ages;
  const a0 = ages[0];
  const a1 = ages[ages.length - 1];
  const top = Math.max(...curve.risk_no_competing, 0.01);
  const x = (age: number) => pad + ((age - a0) / Math.max(a1 - a0, 1e-9)) * (width - 2 * pad);
  const y = (v: number) => height - pad - (v / top) * (height - 2 * pad);
  const competing =
    curve.risk_competing === null ? "" : polyline(ages, curve.risk_competing, x, y, "curve competing");
  return (
    `<svg class="risk-chart" data-id="${escapeHtml(id)}" viewBox="0 0 ${width} ${height}">` +
    `<line class="axis" x1="${pad}" y1="${height - pad}" x2="${width - pad}" y2="${height - pad}" />` +
    `<line class="axis" x1="${pad}" y1="${pad}" x2="${pad}" y2="${height - pad}" />` +
    polyline(ages, curve.risk_no_competing, x, y, "curve plain") +
    competing +
    `<text class="tick" x="${pad}" y="${height - pad + 16}">${a0}</text>` +
    `<text class="tick" x="${width - pad}" y="${height - pad + 16}">${a1}</text>` +
    `<text class="tick" x="${pad - 6}" y="${pad}" text-anchor="end">${formatPercent(top)}</text>` +
    `</svg>`
  );
}

const CELL_W = 90;
const CELL_H = 80;
const R = 16;

function nodeShape(sex: string, cx: number, cy: number, cls: string): string {
  if (sex === "M") {
    return `<rect class="${cls}" x="${cx - R}" y="${cy - R}" width="${2 * R}" height="${2 * R}" />`;
  }
  if (sex === "F") {
    return `<circle class="${cls}" cx="${cx}" cy="${cy}" r="${R}" />`;
  }
  const d = `M ${cx} ${cy - R} L ${cx + R} ${cy} L ${cx} ${cy + R} L ${cx - R} ${cy} Z`;
  return `<path class="${cls}" d="${d}" />`;
}

/** Pedigree chart: squares for males, circles for females, diamonds for
 * unknown sex, filled when affected; mating-loop duplicates are joined to
 * their original by a dashed identity link. */
export function renderPedigreeSvg(ped: PedigreeDoc, layout: PedigreeLayout, selectedId: string | null = null): string {
  const byId = new Map(ped.individuals.map((ind) => [ind.id, ind]));
  const pos = new Map(layout.nodes.map((n) => [`${n.id}#${n.copy}`, n]));
  const xy = (id: string, copy: number) => {
    const n = pos.get(`${id}#${copy}`)!;
    return { x: CELL_W / 2 + n.col * CELL_W, y: CELL_H / 2 + n.row * CELL_H };
  };
  const cols = Math.max(1, ...layout.nodes.map((n) => n.col + 1));
  const width = cols * CELL_W;
  const height = Math.max(1, layout.rows) * CELL_H;

  const lines = layout.links
    .map((link) => {
      const a = xy(link.from.id, link.from.copy);
      const b = xy(link.to.id, link.to.copy);
      return `<line class="link ${link.kind}" x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" />`;
    })
    .join("");

  const shapes = layout.nodes
    .map((node) => {
      const ind = byId.get(node.id)!;
      const { x, y } = xy(node.id, node.copy);
      const classes = ["person"];
      if (ind.phenotype?.kind === "affected") classes.push("affected");
      if (node.copy > 0) classes.push("duplicate");
      if (node.id === selectedId) classes.push("selected");
      const label = node.copy > 0 ? `${node.id}*` : node.id;
      return (
        `<g class="node" data-id="${escapeHtml(node.id)}" data-copy="${node.copy}">` +
        nodeShape(ind.sex, x, y, classes.join(" ")) +
        `<text class="name" x="${x}" y="${y + R + 14}" text-anchor="middle">${escapeHtml(label)}</text>` +
        `</g>`
      );
    })
    .join("");

  return `<svg class="pedigree" viewBox="0 0 ${width} ${height}">${lines}${shapes}</svg>`;
}
