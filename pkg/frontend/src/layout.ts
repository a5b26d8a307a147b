/** Generation-row placement for drawing.  Individuals sit on the row of their
 * generation (founders on top).  A marriage that would close a mating loop in
 * the drawing gets a duplicate of one spouse instead, tied to the original by
 * a dashed identity link, so the drawn graph itself is always loop-free. */

import { PedigreeDoc } from "./types.js";

export interface NodeRef {
  id: string;
  copy: number;
}

export interface LayoutNode extends NodeRef {
  row: number;
  col: number;
}

export interface LayoutLink {
  kind: "mates" | "child" | "identity";
  from: NodeRef;
  to: NodeRef;
}

export interface PedigreeLayout {
  nodes: LayoutNode[];
  links: LayoutLink[];
  rows: number;
}

function generationRows(ped: PedigreeDoc): Map<string, number> {
  const rows = new Map<string, number>();
  const pending = new Map(ped.individuals.map((ind) => [ind.id, ind]));
  while (pending.size > 0) {
    let progressed = false;
    for (const [id, ind] of pending) {
      const fatherRow = ind.father === null ? -1 : rows.get(ind.father);
      const motherRow = ind.mother === null ? -1 : rows.get(ind.mother);
      if (fatherRow === undefined || motherRow === undefined) continue;
      rows.set(id, Math.max(fatherRow, motherRow) + 1);
      pending.delete(id);
      progressed = true;
    }
    if (!progressed) break; // cyclic ancestry: validator reports it, place leftovers on row 0
  }
  for (const id of pending.keys()) rows.set(id, 0);
  return rows;
}

class Components {
  private parent = new Map<string, string>();

  private find(key: string): string {
    let root = key;
    while (this.parent.get(root) !== undefined) root = this.parent.get(root)!;
    if (root !== key) this.parent.set(key, root);
    return root;
  }

  connected(a: string, b: string): boolean {
    return this.find(a) === this.find(b);
  }

  union(a: string, b: string): void {
    const ra = this.find(a);
    const rb = this.find(b);
    if (ra !== rb) this.parent.set(ra, rb);
  }
}

const keyOf = (node: NodeRef) => `${node.id}#${node.copy}`;

export function layoutPedigree(ped: PedigreeDoc): PedigreeLayout {
  const rowOf = generationRows(ped);
  const copies = new Map<string, number>();
  const nodes: LayoutNode[] = ped.individuals.map((ind) => {
    copies.set(ind.id, 1);
    return { id: ind.id, copy: 0, row: rowOf.get(ind.id) ?? 0, col: 0 };
  });
  const links: LayoutLink[] = [];
  const components = new Components();

  // Couples with their children, processed parents-first so a child has no
  // drawing edges yet when its parents' marriage is placed.
  const families = new Map<string, { father: string; mother: string; children: string[] }>();
  for (const ind of ped.individuals) {
    if (ind.father === null || ind.mother === null) continue;
    const key = `${ind.father}|${ind.mother}`;
    if (!families.has(key)) families.set(key, { father: ind.father, mother: ind.mother, children: [] });
    families.get(key)!.children.push(ind.id);
  }
  const ordered = [...families.values()].sort(
    (a, b) =>
      Math.max(rowOf.get(a.father)!, rowOf.get(a.mother)!) -
        Math.max(rowOf.get(b.father)!, rowOf.get(b.mother)!) ||
      a.father.localeCompare(b.father) ||
      a.mother.localeCompare(b.mother),
  );

  for (const family of ordered) {
    let fatherNode: NodeRef = { id: family.father, copy: 0 };
    const motherNode: NodeRef = { id: family.mother, copy: 0 };
    if (components.connected(keyOf(fatherNode), keyOf(motherNode))) {
      // Mating loop: draw this marriage against a duplicate of the father.
      const copy = copies.get(family.father)!;
      copies.set(family.father, copy + 1);
      fatherNode = { id: family.father, copy };
      nodes.push({ ...fatherNode, row: rowOf.get(family.father)!, col: 0 });
      links.push({ kind: "identity", from: { id: family.father, copy: 0 }, to: fatherNode });
    }
    components.union(keyOf(fatherNode), keyOf(motherNode));
    links.push({ kind: "mates", from: fatherNode, to: motherNode });
    for (const child of family.children) {
      const childNode: NodeRef = { id: child, copy: 0 };
      components.union(keyOf(childNode), keyOf(fatherNode));
      links.push({ kind: "child", from: fatherNode, to: childNode });
      links.push({ kind: "child", from: motherNode, to: childNode });
    }
  }

  const byRow = new Map<number, LayoutNode[]>();
  for (const node of nodes) {
    if (!byRow.has(node.row)) byRow.set(node.row, []);
    byRow.get(node.row)!.push(node);
  }
  for (const rowNodes of byRow.values()) {
    rowNodes.forEach((node, col) => {
      node.col = col;
    });
  }
  const rows = nodes.length === 0 ? 0 : Math.max(...nodes.map((n) => n.row)) + 1;
  return { nodes, links, rows };
}

/** True when the structural links (mates + child) contain no cycle once each
 * couple is treated as a single junction, which is how the chart draws a
 * sibship.  Identity links are decoration and excluded on purpose. */
export function drawingIsAcyclic(layout: PedigreeLayout): boolean {
  const components = new Components();
  const hubOf = (a: NodeRef, b: NodeRef) => "hub:" + [keyOf(a), keyOf(b)].sort().join("|");
  for (const link of layout.links) {
    if (link.kind !== "mates") continue;
    if (components.connected(keyOf(link.from), keyOf(link.to))) return false;
    const hub = hubOf(link.from, link.to);
    components.union(keyOf(link.from), hub);
    components.union(keyOf(link.to), hub);
  }
  const parentsOf = new Map<string, NodeRef[]>();
  for (const link of layout.links) {
    if (link.kind !== "child") continue;
    const child = keyOf(link.to);
    if (!parentsOf.has(child)) parentsOf.set(child, []);
    parentsOf.get(child)!.push(link.from);
  }
  for (const [child, parents] of parentsOf) {
    const hub = hubOf(parents[0], parents[1]);
    if (components.connected(child, hub)) return false;
    components.union(child, hub);
  }
  return true;
}
