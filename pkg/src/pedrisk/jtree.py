"""Junction tree construction for pedigree factor graphs.

Each individual contributes one factor whose scope is the individual's
inference variable plus the parents' variables.  Monozygous twins share a
single inference variable, so their factors land on the same variable and the
shared genotype is counted once while every twin's own evidence still
multiplies in.

The tree is built by simulated variable elimination: eliminating a variable
forms a clique from it and its current neighbours, which passes the remaining
members up as its separator to the clique of the first-eliminated one among
them; non-maximal cliques are then absorbed into a containing neighbour.  The
defining properties (every factor covered, edges form a tree, running
intersection) are verified on every build.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .pedigree import Pedigree

__all__ = [
    "FactorSkeleton",
    "JunctionTree",
    "skeleton_from_pedigree",
    "min_fill_order",
    "build_junction_tree",
    "junction_tree_for",
    "verify_junction_tree",
]


@dataclass(frozen=True)
class FactorSkeleton:
    """Variables and factor scopes extracted from a pedigree."""

    variables: tuple[str, ...]
    var_of: Mapping[str, str]               # individual id -> inference variable
    scopes: Mapping[str, tuple[str, ...]]   # individual id -> factor scope
    members: Mapping[str, tuple[str, ...]]  # inference variable -> individual ids


def skeleton_from_pedigree(pedigree: Pedigree) -> FactorSkeleton:
    var_of: dict[str, str] = {}
    representative: dict[str, str] = {}
    for ind in pedigree.individuals:
        if ind.twin_group is None:
            var_of[ind.id] = ind.id
        else:
            var_of[ind.id] = representative.setdefault(ind.twin_group, ind.id)

    variables: list[str] = []
    members: dict[str, list[str]] = {}
    for ind in pedigree.individuals:
        v = var_of[ind.id]
        if v not in members:
            variables.append(v)
            members[v] = []
        members[v].append(ind.id)

    scopes: dict[str, tuple[str, ...]] = {}
    for ind in pedigree.individuals:
        scope = [var_of[ind.id]]
        for pid in (ind.father_id, ind.mother_id):
            if pid is not None and var_of[pid] not in scope:
                scope.append(var_of[pid])
        scopes[ind.id] = tuple(scope)

    return FactorSkeleton(
        variables=tuple(variables),
        var_of=MappingProxyType(var_of),
        scopes=MappingProxyType(scopes),
        members=MappingProxyType({v: tuple(ids) for v, ids in members.items()}),
    )


def _interaction_graph(variables, scopes) -> dict[str, set[str]]:
    adjacency: dict[str, set[str]] = {v: set() for v in variables}
    for scope in scopes.values():
        for a in scope:
            for b in scope:
                if a != b:
                    adjacency[a].add(b)
    return adjacency


def min_fill_order(variables, scopes) -> tuple[str, ...]:
    """Elimination order chosen greedily by fewest fill-in edges.

    Ties go to the variable that appears first in ``variables``.
    """
    index = {v: i for i, v in enumerate(variables)}
    adjacency = _interaction_graph(variables, scopes)
    remaining = set(variables)
    order: list[str] = []
    while remaining:
        best = None
        best_key = None
        for v in remaining:
            nbrs = adjacency[v]
            fill = sum(
                1
                for a in nbrs
                for b in nbrs
                if index[a] < index[b] and b not in adjacency[a]
            )
            key = (fill, index[v])
            if best_key is None or key < best_key:
                best, best_key = v, key
        nbrs = adjacency[best]
        for a in nbrs:
            adjacency[a] |= nbrs - {a, best}
            adjacency[a].discard(best)
        del adjacency[best]
        remaining.remove(best)
        order.append(best)
    return tuple(order)


@dataclass(frozen=True)
class JunctionTree:
    """Cliques in elimination-discovery order with message routing."""

    variables: tuple[str, ...]
    order: tuple[str, ...]
    cliques: tuple[tuple[str, ...], ...]
    separators: tuple[tuple[str, ...], ...]
    to: tuple[int | None, ...]        # receiving clique per clique; None at the root
    senders: tuple[tuple[int, ...], ...]
    home: Mapping[str, int]           # factor key -> clique holding its scope

    @property
    def root(self) -> int:
        return len(self.cliques) - 1

    @property
    def treewidth(self) -> int:
        """Size of the largest clique (each variable has 4 states)."""
        return max(len(c) for c in self.cliques)

    @property
    def table_cost(self) -> int:
        """Total number of table cells across clique potentials."""
        return sum(4 ** len(c) for c in self.cliques)

    def stats(self) -> dict:
        return {
            "variables": len(self.variables),
            "cliques": len(self.cliques),
            "treewidth": self.treewidth,
            "table_cost": self.table_cost,
        }


def build_junction_tree(variables, scopes, order=None) -> JunctionTree:
    """Build a junction tree covering every scope in ``scopes``.

    ``order`` overrides the elimination order; it must be a permutation of
    ``variables``.
    """
    variables = tuple(variables)
    if order is None:
        order = min_fill_order(variables, scopes)
    else:
        order = tuple(order)
        if sorted(order) != sorted(variables):
            raise ValueError("elimination order must be a permutation of the variables")
    index = {v: i for i, v in enumerate(variables)}
    pos = {v: i for i, v in enumerate(order)}

    # One clique per eliminated variable.  The remainder C_v minus v is fully
    # connected afterwards, so it sits inside the clique of its first-
    # eliminated member: that clique is the parent and the remainder is the
    # separator.  Parent cliques are always created later than their children.
    adjacency = _interaction_graph(variables, scopes)
    full: list[frozenset[str]] = []
    for v in order:
        clique = frozenset(adjacency[v] | {v})
        nbrs = adjacency[v]
        for a in nbrs:
            adjacency[a] |= nbrs - {a, v}
            adjacency[a].discard(v)
        del adjacency[v]
        full.append(clique)

    clique_of = {v: j for j, v in enumerate(order)}
    parent: list[int | None] = []
    sep: list[frozenset[str]] = []
    for j, v in enumerate(order):
        rest = full[j] - {v}
        sep.append(rest)
        parent.append(clique_of[min(rest, key=pos.__getitem__)] if rest else None)

    # Absorb non-maximal cliques into a containing neighbour.  Containment
    # only ever happens between tree neighbours, and merging two adjacent
    # nodes of a tree leaves a tree, so this cannot create cycles.  Inherited
    # separators stay valid: they are subsets of the absorbed clique, hence
    # of its container.
    children: list[set[int]] = [set() for _ in full]
    for j, p in enumerate(parent):
        if p is not None:
            children[p].add(j)
    alive = [True] * len(full)
    changed = True
    while changed:
        changed = False
        for j in range(len(full)):
            if not alive[j] or parent[j] is None:
                continue
            p = parent[j]
            if full[j] <= full[p]:
                for c in children[j]:
                    parent[c] = p
                children[p] |= children[j]
                children[p].discard(j)
                children[j] = set()
                alive[j] = False
                changed = True
            elif full[p] <= full[j]:
                grand = parent[p]
                parent[j] = grand
                sep[j] = sep[p]
                for c in children[p]:
                    if c != j:
                        parent[c] = j
                children[j] |= children[p] - {j}
                if grand is not None:
                    children[grand].discard(p)
                    children[grand].add(j)
                children[p] = set()
                alive[p] = False
                changed = True

    survivors = [j for j in range(len(full)) if alive[j]]
    pending = {j: 0 for j in survivors}
    for j in survivors:
        if parent[j] is not None:
            pending[parent[j]] += 1

    # Children-first renumbering: messages then always flow to later cliques
    # and the last clique is a root.
    ready = [j for j in survivors if pending[j] == 0]
    heapq.heapify(ready)
    new_index: dict[int, int] = {}
    while ready:
        j = heapq.heappop(ready)
        new_index[j] = len(new_index)
        p = parent[j]
        if p is not None:
            pending[p] -= 1
            if pending[p] == 0:
                heapq.heappush(ready, p)
    if len(new_index) != len(survivors):
        raise AssertionError("clique graph is not a tree")

    n = len(survivors)
    by_new = sorted(survivors, key=new_index.__getitem__)
    cliques = [full[j] for j in by_new]
    separators = [sep[j] for j in by_new]
    to: list[int | None] = []
    for rank, j in enumerate(by_new):
        if parent[j] is not None:
            to.append(new_index[parent[j]])
        elif rank < n - 1:
            # Extra root of a disconnected component: forward its scalar
            # evidence to any later clique through an empty separator.
            to.append(rank + 1)
        else:
            to.append(None)

    senders: list[list[int]] = [[] for _ in range(n)]
    for j, k in enumerate(to):
        if k is not None:
            senders[k].append(j)

    def ordered(vs: frozenset[str]) -> tuple[str, ...]:
        return tuple(sorted(vs, key=index.__getitem__))

    home: dict[str, int] = {}
    for key, scope in scopes.items():
        needed = frozenset(scope)
        for j in range(n):
            if needed <= cliques[j]:
                home[key] = j
                break
        else:
            raise AssertionError(f"no clique covers factor scope {scope}")

    tree = JunctionTree(
        variables=variables,
        order=order,
        cliques=tuple(ordered(c) for c in cliques),
        separators=tuple(ordered(s) for s in separators),
        to=tuple(to),
        senders=tuple(tuple(s) for s in senders),
        home=MappingProxyType(home),
    )
    verify_junction_tree(tree, scopes)
    return tree


def verify_junction_tree(tree: JunctionTree, scopes=None):
    """Raise if the tree violates covering, connectivity or running intersection."""
    n = len(tree.cliques)
    clique_sets = [frozenset(c) for c in tree.cliques]

    for j, k in enumerate(tree.to):
        if j == n - 1:
            if k is not None:
                raise AssertionError("last clique must be the root")
            if tree.separators[j]:
                raise AssertionError("root separator must be empty")
            continue
        if k is None or not (j < k < n):
            raise AssertionError(f"clique {j} has no valid receiver")
        if not frozenset(tree.separators[j]) <= clique_sets[k]:
            raise AssertionError(f"separator of clique {j} not inside its receiver")

    if scopes is not None:
        for key, scope in scopes.items():
            j = tree.home[key]
            if not frozenset(scope) <= clique_sets[j]:
                raise AssertionError(f"factor {key!r} not covered by its home clique")

    for v in tree.variables:
        holders = {j for j in range(n) if v in clique_sets[j]}
        if not holders:
            raise AssertionError(f"variable {v!r} missing from every clique")
        # Running intersection: the cliques containing v form a connected
        # subtree of the edges j -> to[j].
        top = max(holders)
        reached = {top}
        frontier = [top]
        while frontier:
            j = frontier.pop()
            for s in tree.senders[j]:
                if s in holders and s not in reached:
                    reached.add(s)
                    frontier.append(s)
        if reached != holders:
            raise AssertionError(f"running intersection fails for {v!r}")


def junction_tree_for(pedigree: Pedigree, order=None) -> tuple[FactorSkeleton, JunctionTree]:
    """Convenience wrapper: skeleton plus junction tree for a pedigree."""
    skeleton = skeleton_from_pedigree(pedigree)
    tree = build_junction_tree(skeleton.variables, skeleton.scopes, order=order)
    return skeleton, tree
