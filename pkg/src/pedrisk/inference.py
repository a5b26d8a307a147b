"""Exact genotype posteriors on pedigrees via junction-tree message passing.

Each individual contributes one potential: founder prior or Mendelian
transmission, times the likelihood of the individual's observed history
(disease onset or censoring age, genotype constraints, genetic test results).
Potentials are multiplied into clique tables on a junction tree; one forward
and one backward sweep then yield the joint evidence and every posterior
genotype marginal.  Messages are rescaled to unit maximum after every
summation, with magnitudes tracked in log space, so deep pedigrees cannot
underflow.

Impossible evidence (for instance contradictory genotype constraints) is not
an error at this level: the propagation reports ``-inf`` log-evidence and
names the individuals whose combined evidence first became unsatisfiable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .genemodel import GeneticModel, apply_constraint, test_likelihood
from .jtree import FactorSkeleton, JunctionTree, build_junction_tree, skeleton_from_pedigree
from .pedigree import Pedigree, PhenotypeEvent
from .survival import DiseaseModel, builtin_claus_easton
from .tables import GENOTYPES, GenotypeTable, product_of

__all__ = [
    "InfeasibleEvidenceError",
    "Propagation",
    "PosteriorResult",
    "individual_potential",
    "build_potentials",
    "propagate",
    "compute_posterior",
    "joint_posterior",
    "carrier_probability_at",
]


class InfeasibleEvidenceError(ValueError):
    """Raised by queries that need a proper posterior when the evidence has
    probability zero."""


def default_models() -> tuple[GeneticModel, DiseaseModel]:
    """Built-in breast-cancer genetics and incidence."""
    disease, frequency = builtin_claus_easton()
    return GeneticModel.default(frequency), disease


def _phenotype_weight(
    phenotype: PhenotypeEvent | None, disease: DiseaseModel, carrier_mask: np.ndarray
) -> np.ndarray:
    """Likelihood of the observed history per genotype.

    Onset at age t contributes the event density; being unaffected at age t
    contributes the survival probability; no record contributes 1.
    """
    w = np.ones(len(carrier_mask))
    if phenotype is None:
        return w
    for g, carrier in enumerate(carrier_mask):
        h = disease.hazard(bool(carrier))
        if phenotype.kind == "affected":
            w[g] = h.density(phenotype.age)
        else:
            w[g] = h.survival(phenotype.age)
    return w


def individual_potential(
    individual,
    tests,
    skeleton: FactorSkeleton,
    genetics: GeneticModel,
    disease: DiseaseModel,
) -> GenotypeTable:
    """The factor one individual contributes to the joint distribution."""
    scope = skeleton.scopes[individual.id]
    var = skeleton.var_of[individual.id]
    if individual.is_founder:
        base = GenotypeTable((var,), genetics.founder_vector())
    else:
        # Gather the child|father,mother law onto the deduplicated scope;
        # twins collapsing onto one variable make duplicate axes possible.
        position = {u: k for k, u in enumerate(scope)}
        grids = np.indices((len(GENOTYPES),) * len(scope))
        vals = genetics.transmission[
            grids[position[var]],
            grids[position[skeleton.var_of[individual.father_id]]],
            grids[position[skeleton.var_of[individual.mother_id]]],
        ]
        base = GenotypeTable(scope, vals)

    evidence = GenotypeTable((var,), _phenotype_weight(individual.phenotype, disease, genetics.carrier_mask()))
    evidence = apply_constraint(evidence, individual.genotype_constraint)
    for t in tests:
        evidence = evidence.product(
            GenotypeTable.from_mapping(var, test_likelihood(t.observed, t.sensitivity, t.specificity))
        )
    return base.product(evidence).transpose(scope)


def build_potentials(
    pedigree: Pedigree,
    skeleton: FactorSkeleton,
    tree: JunctionTree,
    genetics: GeneticModel,
    disease: DiseaseModel,
    var_constraints: Mapping[str, frozenset] | None = None,
) -> tuple[GenotypeTable, ...]:
    """One table per clique: the product of the factors homed there.

    ``var_constraints`` narrows inference variables directly (used for
    clamping); each constraint multiplies onto the factor of the variable's
    first owner.
    """
    factors = {
        ind.id: individual_potential(ind, pedigree.tests_for(ind.id), skeleton, genetics, disease)
        for ind in pedigree.individuals
    }
    if var_constraints:
        for var, allowed in var_constraints.items():
            owner = skeleton.members[var][0]
            if allowed:
                factors[owner] = apply_constraint(factors[owner], allowed, var=var)
            else:
                # Disjoint constraints on a shared genotype: nothing is allowed.
                old = factors[owner]
                factors[owner] = GenotypeTable(old.scope, np.zeros_like(old.values))

    grouped: list[list[GenotypeTable]] = [[] for _ in tree.cliques]
    for ind_id, table in factors.items():
        grouped[tree.home[ind_id]].append(table)
    return tuple(
        product_of(tables, scope_hint=clique)
        for clique, tables in zip(tree.cliques, grouped)
    )


@dataclass(frozen=True)
class Propagation:
    """Messages and beliefs from one full propagation over a junction tree."""

    tree: JunctionTree
    potentials: tuple[GenotypeTable, ...]
    forward: tuple[GenotypeTable, ...]
    backward: tuple[GenotypeTable, ...]
    beliefs: tuple[GenotypeTable, ...]
    log_evidence: float
    failed_clique: int | None = None

    @property
    def feasible(self) -> bool:
        return self.log_evidence > -math.inf

    def clique_for(self, var: str) -> int:
        for k, clique in enumerate(self.tree.cliques):
            if var in clique:
                return k
        raise KeyError(var)

    def marginal(self, var: str, clique: int | None = None) -> np.ndarray:
        """Posterior distribution of one variable given all the evidence."""
        if not self.feasible:
            raise InfeasibleEvidenceError("evidence has probability zero")
        k = self.clique_for(var) if clique is None else clique
        return self.beliefs[k].marginalize((var,)).normalized().values

    def check_consistency(self, rtol: float = 1e-9):
        """Verify that neighbouring beliefs agree on their separator, that the
        forward/backward product on every separator carries the full evidence,
        and that every clique reports the same evidence.  Raises on violation."""
        for k, belief in enumerate(self.beliefs):
            lt = belief.log_total()
            if not math.isclose(lt, self.log_evidence, rel_tol=rtol, abs_tol=1e-12):
                raise AssertionError(
                    f"clique {k} reports evidence {lt}, expected {self.log_evidence}"
                )
        for j, k in enumerate(self.tree.to):
            if k is None:
                continue
            fb = self.forward[j].product(self.backward[j])
            if not math.isclose(fb.log_total(), self.log_evidence, rel_tol=rtol, abs_tol=1e-12):
                raise AssertionError(f"separator {j} product does not carry the evidence")
            sep = self.tree.separators[j]
            if not sep:
                continue
            a = self.beliefs[j].marginalize(sep).normalized().values
            b = self.beliefs[k].marginalize(sep).normalized().values
            if not np.allclose(a, b, rtol=rtol, atol=1e-12):
                raise AssertionError(f"beliefs {j} and {k} disagree on separator {sep}")


def propagate(tree: JunctionTree, potentials, validate: bool = False) -> Propagation:
    """Run the forward and backward sweeps of the message-passing schedule."""
    n = len(tree.cliques)
    potentials = tuple(potentials)

    forward: list[GenotypeTable] = []
    failed = None
    for k in range(n):
        work = potentials[k]
        for j in tree.senders[k]:
            work = work.product(forward[j])
        message = work.marginalize(tree.separators[k]).rescaled()
        if failed is None and message.total() <= 0.0:
            failed = k
        forward.append(message)

    log_evidence = forward[-1].log_total()

    backward: list[GenotypeTable | None] = [None] * n
    backward[n - 1] = GenotypeTable.ones(())
    for k in range(n - 1, -1, -1):
        inbound = tree.senders[k]
        if not inbound:
            continue
        base = potentials[k].product(backward[k])
        for i in inbound:
            work = base
            for j in inbound:
                if j != i:
                    work = work.product(forward[j])
            backward[i] = work.marginalize(tree.separators[i]).rescaled()

    beliefs = []
    for k in range(n):
        work = potentials[k]
        for j in tree.senders[k]:
            work = work.product(forward[j])
        beliefs.append(work.product(backward[k]))

    prop = Propagation(
        tree=tree,
        potentials=potentials,
        forward=tuple(forward),
        backward=tuple(backward),
        beliefs=tuple(beliefs),
        log_evidence=log_evidence,
        failed_clique=failed,
    )
    if validate and prop.feasible:
        prop.check_consistency()
    return prop


@dataclass(frozen=True)
class PosteriorResult:
    """Posterior genotype distributions for every individual, plus evidence."""

    log_evidence: float
    marginals: Mapping[str, np.ndarray] | None  # individual id -> P(genotype | history)
    carrier_probability: Mapping[str, float] | None
    explanation: str | None
    tree: JunctionTree

    @property
    def feasible(self) -> bool:
        return self.log_evidence > -math.inf

    @property
    def tree_stats(self) -> dict:
        return self.tree.stats()


def _translate_constraints(pedigree, skeleton, constraints) -> dict[str, frozenset]:
    out: dict[str, frozenset] = {}
    for ind_id, allowed in (constraints or {}).items():
        if ind_id not in pedigree:
            raise KeyError(f"unknown individual {ind_id!r} in constraints")
        var = skeleton.var_of[ind_id]
        allowed = frozenset(allowed)
        out[var] = out[var] & allowed if var in out else allowed
    return out


def _infeasible_explanation(pedigree, skeleton, tree, failed: int | None) -> str:
    if failed is None:
        return "observed data has probability zero under the model"
    owners = sorted(
        ind_id for ind_id, k in tree.home.items() if k == failed
    )
    involved = ", ".join(owners) if owners else ", ".join(tree.cliques[failed])
    return (
        "observed data has probability zero under the model: no genotype "
        f"assignment is compatible with the combined evidence around {involved}"
    )


def compute_posterior(
    pedigree: Pedigree,
    genetics: GeneticModel | None = None,
    disease: DiseaseModel | None = None,
    *,
    engine: str = "bp",
    order=None,
    constraints: Mapping[str, frozenset] | None = None,
    validate: bool = False,
) -> PosteriorResult:
    """Posterior genotype marginals for every individual given their history.

    ``engine`` is ``"bp"`` (junction-tree propagation) or ``"brute"``
    (full enumeration, only for small pedigrees).  ``constraints`` narrows
    genotype sets by individual id on top of what the pedigree declares;
    monozygous twins share one genotype, so a constraint on either twin
    applies to both.
    """
    if genetics is None or disease is None:
        g, d = default_models()
        genetics = genetics or g
        disease = disease or d

    skeleton = skeleton_from_pedigree(pedigree)
    tree = build_junction_tree(skeleton.variables, skeleton.scopes, order=order)
    var_constraints = _translate_constraints(pedigree, skeleton, constraints)

    if engine == "bp":
        potentials = build_potentials(pedigree, skeleton, tree, genetics, disease, var_constraints)
        prop = propagate(tree, potentials, validate=validate)
        log_evidence = prop.log_evidence
        failed = prop.failed_clique
        var_marginals = (
            {v: prop.marginal(v) for v in skeleton.variables} if prop.feasible else None
        )
    elif engine == "brute":
        from .oracle import enumerate_posterior

        log_evidence, by_individual = enumerate_posterior(
            pedigree, genetics, disease, constraints=constraints
        )
        failed = None
        var_marginals = (
            {skeleton.var_of[i]: m for i, m in by_individual.items()}
            if by_individual is not None
            else None
        )
    else:
        raise ValueError(f"unknown engine {engine!r}; expected 'bp' or 'brute'")

    if var_marginals is None:
        return PosteriorResult(
            log_evidence=-math.inf,
            marginals=None,
            carrier_probability=None,
            explanation=_infeasible_explanation(pedigree, skeleton, tree, failed),
            tree=tree,
        )

    mask = genetics.carrier_mask()
    marginals = {ind.id: var_marginals[skeleton.var_of[ind.id]] for ind in pedigree.individuals}
    carrier = {i: float(m[mask].sum()) for i, m in marginals.items()}
    return PosteriorResult(
        log_evidence=log_evidence,
        marginals=MappingProxyType(marginals),
        carrier_probability=MappingProxyType(carrier),
        explanation=None,
        tree=tree,
    )


def _joint_over_vars(
    pedigree,
    skeleton,
    variables: tuple[str, ...],
    genetics,
    disease,
    var_constraints: dict[str, frozenset],
    order,
) -> np.ndarray:
    """P(variables | evidence, constraints); zero slices where infeasible."""
    tree = build_junction_tree(skeleton.variables, skeleton.scopes, order=order)
    potentials = build_potentials(pedigree, skeleton, tree, genetics, disease, var_constraints)
    prop = propagate(tree, potentials)
    shape = (len(GENOTYPES),) * len(variables)
    if not prop.feasible:
        return np.zeros(shape)
    needed = frozenset(variables)
    for k, clique in enumerate(prop.tree.cliques):
        if needed <= frozenset(clique):
            return prop.beliefs[k].marginalize(variables).normalized().values
    # No clique covers the set: clamp the first variable and recurse.
    head, rest = variables[0], variables[1:]
    head_marginal = prop.marginal(head)
    out = np.zeros(shape)
    for g, genotype in enumerate(GENOTYPES):
        if head_marginal[g] <= 0.0:
            continue
        narrowed = dict(var_constraints)
        narrowed[head] = narrowed.get(head, frozenset(GENOTYPES)) & {genotype}
        out[g] = head_marginal[g] * _joint_over_vars(
            pedigree, skeleton, rest, genetics, disease, narrowed, order
        )
    return out


def joint_posterior(
    pedigree: Pedigree,
    targets,
    genetics: GeneticModel | None = None,
    disease: DiseaseModel | None = None,
    *,
    constraints: Mapping[str, frozenset] | None = None,
    order=None,
) -> GenotypeTable:
    """Joint posterior over the genotypes of ``targets`` (individual ids).

    The result is a normalized table with one axis per target.  When the
    targets all live in one clique the joint is read off a clique belief;
    otherwise the first variable is clamped to each genotype in turn and the
    remainder computed recursively (4^(m-1) propagations for m variables).
    Twins within ``targets`` share one genotype, so their off-diagonal
    entries are exactly zero.  An all-zero table signals impossible evidence.
    """
    targets = tuple(targets)
    if not targets:
        raise ValueError("at least one target individual is required")
    if genetics is None or disease is None:
        g, d = default_models()
        genetics = genetics or g
        disease = disease or d
    skeleton = skeleton_from_pedigree(pedigree)
    for t in targets:
        if t not in pedigree:
            raise KeyError(f"unknown individual {t!r} in targets")
    var_constraints = _translate_constraints(pedigree, skeleton, constraints)

    target_vars = tuple(skeleton.var_of[t] for t in targets)
    unique_vars: list[str] = []
    representative: dict[str, int] = {}
    for j, v in enumerate(target_vars):
        if v not in representative:
            representative[v] = j
            unique_vars.append(v)

    joint = _joint_over_vars(
        pedigree, skeleton, tuple(unique_vars), genetics, disease, var_constraints, order
    )
    if len(unique_vars) == len(targets):
        return GenotypeTable(targets, joint)

    # Expand shared-variable targets: equal coordinates carry the joint value,
    # unequal ones are impossible.
    grids = np.indices((len(GENOTYPES),) * len(targets))
    out = joint[tuple(grids[representative[v]] for v in unique_vars)].astype(float)
    for j, v in enumerate(target_vars):
        r = representative[v]
        if r != j:
            out = out * (grids[j] == grids[r])
    return GenotypeTable(targets, out)


def carrier_probability_at(
    pedigree: Pedigree,
    individual_id: str,
    age: float | None = None,
    genetics: GeneticModel | None = None,
    disease: DiseaseModel | None = None,
    *,
    engine: str = "bp",
    constraints: Mapping[str, frozenset] | None = None,
) -> float:
    """P(carrier | family history) for one individual, unaffected at ``age``.

    ``age`` replaces the individual's recorded phenotype with an unaffected
    observation at that age; ``None`` keeps the pedigree as recorded.  Raises
    :class:`InfeasibleEvidenceError` when the history has probability zero.
    """
    if individual_id not in pedigree:
        raise KeyError(f"unknown individual {individual_id!r}")
    if age is not None:
        pedigree = pedigree.with_phenotype(individual_id, PhenotypeEvent("unaffected", age))
    result = compute_posterior(pedigree, genetics, disease, engine=engine, constraints=constraints)
    if not result.feasible:
        raise InfeasibleEvidenceError(result.explanation)
    return result.carrier_probability[individual_id]
