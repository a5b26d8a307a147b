"""Slow reference computations for cross-checking the fast paths.

``enumerate_posterior`` sums the joint likelihood over every genotype
assignment, one axis per individual (monozygous twins get separate axes tied
by an equality indicator), so it exercises none of the junction-tree or
message-passing code.  The quadrature helpers integrate risk integrands
numerically instead of using closed-form sums.

Enumeration is exponential in family size and refuses pedigrees with more
than ``MAX_ENUMERATION`` members.
"""

from __future__ import annotations

import math

import numpy as np

from .genemodel import GeneticModel, test_likelihood
from .pedigree import Pedigree
from .survival import DiseaseModel, PiecewiseHazard
from .tables import GENOTYPES

__all__ = [
    "MAX_ENUMERATION",
    "enumerate_posterior",
    "enumerate_joint",
    "quadrature_incidence",
    "quadrature_mixture_incidence",
]

MAX_ENUMERATION = 12


def _history_weight(phenotype, disease: DiseaseModel, carrier_mask) -> np.ndarray:
    w = np.ones(len(GENOTYPES))
    if phenotype is None:
        return w
    for g, carrier in enumerate(carrier_mask):
        h = disease.hazard(bool(carrier))
        w[g] = h.density(phenotype.age) if phenotype.kind == "affected" else h.survival(phenotype.age)
    return w


def _indicator(allowed) -> np.ndarray:
    allowed = frozenset(allowed)
    return np.array([g in allowed for g in GENOTYPES], dtype=float)


def _enumeration(pedigree: Pedigree, genetics, disease, constraints):
    ids = [ind.id for ind in pedigree.individuals]
    n = len(ids)
    if n > MAX_ENUMERATION:
        raise ValueError(f"enumeration over {n} individuals exceeds the limit of {MAX_ENUMERATION}")
    axis = {i: k for k, i in enumerate(ids)}
    codes = np.arange(4**n, dtype=np.int64)
    digit = {i: (codes >> (2 * (n - 1 - axis[i]))) & 3 for i in ids}

    mask = genetics.carrier_mask()
    prior = genetics.founder_vector()
    transmission = genetics.transmission
    weight = np.ones(len(codes))
    for ind in pedigree.individuals:
        g = digit[ind.id]
        if ind.is_founder:
            weight *= prior[g]
        else:
            weight *= transmission[g, digit[ind.father_id], digit[ind.mother_id]]
        per = _history_weight(ind.phenotype, disease, mask)
        per = per * _indicator(ind.genotype_constraint)
        if constraints and ind.id in constraints:
            per = per * _indicator(constraints[ind.id])
        for t in pedigree.tests_for(ind.id):
            lik = test_likelihood(t.observed, t.sensitivity, t.specificity)
            per = per * np.array([lik[g_] for g_ in GENOTYPES])
        weight *= per[g]

    for group in {ind.twin_group for ind in pedigree.individuals if ind.twin_group}:
        members = [ind.id for ind in pedigree.individuals if ind.twin_group == group]
        for other in members[1:]:
            weight *= digit[members[0]] == digit[other]
    return ids, digit, weight


def enumerate_posterior(
    pedigree: Pedigree,
    genetics: GeneticModel | None = None,
    disease: DiseaseModel | None = None,
    constraints=None,
):
    """(log evidence, per-individual posterior marginals) by full enumeration.

    Returns ``(-inf, None)`` when the observed history has probability zero.
    """
    if genetics is None or disease is None:
        from .inference import default_models

        g, d = default_models()
        genetics = genetics or g
        disease = disease or d
    ids, digit, weight = _enumeration(pedigree, genetics, disease, constraints)
    total = float(weight.sum())
    if total <= 0.0:
        return -math.inf, None
    marginals = {
        i: np.bincount(digit[i], weights=weight, minlength=len(GENOTYPES)) / total for i in ids
    }
    return math.log(total), marginals


def enumerate_joint(
    pedigree: Pedigree,
    targets,
    genetics: GeneticModel | None = None,
    disease: DiseaseModel | None = None,
    constraints=None,
) -> np.ndarray:
    """Joint posterior over the genotypes of ``targets`` by full enumeration."""
    if genetics is None or disease is None:
        from .inference import default_models

        g, d = default_models()
        genetics = genetics or g
        disease = disease or d
    targets = tuple(targets)
    ids, digit, weight = _enumeration(pedigree, genetics, disease, constraints)
    total = float(weight.sum())
    if total <= 0.0:
        raise ValueError("observed history has probability zero")
    code = np.zeros(len(weight), dtype=np.int64)
    for t in targets:
        code = code * len(GENOTYPES) + digit[t]
    joint = np.bincount(code, weights=weight, minlength=len(GENOTYPES) ** len(targets))
    return joint.reshape((len(GENOTYPES),) * len(targets)) / total


def _adaptive_simpson(f, a: float, b: float, tol: float) -> float:
    def estimate(lo, flo, hi, fhi, mid, fmid):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, flo, mid, fmid, hi, fhi, whole, tol, depth):
        lm = (lo + mid) / 2.0
        rm = (mid + hi) / 2.0
        flm, frm = f(lm), f(rm)
        left = estimate(lo, flo, mid, fmid, lm, flm)
        right = estimate(mid, fmid, hi, fhi, rm, frm)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return recurse(lo, flo, lm, flm, mid, fmid, left, tol / 2.0, depth - 1) + recurse(
            mid, fmid, rm, frm, hi, fhi, right, tol / 2.0, depth - 1
        )

    if b <= a:
        return 0.0
    mid = (a + b) / 2.0
    fa, fm, fb = f(a), f(mid), f(b)
    return recurse(a, fa, mid, fm, b, fb, estimate(a, fa, b, fb, mid, fm), tol, 48)


def _segments(tau: float, t: float, hazards) -> list[tuple[float, float]]:
    points = {tau, t}
    for h in hazards:
        points.update(c for c in h.cuts if tau < c < t)
    ordered = sorted(points)
    return list(zip(ordered, ordered[1:]))


def quadrature_incidence(
    alpha: PiecewiseHazard, beta: PiecewiseHazard, tau: float, t: float, tol: float = 1e-10
) -> float:
    """Numerical value of the sub-distribution integral ``∫ alpha(u) S_beta(u) du``.

    ``beta`` is the total exit hazard; its survival ``S_beta`` is anchored at
    ``tau``.  Integrates over ``]tau, t]`` by adaptive quadrature to ``tol``.
    """
    if t <= tau:
        return 0.0
    base = beta.cumulative(tau)
    segments = _segments(tau, t, (alpha, beta))
    total = 0.0
    for lo, hi in segments:
        rate = alpha.rate((lo + hi) / 2.0)
        if rate == 0.0:
            continue

        def f(u, rate=rate):
            return rate * math.exp(base - beta.cumulative(u))

        total += _adaptive_simpson(f, lo, hi, tol / len(segments))
    return total


def quadrature_mixture_incidence(
    pi: float,
    tau: float,
    disease: DiseaseModel,
    death: PiecewiseHazard,
    t: float,
    tol: float = 1e-10,
) -> float:
    """Competing-risk onset probability with the exact carrier-mixture hazard.

    The carrier posterior is ``pi`` at ``tau``; at later ages the carrier and
    non-carrier branches decay by their own survival, so the onset intensity is
    the smoothly reweighted mixture rather than a step function.
    """
    if t <= tau:
        return 0.0
    lam1, lam0 = disease.lambda1, disease.lambda0
    s1_tau = lam1.survival(tau)
    s0_tau = lam0.survival(tau)
    death_base = death.cumulative(tau)
    segments = _segments(tau, t, (lam1, lam0, death))
    total = 0.0
    for lo, hi in segments:
        r1 = lam1.rate((lo + hi) / 2.0)
        r0 = lam0.rate((lo + hi) / 2.0)

        def f(u, r1=r1, r0=r0):
            w1 = pi * lam1.survival(u) / s1_tau
            w0 = (1.0 - pi) * lam0.survival(u) / s0_tau
            return (w1 * r1 + w0 * r0) * math.exp(death_base - death.cumulative(u))

        total += _adaptive_simpson(f, lo, hi, tol / len(segments))
    return total
