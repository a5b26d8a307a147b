"""Genotype space, founder prior, Mendelian transmission and test likelihoods.

Genotypes are ordered pairs of alleles at one bi-allelic locus, written with
the paternal allele first: ``10`` is a heterozygous carrier whose mutated
allele came from the father.  The default model is autosomal dominant
(carrier = anything but ``00``) with Hardy-Weinberg founder genotypes, but
both the founder prior and the carrier predicate are injectable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .tables import GENOTYPES, GENOTYPE_INDEX, GenotypeTable

__all__ = [
    "GENOTYPES",
    "CARRIER_GENOTYPES",
    "hardy_weinberg",
    "mendelian_transmission",
    "transmission_table",
    "apply_constraint",
    "test_likelihood",
    "GeneticModel",
]

CARRIER_GENOTYPES = ("01", "10", "11")


def _paternal(g: str) -> int:
    return int(g[0])


def _maternal(g: str) -> int:
    return int(g[1])


def hardy_weinberg(f: float) -> dict[str, float]:
    """Founder genotype prior at disease-allele frequency ``f``."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"allele frequency must be in [0, 1], got {f}")
    return {
        "00": (1.0 - f) ** 2,
        "01": f * (1.0 - f),
        "10": f * (1.0 - f),
        "11": f**2,
    }


def _allele_pass_prob(allele: int, parent: str) -> float:
    # A parent passes each of their two alleles with probability 1/2.
    return ((_paternal(parent) == allele) + (_maternal(parent) == allele)) / 2.0


def mendelian_transmission(child: str, father: str, mother: str) -> float:
    """P(child genotype | parental genotypes) under uniform allele pick."""
    return _allele_pass_prob(_paternal(child), father) * _allele_pass_prob(
        _maternal(child), mother
    )


@lru_cache(maxsize=1)
def transmission_table() -> np.ndarray:
    """4x4x4 array T[child, father, mother] of Mendelian probabilities."""
    t = np.zeros((4, 4, 4))
    for c in GENOTYPES:
        for f in GENOTYPES:
            for m in GENOTYPES:
                t[GENOTYPE_INDEX[c], GENOTYPE_INDEX[f], GENOTYPE_INDEX[m]] = (
                    mendelian_transmission(c, f, m)
                )
    t.setflags(write=False)
    return t


def apply_constraint(table: GenotypeTable, allowed, var: str | None = None) -> GenotypeTable:
    """Zero the entries whose ``var`` coordinate lies outside ``allowed``.

    No renormalization happens here; normalization is global, through the
    evidence.  ``var`` defaults to the only variable of a 1-d table.
    """
    allowed = frozenset(allowed)
    if not allowed:
        raise ValueError("allowed genotype set must be non-empty")
    unknown = allowed - set(GENOTYPES)
    if unknown:
        raise ValueError(f"unknown genotypes {sorted(unknown)}")
    if var is None:
        if len(table.scope) != 1:
            raise ValueError("var is required for multi-variable tables")
        var = table.scope[0]
    axis = table.scope.index(var)
    mask_shape = [1] * len(table.scope)
    mask_shape[axis] = 4
    mask = np.array([g in allowed for g in GENOTYPES], dtype=float).reshape(mask_shape)
    return GenotypeTable(table.scope, table.values * mask, table.log_scale)


def test_likelihood(observed: str, sensitivity: float, specificity: float) -> dict[str, float]:
    """P(test result | genotype) for a carrier test with the given error rates."""
    if not 0.0 <= sensitivity <= 1.0 or not 0.0 <= specificity <= 1.0:
        raise ValueError("sensitivity and specificity must be probabilities")
    if observed == "positive":
        return {g: (sensitivity if g != "00" else 1.0 - specificity) for g in GENOTYPES}
    if observed == "negative":
        return {g: (1.0 - sensitivity if g != "00" else specificity) for g in GENOTYPES}
    raise ValueError(f"test result must be 'positive' or 'negative', got {observed!r}")


@dataclass(frozen=True)
class GeneticModel:
    """Founder prior, transmission law and carrier predicate for one locus."""

    allele_frequency: float
    founder_prior: dict[str, float] = None
    transmission: np.ndarray = None
    carrier_predicate: Callable[[str], bool] = None

    def __post_init__(self):
        if self.founder_prior is None:
            object.__setattr__(self, "founder_prior", hardy_weinberg(self.allele_frequency))
        total = sum(self.founder_prior.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"founder prior sums to {total}, expected 1")
        if self.transmission is None:
            object.__setattr__(self, "transmission", transmission_table())
        if self.carrier_predicate is None:
            object.__setattr__(self, "carrier_predicate", lambda g: g != "00")

    @classmethod
    def default(cls, allele_frequency: float) -> "GeneticModel":
        return cls(allele_frequency=allele_frequency)

    def founder_vector(self) -> np.ndarray:
        return np.array([self.founder_prior[g] for g in GENOTYPES])

    def carrier_mask(self) -> np.ndarray:
        return np.array([self.carrier_predicate(g) for g in GENOTYPES], dtype=bool)
