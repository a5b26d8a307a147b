"""Exact genotype posteriors and disease-risk curves from family history.

The package models a rare autosomal dominant risk allele with age-dependent
penetrance.  Genotype inference runs by belief propagation on a junction
tree built from the pedigree, so mating loops cost nothing special; risk
curves follow from closed-form survival mixtures with an optional competing
risk of death.
"""

from .families import counseling_family, looped_family
from .genemodel import CARRIER_GENOTYPES, GeneticModel
from .inference import (
    InfeasibleEvidenceError,
    PosteriorResult,
    carrier_probability_at,
    compute_posterior,
    joint_posterior,
)
from .jtree import JunctionTree, build_junction_tree, junction_tree_for
from .models import ModelBundle, ModelConfigError, default_model, load_model_config, model_catalog
from .pedigree import (
    GeneticTestResult,
    Individual,
    Pedigree,
    PedigreeError,
    PedigreeParseError,
    PedigreeValidationError,
    PhenotypeEvent,
    load_pedigree,
    pedigree_from_dict,
    serialize_pedigree,
)
from .risk import (
    RiskCurve,
    RiskQuery,
    RiskQueryError,
    risk_curve,
    risk_curve_from_pedigree,
    risk_difference_at_tmax,
)
from .survival import DiseaseModel, PiecewiseHazard, builtin_claus_easton, builtin_french_death
from .tables import GENOTYPES, GenotypeTable

__version__ = "0.1.0"

__all__ = [
    "GENOTYPES",
    "CARRIER_GENOTYPES",
    "GenotypeTable",
    "GeneticModel",
    "PiecewiseHazard",
    "DiseaseModel",
    "builtin_claus_easton",
    "builtin_french_death",
    "PhenotypeEvent",
    "GeneticTestResult",
    "Individual",
    "Pedigree",
    "PedigreeError",
    "PedigreeParseError",
    "PedigreeValidationError",
    "load_pedigree",
    "pedigree_from_dict",
    "serialize_pedigree",
    "JunctionTree",
    "build_junction_tree",
    "junction_tree_for",
    "InfeasibleEvidenceError",
    "PosteriorResult",
    "compute_posterior",
    "joint_posterior",
    "carrier_probability_at",
    "RiskQuery",
    "RiskCurve",
    "RiskQueryError",
    "risk_curve",
    "risk_curve_from_pedigree",
    "risk_difference_at_tmax",
    "ModelBundle",
    "ModelConfigError",
    "default_model",
    "load_model_config",
    "model_catalog",
    "looped_family",
    "counseling_family",
    "__version__",
]
