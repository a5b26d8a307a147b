"""Named model bundles: genetics + incidence + mortality, built-in or from JSON.

Model config JSON (strict about unknown keys)::

    {"allele_frequency": number,
     "lethal_genotypes": ["11"],                    # optional
     "penetrance": {"carriers": <hazard JSON>,      # optional, default built-in
                    "noncarriers": <hazard JSON>},
     "death": <hazard JSON>}                        # optional, default built-in

Hazard JSON is either ``{"cuts": [...], "rates_per_100000": [...]}`` with one
rate per interval between consecutive cuts plus a final rate held beyond the
last cut (rates before the first cut are 0), or ``{"ages": [...], "F": [...],
"f": [...]}`` giving cumulative probability and density at representative
ages, converted through lambda(t) = f(t) / (1 - F(t)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .genemodel import GeneticModel
from .survival import (
    CLAUS_EASTON_ALLELE_FREQUENCY,
    CLAUS_EASTON_CARRIER_PER_100K,
    CLAUS_EASTON_CUTS,
    CLAUS_EASTON_NONCARRIER_PER_100K,
    FRENCH_DEATH_CUTS,
    FRENCH_DEATH_PER_100K,
    DiseaseModel,
    PiecewiseHazard,
    builtin_claus_easton,
    builtin_french_death,
    hazard_from_penetrance,
)
from .tables import GENOTYPES

__all__ = [
    "ModelBundle",
    "ModelConfigError",
    "default_model",
    "load_hazard",
    "load_model_config",
    "model_catalog",
]


class ModelConfigError(ValueError):
    """The model configuration is malformed or inconsistent."""


@dataclass(frozen=True)
class ModelBundle:
    """Everything one analysis needs to know about the disease model."""

    name: str
    genetics: GeneticModel
    disease: DiseaseModel
    death: PiecewiseHazard
    lethal_genotypes: frozenset[str] = frozenset()

    def lethal_constraints(self, pedigree) -> dict[str, frozenset] | None:
        """Per-individual genotype constraints excluding the lethal genotypes."""
        if not self.lethal_genotypes:
            return None
        allowed = frozenset(GENOTYPES) - self.lethal_genotypes
        return {ind.id: allowed for ind in pedigree.individuals}


def default_model() -> ModelBundle:
    disease, frequency = builtin_claus_easton()
    return ModelBundle(
        name="claus-easton",
        genetics=GeneticModel.default(frequency),
        disease=disease,
        death=builtin_french_death(),
    )


def _expect_numbers(values, where: str) -> tuple[float, ...]:
    if not isinstance(values, list) or not all(isinstance(v, (int, float)) for v in values):
        raise ModelConfigError(f"{where} must be a list of numbers")
    return tuple(float(v) for v in values)


def load_hazard(doc) -> PiecewiseHazard:
    """Build a hazard from one of the two accepted JSON forms."""
    if not isinstance(doc, dict):
        raise ModelConfigError("hazard must be a JSON object")
    keys = set(doc)
    if keys == {"cuts", "rates_per_100000"}:
        cuts = _expect_numbers(doc["cuts"], '"cuts"')
        rates = _expect_numbers(doc["rates_per_100000"], '"rates_per_100000"')
        # Either one rate per interval between cuts (the last one doubling as
        # the tail beyond the final cut) or one extra rate naming the tail.
        if len(rates) not in (len(cuts) - 1, len(cuts)) or len(rates) == 0:
            raise ModelConfigError(
                f"expected {len(cuts) - 1} or {len(cuts)} rates for {len(cuts)} cuts, "
                f"got {len(rates)}"
            )
        interval_rates = rates[: len(cuts) - 1]
        try:
            return PiecewiseHazard(
                cuts=cuts,
                rates=tuple(r / 1e5 for r in interval_rates),
                pre_rate=0.0,
                tail_rate=rates[-1] / 1e5,
            )
        except ValueError as exc:
            raise ModelConfigError(str(exc)) from exc
    if keys == {"ages", "F", "f"}:
        ages = _expect_numbers(doc["ages"], '"ages"')
        cumulative = _expect_numbers(doc["F"], '"F"')
        dens = _expect_numbers(doc["f"], '"f"')
        try:
            return hazard_from_penetrance(ages, cumulative, dens)
        except ValueError as exc:
            raise ModelConfigError(str(exc)) from exc
    raise ModelConfigError(
        'hazard needs keys {"cuts", "rates_per_100000"} or {"ages", "F", "f"}, '
        f"got {sorted(keys)}"
    )


_MODEL_KEYS = {"allele_frequency", "lethal_genotypes", "penetrance", "death"}


def load_model_config(source) -> ModelBundle:
    """Model bundle from a JSON document (dict, text, bytes or file path)."""
    if isinstance(source, ModelBundle):
        return source
    if isinstance(source, dict):
        doc = source
    else:
        if hasattr(source, "read"):
            raw = source.read()
        elif isinstance(source, (str, bytes)):
            raw = source
        else:
            with open(source, "rb") as fh:
                raw = fh.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ModelConfigError(f"malformed model JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelConfigError("model config must be a JSON object")
    unknown = set(doc) - _MODEL_KEYS
    if unknown:
        raise ModelConfigError(f"unknown keys {sorted(unknown)} in model config")
    if "allele_frequency" not in doc or not isinstance(doc["allele_frequency"], (int, float)):
        raise ModelConfigError('"allele_frequency" (number) is required')

    try:
        genetics = GeneticModel.default(float(doc["allele_frequency"]))
    except ValueError as exc:
        raise ModelConfigError(str(exc)) from exc

    lethal = frozenset()
    if "lethal_genotypes" in doc:
        entries = doc["lethal_genotypes"]
        if not isinstance(entries, list) or not all(isinstance(g, str) for g in entries):
            raise ModelConfigError('"lethal_genotypes" must be a list of genotype strings')
        lethal = frozenset(entries)
        bad = lethal - set(GENOTYPES)
        if bad:
            raise ModelConfigError(f"unknown lethal genotypes {sorted(bad)}")
        if lethal >= set(GENOTYPES):
            raise ModelConfigError("at least one genotype must stay viable")

    if "penetrance" in doc:
        pen = doc["penetrance"]
        if not isinstance(pen, dict) or set(pen) != {"carriers", "noncarriers"}:
            raise ModelConfigError('"penetrance" needs exactly "carriers" and "noncarriers"')
        disease = DiseaseModel(
            lambda0=load_hazard(pen["noncarriers"]), lambda1=load_hazard(pen["carriers"])
        )
    else:
        disease, _ = builtin_claus_easton()

    death = load_hazard(doc["death"]) if "death" in doc else builtin_french_death()
    return ModelBundle(
        name="custom",
        genetics=genetics,
        disease=disease,
        death=death,
        lethal_genotypes=lethal,
    )


def model_catalog() -> list[dict]:
    """Built-in models with their parameters echoed, for discovery endpoints."""
    return [
        {
            "name": "claus-easton",
            "allele_frequency": CLAUS_EASTON_ALLELE_FREQUENCY,
            "penetrance": {
                "carriers": {
                    "cuts": list(CLAUS_EASTON_CUTS),
                    "rates_per_100000": list(CLAUS_EASTON_CARRIER_PER_100K),
                },
                "noncarriers": {
                    "cuts": list(CLAUS_EASTON_CUTS),
                    "rates_per_100000": list(CLAUS_EASTON_NONCARRIER_PER_100K),
                },
            },
            "death": {
                "cuts": list(FRENCH_DEATH_CUTS),
                "rates_per_100000": list(FRENCH_DEATH_PER_100K),
            },
        }
    ]
