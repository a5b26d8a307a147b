"""One analysis pass answering a batch of queries, shared by server and CLI.

The request names a pedigree, an optional model and a list of queries.  A
single belief-propagation sweep answers the posterior query and seeds every
risk query whose censoring age matches the recorded phenotype; only risk
queries with an overridden age and joint queries spanning several cliques
need further sweeps.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from .inference import (
    InfeasibleEvidenceError,
    PosteriorResult,
    carrier_probability_at,
    compute_posterior,
    joint_posterior,
)
from .models import ModelBundle, default_model, load_model_config
from .pedigree import Pedigree
from .risk import RiskQuery, RiskQueryError, risk_curve
from .tables import GENOTYPES

__all__ = ["resolve_model", "analysis_response"]

_QUERY_TYPES = ("posterior", "risk", "joint")


def resolve_model(doc=None) -> ModelBundle:
    """Model bundle from a request document; ``None`` means the built-in model."""
    if doc is None:
        return default_model()
    return load_model_config(doc)


def _marginal_payload(base: PosteriorResult) -> dict:
    return {
        ind_id: dict(zip(GENOTYPES, (float(p) for p in dist)))
        for ind_id, dist in base.marginals.items()
    }


def _risk_payload(
    pedigree: Pedigree,
    base: PosteriorResult,
    bundle: ModelBundle,
    constraints,
    query: Mapping,
    engine: str,
) -> dict:
    individual_id = query.get("individual")
    if individual_id is None:
        raise ValueError('risk query needs an "individual"')
    if individual_id not in pedigree:
        raise KeyError(f"unknown individual {individual_id!r} in risk query")
    individual = pedigree[individual_id]
    if individual.phenotype is not None and individual.phenotype.kind == "affected":
        raise RiskQueryError(
            f"individual {individual_id!r} is already diagnosed; onset risk is undefined"
        )

    tau = query.get("tau")
    if tau is None:
        if individual.phenotype is None:
            raise RiskQueryError(
                f"individual {individual_id!r} has no censoring age; provide tau"
            )
        tau = individual.phenotype.age
    tau = float(tau)

    recorded = individual.phenotype
    if recorded is not None and math.isclose(tau, recorded.age):
        pi = base.carrier_probability[individual_id]
    else:
        pi = carrier_probability_at(
            pedigree,
            individual_id,
            tau,
            bundle.genetics,
            bundle.disease,
            engine=engine,
            constraints=constraints,
        )

    q = RiskQuery(
        pi=pi,
        tau=tau,
        disease=bundle.disease,
        death=bundle.death,
        t_max=float(query.get("tmax", 100.0)),
        delta_t=float(query.get("dt", 0.1)),
    )
    payload = {"individual": individual_id}
    payload.update(risk_curve(q).to_dict())
    return payload


def _joint_payload(
    pedigree: Pedigree,
    bundle: ModelBundle,
    constraints,
    query: Mapping,
) -> dict:
    individuals = query.get("individuals")
    if not individuals:
        raise ValueError('joint query needs a non-empty "individuals" list')
    table = joint_posterior(
        pedigree,
        tuple(individuals),
        bundle.genetics,
        bundle.disease,
        constraints=constraints,
    )
    return {
        "individuals": list(individuals),
        "genotypes": list(GENOTYPES),
        "probabilities": table.values.tolist(),
    }


def analysis_response(
    pedigree: Pedigree,
    bundle: ModelBundle | None = None,
    queries: Sequence[Mapping] = (),
    engine: str = "bp",
) -> dict:
    """Answer every query against one pedigree; JSON-ready dict.

    Raises :class:`~pedrisk.inference.InfeasibleEvidenceError` when the
    recorded history has probability zero, :class:`~pedrisk.risk.RiskQueryError`
    for a risk query on a diagnosed individual, and plain
    ``ValueError``/``KeyError`` for malformed queries.
    """
    bundle = bundle or default_model()
    constraints = bundle.lethal_constraints(pedigree)

    for query in queries:
        kind = query.get("type")
        if kind not in _QUERY_TYPES:
            raise ValueError(f"unknown query type {kind!r}; expected one of {_QUERY_TYPES}")

    base = compute_posterior(
        pedigree, bundle.genetics, bundle.disease, engine=engine, constraints=constraints
    )
    if not base.feasible:
        raise InfeasibleEvidenceError(base.explanation)

    response: dict = {
        "log_evidence": float(base.log_evidence),
        "tree_stats": base.tree_stats,
        "warnings": [],
    }
    for query in queries:
        kind = query["type"]
        if kind == "posterior":
            response["marginals"] = _marginal_payload(base)
            response["carrier_probability"] = {
                i: float(p) for i, p in base.carrier_probability.items()
            }
        elif kind == "risk":
            response.setdefault("curves", []).append(
                _risk_payload(pedigree, base, bundle, constraints, query, engine)
            )
        else:
            response.setdefault("joints", []).append(
                _joint_payload(pedigree, bundle, constraints, query)
            )
    return response
