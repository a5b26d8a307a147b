"""Posterior disease-risk curves for an unaffected individual.

Given a carrier probability ``pi`` at censoring age ``tau`` (from the
inference module or anywhere else), the closed-form mixture

    S(t) = pi * S1(t)/S1(tau) + (1 - pi) * S0(t)/S0(tau)

yields the survival, the updated carrier probability and the onset hazard at
any later age.  The competing-risk curve discretizes that hazard on a fine
grid aligned with every hazard cut point, adds the death hazard, and
accumulates the exact per-interval sub-distribution mass

    P(onset in ]c_{j-1}, c_j]) = (alpha_j / beta_j) * (S_beta(c_{j-1}) - S_beta(c_j))

which is exact for rates that are constant on each grid interval.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .inference import carrier_probability_at, default_models
from .pedigree import Pedigree
from .survival import DiseaseModel, PiecewiseHazard, builtin_french_death

__all__ = [
    "RiskQuery",
    "RiskCurve",
    "RiskQueryError",
    "posterior_survival",
    "posterior_carrier",
    "posterior_hazard",
    "age_grid",
    "cumulative_incidence_competing",
    "risk_curve",
    "risk_curve_from_pedigree",
    "risk_difference_at_tmax",
]


class RiskQueryError(ValueError):
    """The requested risk curve is not defined (e.g. already-diagnosed individual)."""


@dataclass(frozen=True)
class RiskQuery:
    """Inputs of a risk computation: who knows what at which age."""

    pi: float
    tau: float
    disease: DiseaseModel
    death: PiecewiseHazard | None = None
    t_max: float = 100.0
    delta_t: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.pi <= 1.0:
            raise ValueError(f"carrier probability must be in [0, 1], got {self.pi}")
        if not 0.0 <= self.tau < self.t_max:
            raise ValueError(f"need 0 <= tau < t_max, got tau={self.tau}, t_max={self.t_max}")
        if not self.delta_t > 0.0:
            raise ValueError(f"grid step must be positive, got {self.delta_t}")


def _check_age(q: RiskQuery, t):
    if np.any(np.asarray(t) < q.tau):
        raise ValueError(f"age must be >= tau={q.tau}")


def _mixture_parts(q: RiskQuery, t):
    w1 = q.pi * q.disease.lambda1.survival(t) / q.disease.lambda1.survival(q.tau)
    w0 = (1.0 - q.pi) * q.disease.lambda0.survival(t) / q.disease.lambda0.survival(q.tau)
    return w1, w0


def posterior_survival(q: RiskQuery, t):
    """P(still unaffected at ``t`` | history summarized by (pi, tau))."""
    _check_age(q, t)
    w1, w0 = _mixture_parts(q, t)
    return w1 + w0


def posterior_carrier(q: RiskQuery, t):
    """P(carrier | history, still unaffected at ``t``)."""
    _check_age(q, t)
    w1, w0 = _mixture_parts(q, t)
    return w1 / (w1 + w0)


def posterior_hazard(q: RiskQuery, t):
    """Onset hazard at ``t``: the carrier mixture of lambda1 and lambda0."""
    _check_age(q, t)
    w1, w0 = _mixture_parts(q, t)
    return (w1 * q.disease.lambda1.rate(t) + w0 * q.disease.lambda0.rate(t)) / (w1 + w0)


def age_grid(q: RiskQuery) -> np.ndarray:
    """Grid tau = c_0 < ... < c_N = t_max: regular delta_t steps joined with
    every cut of the disease (and death) hazards, so rates are constant on
    each interval."""
    n = int(math.floor((q.t_max - q.tau) / q.delta_t + 1e-9))
    points = q.tau + q.delta_t * np.arange(n + 1)
    hazards = [q.disease.lambda0, q.disease.lambda1]
    if q.death is not None:
        hazards.append(q.death)
    cuts = [c for h in hazards for c in h.cuts if q.tau < c < q.t_max]
    grid = np.unique(np.concatenate((points, cuts, [q.t_max])))
    grid = grid[np.concatenate(([True], np.diff(grid) > 1e-9))]
    grid[0], grid[-1] = q.tau, q.t_max
    return grid


def _competing_risk(q: RiskQuery, grid: np.ndarray) -> np.ndarray:
    right = grid[1:]
    alpha = np.asarray(posterior_hazard(q, right))
    beta = alpha + q.death.rate(right)
    log_sbeta = np.concatenate(([0.0], np.cumsum(-beta * np.diff(grid))))
    sbeta = np.exp(log_sbeta)
    ratio = np.divide(alpha, beta, out=np.zeros_like(alpha), where=beta > 0)
    return np.concatenate(([0.0], np.cumsum(ratio * (sbeta[:-1] - sbeta[1:]))))


@dataclass(frozen=True)
class RiskCurve:
    """Risk of onset by each grid age, with and without competing mortality."""

    query: RiskQuery
    ages: np.ndarray
    risk_no_competing: np.ndarray
    risk_competing: np.ndarray | None
    posterior_carrier: np.ndarray
    posterior_hazard: np.ndarray

    @property
    def cumulative_risk(self) -> np.ndarray:
        """The headline curve: competing-risk when a death hazard is present."""
        return self.risk_competing if self.risk_competing is not None else self.risk_no_competing

    def to_dict(self) -> dict:
        return {
            "pi": self.query.pi,
            "tau": self.query.tau,
            "ages": [float(a) for a in self.ages],
            "risk_no_competing": [float(r) for r in self.risk_no_competing],
            "risk_competing": (
                None
                if self.risk_competing is None
                else [float(r) for r in self.risk_competing]
            ),
            "posterior_carrier": [float(c) for c in self.posterior_carrier],
            "posterior_hazard": [float(h) for h in self.posterior_hazard],
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("age,risk_no_competing,risk_competing,posterior_carrier,posterior_hazard\n")
        competing = self.risk_competing
        for k, age in enumerate(self.ages):
            mid = "" if competing is None else f"{competing[k]:.7g}"
            out.write(
                f"{age:.7g},{self.risk_no_competing[k]:.7g},{mid},"
                f"{self.posterior_carrier[k]:.7g},{self.posterior_hazard[k]:.7g}\n"
            )
        return out.getvalue()


def risk_curve(q: RiskQuery) -> RiskCurve:
    """Evaluate every curve of a risk query on its grid."""
    grid = age_grid(q)
    return RiskCurve(
        query=q,
        ages=grid,
        risk_no_competing=1.0 - np.asarray(posterior_survival(q, grid)),
        risk_competing=_competing_risk(q, grid) if q.death is not None else None,
        posterior_carrier=np.asarray(posterior_carrier(q, grid)),
        posterior_hazard=np.asarray(posterior_hazard(q, grid)),
    )


def cumulative_incidence_competing(q: RiskQuery) -> RiskCurve:
    """Risk curve with the competing risk of death; the death hazard is required."""
    if q.death is None:
        raise ValueError("competing-risk curve needs a death hazard")
    return risk_curve(q)


def risk_curve_from_pedigree(
    pedigree: Pedigree,
    individual_id: str,
    tau: float | None = None,
    genetics=None,
    disease=None,
    death: PiecewiseHazard | None = None,
    t_max: float = 100.0,
    delta_t: float = 0.1,
    engine: str = "bp",
    constraints=None,
) -> RiskCurve:
    """Risk curve for one family member, carrier probability included.

    ``tau`` defaults to the individual's recorded unaffected age.  ``death``
    defaults to the built-in all-cause table; both with- and without-death
    curves are always present in the result.  Raises :class:`RiskQueryError`
    for an already-diagnosed individual and
    :class:`~pedrisk.inference.InfeasibleEvidenceError` when the family
    history has probability zero.
    """
    if individual_id not in pedigree:
        raise KeyError(f"unknown individual {individual_id!r}")
    if genetics is None or disease is None:
        g, d = default_models()
        genetics = genetics or g
        disease = disease or d
    if death is None:
        death = builtin_french_death()

    individual = pedigree[individual_id]
    if individual.phenotype is not None and individual.phenotype.kind == "affected":
        raise RiskQueryError(
            f"individual {individual_id!r} is already diagnosed; onset risk is undefined"
        )
    if tau is None:
        if individual.phenotype is None:
            raise RiskQueryError(
                f"individual {individual_id!r} has no censoring age; provide tau"
            )
        tau = individual.phenotype.age

    pi = carrier_probability_at(
        pedigree, individual_id, tau, genetics, disease, engine=engine, constraints=constraints
    )
    q = RiskQuery(pi=pi, tau=tau, disease=disease, death=death, t_max=t_max, delta_t=delta_t)
    return risk_curve(q)


def risk_difference_at_tmax(
    pi: float,
    tau: float,
    disease: DiseaseModel | None = None,
    death: PiecewiseHazard | None = None,
    t_max: float = 100.0,
    delta_t: float = 0.1,
) -> float:
    """How much ignoring mortality overstates the risk at ``t_max``."""
    if disease is None:
        _, disease = default_models()
    if death is None:
        death = builtin_french_death()
    curve = risk_curve(RiskQuery(pi, tau, disease, death, t_max, delta_t))
    return float(curve.risk_no_competing[-1] - curve.risk_competing[-1])
