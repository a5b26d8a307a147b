"""Piecewise-constant-hazard survival math and the built-in rate tables.

A :class:`PiecewiseHazard` is defined by strictly increasing cut ages
``c0 < c1 < ... < cN`` together with one rate per interval ``]c_{j-1}, c_j]``,
a ``pre_rate`` on ``[0, c0]`` and a ``tail_rate`` beyond ``cN``.  Cumulative
hazards are exact closed-form sums, so survival values are reliable even at
extreme ages (everything is computed in log space and only exponentiated at
the end).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PiecewiseHazard",
    "DiseaseModel",
    "cumulative_hazard",
    "survival",
    "density",
    "hazard_from_penetrance",
    "builtin_claus_easton",
    "builtin_french_death",
    "CLAUS_EASTON_CUTS",
    "CLAUS_EASTON_NONCARRIER_PER_100K",
    "CLAUS_EASTON_CARRIER_PER_100K",
    "CLAUS_EASTON_ALLELE_FREQUENCY",
    "FRENCH_DEATH_CUTS",
    "FRENCH_DEATH_PER_100K",
]


@dataclass(frozen=True)
class PiecewiseHazard:
    """Hazard rate that is constant on each interval between cut ages.

    ``rate(t)`` equals ``pre_rate`` on ``[0, c0]``, ``rates[j]`` on
    ``]c_j, c_{j+1}]`` and ``tail_rate`` for ``t > cN``.
    """

    cuts: tuple[float, ...]
    rates: tuple[float, ...]
    pre_rate: float = 0.0
    tail_rate: float | None = None

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cuts)
        rates = tuple(float(r) for r in self.rates)
        if len(cuts) == 0:
            raise ValueError("at least one cut age is required")
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cut ages must be strictly increasing")
        if len(rates) != len(cuts) - 1:
            raise ValueError(
                f"expected {len(cuts) - 1} rates for {len(cuts)} cuts, got {len(rates)}"
            )
        if cuts[0] < 0:
            raise ValueError("cut ages must be nonnegative")
        tail = self.tail_rate
        if tail is None:
            tail = rates[-1] if rates else self.pre_rate
        if self.pre_rate < 0 or tail < 0 or any(r < 0 for r in rates):
            raise ValueError("hazard rates must be nonnegative")
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "pre_rate", float(self.pre_rate))
        object.__setattr__(self, "tail_rate", float(tail))
        # Segment representation used by the vectorised evaluators:
        # knots [0, c0, ..., cN] with one rate per segment (tail is open-ended).
        knots = np.concatenate(([0.0], np.asarray(cuts)))
        seg_rates = np.concatenate(([self.pre_rate], np.asarray(rates), [tail]))
        object.__setattr__(self, "_knots", knots)
        object.__setattr__(self, "_seg_rates", seg_rates)

    @classmethod
    def constant(cls, rate: float, anchor: float = 1.0) -> "PiecewiseHazard":
        """Hazard equal to ``rate`` at every age."""
        return cls(cuts=(anchor,), rates=(), pre_rate=rate, tail_rate=rate)

    @classmethod
    def zero(cls) -> "PiecewiseHazard":
        return cls.constant(0.0)

    def rate(self, t):
        """Hazard at age ``t`` (scalar or array); right edge belongs to its interval."""
        t = np.asarray(t, dtype=float)
        # Segment index such that t in ]knot[i], knot[i+1]]; t == 0 maps to pre_rate.
        idx = np.searchsorted(self._knots, t, side="left")
        idx = np.clip(idx - 1, 0, len(self._seg_rates) - 1)
        out = self._seg_rates[idx]
        return float(out) if out.ndim == 0 else out

    def cumulative(self, t):
        """Integral of the hazard from 0 to ``t``, exact closed form."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("age must be nonnegative")
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)[:, None]
        left = self._knots[None, :]
        right = np.concatenate((self._knots[1:], [np.inf]))[None, :]
        width = np.clip(np.minimum(tt, right) - left, 0.0, None)
        out = width @ self._seg_rates
        return float(out[0]) if scalar else out

    def log_survival(self, t):
        return -self.cumulative(t)

    def survival(self, t):
        """P(no event by ``t``) = exp(-cumulative hazard)."""
        return np.exp(-self.cumulative(t))

    def density(self, t):
        """Event density rate(t) * survival(t)."""
        return self.rate(t) * self.survival(t)

    def max_cut(self) -> float:
        return self.cuts[-1]


@dataclass(frozen=True)
class DiseaseModel:
    """Disease incidence split by carrier status."""

    lambda0: PiecewiseHazard  # non-carriers
    lambda1: PiecewiseHazard  # carriers

    def hazard(self, carrier: bool) -> PiecewiseHazard:
        return self.lambda1 if carrier else self.lambda0


def cumulative_hazard(h: PiecewiseHazard, t) -> float:
    return h.cumulative(t)


def survival(h: PiecewiseHazard, t) -> float:
    return h.survival(t)


def density(h: PiecewiseHazard, t) -> float:
    return h.density(t)


def hazard_from_penetrance(
    ages,
    cumulative,
    dens,
    cuts=None,
    pre_rate: float = 0.0,
) -> PiecewiseHazard:
    """Convert tabulated penetrance F and density f into a piecewise hazard.

    Each ``ages[j]`` is the representative age of one interval and contributes
    the rate ``f(age)/(1 - F(age))``.  When ``cuts`` is omitted, interval
    boundaries are the midpoints between consecutive representative ages (the
    leading boundary mirrors the first gap, clipped at 0); the last age
    parameterises the open tail.
    """
    ages = [float(a) for a in ages]
    F = [float(v) for v in cumulative]
    f = [float(v) for v in dens]
    if not (len(ages) == len(F) == len(f)):
        raise ValueError("ages, cumulative and density must have equal length")
    if len(ages) < 2:
        raise ValueError("need at least two tabulated ages")
    if any(b <= a for a, b in zip(ages, ages[1:])):
        raise ValueError("ages must be strictly increasing")
    if any(v >= 1.0 for v in F):
        raise ValueError("cumulative probability must stay below 1")
    ratios = [fi / (1.0 - Fi) for fi, Fi in zip(f, F)]
    if cuts is None:
        mids = [(a + b) / 2.0 for a, b in zip(ages, ages[1:])]
        lead = max(0.0, ages[0] - (ages[1] - ages[0]) / 2.0)
        cuts = [lead] + mids
    cuts = [float(c) for c in cuts]
    if len(cuts) != len(ages):
        raise ValueError("expected one cut below each representative age")
    # rates[j] covers ]cuts[j], cuts[j+1]]; the final ratio becomes the tail.
    return PiecewiseHazard(
        cuts=tuple(cuts),
        rates=tuple(ratios[:-1]),
        pre_rate=pre_rate,
        tail_rate=ratios[-1],
    )


# Breast-cancer incidence (annual, per 100,000) by decade of age, with the
# final column extending beyond age 80, plus the estimated frequency of the
# deleterious allele.
CLAUS_EASTON_CUTS = (20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0)
CLAUS_EASTON_NONCARRIER_PER_100K = (2.00, 26.04, 112.94, 139.94, 235.17, 232.16, 232.03)
CLAUS_EASTON_CARRIER_PER_100K = (
    168.35,
    1391.49,
    3153.21,
    3222.22,
    3281.25,
    3289.86,
    3286.43,
)
CLAUS_EASTON_ALLELE_FREQUENCY = 0.0033

# Annual female death incidence (per 100,000), metropolitan France 2012-2014.
FRENCH_DEATH_CUTS = (
    20.0,
    30.0,
    40.0,
    50.0,
    60.0,
    70.0,
    80.0,
    85.0,
    90.0,
    95.0,
    99.0,
    100.0,
    101.0,
    102.0,
    103.0,
)
FRENCH_DEATH_PER_100K = (
    23.85375,
    46.86641,
    130.5396,
    308.9539,
    599.914,
    1493.6,
    3845.406,
    8114.203,
    16400.99,
    27912.22,
    35644.0,
    38696.22,
    43033.07,
    45647.85,
)


def _per_100k(values) -> tuple[float, ...]:
    return tuple(v / 1e5 for v in values)


def builtin_claus_easton() -> tuple[DiseaseModel, float]:
    """Built-in breast-cancer model: carrier/non-carrier incidence and allele frequency.

    Rates below the first cut are 0; the last tabulated rate is held constant
    beyond the final cut.
    """
    lam0 = PiecewiseHazard(
        cuts=CLAUS_EASTON_CUTS,
        rates=_per_100k(CLAUS_EASTON_NONCARRIER_PER_100K[:-1]),
        pre_rate=0.0,
        tail_rate=CLAUS_EASTON_NONCARRIER_PER_100K[-1] / 1e5,
    )
    lam1 = PiecewiseHazard(
        cuts=CLAUS_EASTON_CUTS,
        rates=_per_100k(CLAUS_EASTON_CARRIER_PER_100K[:-1]),
        pre_rate=0.0,
        tail_rate=CLAUS_EASTON_CARRIER_PER_100K[-1] / 1e5,
    )
    return DiseaseModel(lambda0=lam0, lambda1=lam1), CLAUS_EASTON_ALLELE_FREQUENCY


def builtin_french_death() -> PiecewiseHazard:
    """Built-in all-cause female death incidence (held constant beyond the last cut).

    One rate per interval between consecutive cuts; the last one also serves
    as the tail rate beyond the final cut.
    """
    return PiecewiseHazard(
        cuts=FRENCH_DEATH_CUTS,
        rates=_per_100k(FRENCH_DEATH_PER_100K),
        pre_rate=0.0,
        tail_rate=FRENCH_DEATH_PER_100K[-1] / 1e5,
    )
