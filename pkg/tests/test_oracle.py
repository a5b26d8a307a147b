"""Regression pins for the reference implementations.

The enumeration and quadrature oracles back most other test files, so they
get their own anchors here: closed-form values where one exists, and frozen
full-precision posteriors for the two built-in families.  The frozen numbers
were cross-checked between both engines when recorded; any drift in either
one trips these tests.
"""

import math

import numpy as np
import pytest

from pedrisk import counseling_family, looped_family
from pedrisk.inference import compute_posterior
from pedrisk.oracle import (
    MAX_ENUMERATION,
    _adaptive_simpson,
    enumerate_posterior,
    quadrature_incidence,
    quadrature_mixture_incidence,
)
from pedrisk.pedigree import Individual, Pedigree
from pedrisk.survival import DiseaseModel, PiecewiseHazard

LOOPED_LOG_EVIDENCE = -20.35387490289781
LOOPED_CARRIER = {
    "1": 0.08072964615315449,
    "2": 0.8741173524882883,
    "3": 0.01460864890440126,
    "4": 0.003730877331011961,
    "5": 0.8991868034286218,
    "6": 0.8973678668992237,
    "7": 0.014274862674540551,
    "8": 0.014499330423841954,
    "9": 0.005853591923170653,
    "10": 0.8942938815463538,
    "11": 0.8923735468804384,
    "12": 0.4350097089386281,
}

# stage -> (log evidence, counselee carrier posterior)
COUNSELING_PINS = {
    1: (0.0, 0.006589109999999998),
    2: (-6.504209590840628, 0.04608552221298315),
    3: (-6.5602714512554225, 0.034204462653987876),
    4: (-16.618494341863695, 0.22577053899328875),
    5: (-22.357794626194764, 0.16642896526095557),
    6: (-22.019492364653733, 0.25605500424308436),
}


def test_looped_family_pins_hold_for_both_engines():
    ped = looped_family()
    result = compute_posterior(ped)
    log_z, marginals = enumerate_posterior(ped)
    assert result.log_evidence == pytest.approx(LOOPED_LOG_EVIDENCE, rel=1e-12)
    assert log_z == pytest.approx(LOOPED_LOG_EVIDENCE, rel=1e-12)
    carrier_states = slice(1, None)
    for ind_id, pinned in LOOPED_CARRIER.items():
        assert result.carrier_probability[ind_id] == pytest.approx(pinned, rel=1e-10)
        assert marginals[ind_id][carrier_states].sum() == pytest.approx(pinned, rel=1e-10)


def test_counseling_stage_pins_hold_for_both_engines():
    for stage, (log_z_pin, p4_pin) in COUNSELING_PINS.items():
        ped = counseling_family(stage)
        result = compute_posterior(ped)
        log_z, marginals = enumerate_posterior(ped)
        assert result.log_evidence == pytest.approx(log_z_pin, abs=1e-10)
        assert log_z == pytest.approx(log_z_pin, abs=1e-10)
        assert result.carrier_probability["4"] == pytest.approx(p4_pin, rel=1e-10)
        assert marginals["4"][1:].sum() == pytest.approx(p4_pin, rel=1e-10)


def test_counseling_story_updates_in_the_expected_direction():
    p = {stage: pin for stage, (_, pin) in COUNSELING_PINS.items()}
    assert p[1] == pytest.approx(0.00658911, abs=1e-9)  # no data, prior only
    assert p[2] > p[1]  # affected mother
    assert p[3] < p[2]  # healthy sister explains some risk away
    assert p[4] > p[3]  # young affected niece
    assert p[5] < p[4]  # affected maternal grandfather of the niece
    assert p[6] > p[5]  # niece's father is the counselee's brother again


def test_enumeration_rejects_oversized_pedigrees():
    members = [Individual(str(k)) for k in range(MAX_ENUMERATION + 1)]
    with pytest.raises(ValueError, match="exceeds"):
        enumerate_posterior(Pedigree(tuple(members)))


def test_adaptive_simpson_integrates_cubics_exactly():
    value = _adaptive_simpson(lambda x: x**3 - 2.0 * x + 1.0, 0.0, 2.0, 1e-12)
    assert value == pytest.approx(2.0, abs=1e-13)
    assert _adaptive_simpson(lambda x: x, 5.0, 5.0, 1e-12) == 0.0


def test_incidence_matches_constant_rate_closed_form():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a, b_extra = rng.uniform(1e-4, 0.2, size=2)
        b = a + b_extra
        tau = rng.uniform(0.0, 40.0)
        t = tau + rng.uniform(0.5, 40.0)
        got = quadrature_incidence(
            PiecewiseHazard.constant(a), PiecewiseHazard.constant(b), tau, t
        )
        expected = a / b * (1.0 - math.exp(-b * (t - tau)))
        assert got == pytest.approx(expected, rel=1e-9)


def test_incidence_hand_value():
    got = quadrature_incidence(
        PiecewiseHazard.constant(0.01), PiecewiseHazard.constant(0.03), 0.0, 10.0
    )
    assert got == pytest.approx((1.0 - math.exp(-0.3)) / 3.0, rel=1e-10)
    assert got == pytest.approx(0.086394, abs=5e-7)


def test_incidence_splits_at_hazard_cuts():
    alpha = PiecewiseHazard(cuts=(30.0,), rates=(), pre_rate=0.0, tail_rate=0.05)
    beta = PiecewiseHazard(cuts=(30.0,), rates=(), pre_rate=0.02, tail_rate=0.07)
    # Before the cut only beta acts; after it the constant closed form applies.
    got = quadrature_incidence(alpha, beta, 25.0, 45.0)
    survival_to_cut = math.exp(-0.02 * 5.0)
    expected = survival_to_cut * 0.05 / 0.07 * (1.0 - math.exp(-0.07 * 15.0))
    assert got == pytest.approx(expected, rel=1e-9)


def test_mixture_incidence_reduces_to_pure_branches():
    disease = DiseaseModel(
        lambda1=PiecewiseHazard.constant(0.02), lambda0=PiecewiseHazard.constant(0.001)
    )
    death = PiecewiseHazard.constant(0.01)
    tau, t = 30.0, 60.0
    for pi, onset in ((1.0, disease.lambda1), (0.0, disease.lambda0)):
        mixture = quadrature_mixture_incidence(pi, tau, disease, death, t)
        combined_exit = PiecewiseHazard.constant(onset.tail_rate + death.tail_rate)
        assert mixture == pytest.approx(
            quadrature_incidence(onset, combined_exit, tau, t), rel=1e-9
        )


def test_incidence_is_zero_on_empty_interval():
    disease = DiseaseModel(
        lambda1=PiecewiseHazard.constant(0.02), lambda0=PiecewiseHazard.constant(0.001)
    )
    death = PiecewiseHazard.constant(0.01)
    assert quadrature_incidence(disease.lambda1, death, 40.0, 40.0) == 0.0
    assert quadrature_mixture_incidence(0.5, 40.0, disease, death, 39.0) == 0.0
