"""Genotype-table algebra: products, marginalization, normalization."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pedrisk.tables import GENOTYPES, GenotypeTable, product_of


def test_axis_order_is_scope_order():
    t = GenotypeTable.from_mapping("a", {g: i for i, g in enumerate(GENOTYPES)})
    assert t.scope == ("a",)
    assert list(t.values) == [0.0, 1.0, 2.0, 3.0]


def test_product_aligns_shared_variables():
    ta = GenotypeTable.from_mapping("a", {"00": 1, "01": 2, "10": 3, "11": 4})
    tb = GenotypeTable.from_mapping("a", {"00": 5, "01": 6, "10": 7, "11": 8})
    assert np.allclose(ta.product(tb).values, [5, 12, 21, 32])


def test_product_broadcasts_disjoint_scopes():
    ta = GenotypeTable.from_mapping("a", {"00": 1, "01": 2, "10": 3, "11": 4})
    tb = GenotypeTable.from_mapping("b", {"00": 10, "01": 20, "10": 30, "11": 40})
    full = ta.product(tb).transpose(("a", "b")).values
    assert np.allclose(full, np.outer([1, 2, 3, 4], [10, 20, 30, 40]))


def test_marginalize_sums_out_dropped_axes():
    rng = np.random.default_rng(0)
    t = GenotypeTable(("a", "b"), rng.uniform(size=(4, 4)))
    assert np.allclose(t.marginalize(("a",)).values, t.values.sum(axis=1))
    assert np.allclose(t.marginalize(()).values, t.values.sum())


def test_marginalize_reorders_to_keep_order():
    rng = np.random.default_rng(1)
    t = GenotypeTable(("a", "b", "c"), rng.uniform(size=(4, 4, 4)))
    out = t.marginalize(("c", "a"))
    assert out.scope == ("c", "a")
    assert np.allclose(out.values, t.values.sum(axis=1).T)


def test_marginalize_rejects_unknown_variable():
    t = GenotypeTable.ones(("a",))
    with pytest.raises(ValueError):
        t.marginalize(("b",))


def test_normalized_sums_to_one():
    t = GenotypeTable(("a",), np.array([1.0, 1.0, 2.0, 4.0]))
    assert np.isclose(t.normalized().values.sum(), 1.0)


def test_normalizing_a_zero_table_fails():
    t = GenotypeTable(("a",), np.zeros(4))
    with pytest.raises(ZeroDivisionError):
        t.normalized()


def test_log_total_of_zero_table_is_minus_inf():
    assert GenotypeTable(("a",), np.zeros(4)).log_total() == -math.inf


def test_rescaled_tracks_log_scale():
    t = GenotypeTable(("a",), np.array([1e-280, 2e-280, 3e-280, 4e-280]))
    r = t.rescaled()
    assert np.isclose(r.values.max(), 1.0)
    assert np.isclose(r.log_total(), t.log_total())


def test_log_total_survives_underflow():
    # 1000 nats below 1: a plain product of values would flush to zero.
    t = GenotypeTable(("a",), np.full(4, 1e-200), log_scale=-1000.0)
    assert np.isclose(t.log_total(), -1000.0 + math.log(4e-200))


def test_shape_must_match_scope():
    with pytest.raises(ValueError):
        GenotypeTable(("a", "b"), np.ones(4))
    with pytest.raises(ValueError):
        GenotypeTable(("a", "a"), np.ones((4, 4)))


@given(st.integers(0, 2**31 - 1))
def test_product_total_matches_dense_computation(seed):
    gen = np.random.default_rng(seed)
    names = ("a", "b", "c")
    scope_a = tuple(v for v in names if gen.random() < 0.6)
    scope_b = tuple(v for v in names if gen.random() < 0.6)
    ta = GenotypeTable(scope_a, gen.uniform(0.1, 1.0, size=(4,) * len(scope_a)))
    tb = GenotypeTable(scope_b, gen.uniform(0.1, 1.0, size=(4,) * len(scope_b)))
    prod = ta.product(tb)
    dense = (ta._expanded(prod.scope) * tb._expanded(prod.scope)).sum()
    assert np.isclose(prod.total(), dense)
    assert prod.log_scale == ta.log_scale + tb.log_scale


def test_product_of_uses_scope_hint_ordering():
    t = product_of(
        [GenotypeTable.from_mapping("b", {g: 1.0 for g in GENOTYPES})],
        scope_hint=("a", "b"),
    )
    assert t.scope == ("a", "b")
