"""Closed-form cohomology tables, Kunneth combination, and the localization
prediction, cross-validated against exact kernel counts of the truncated
complexes (the committed fixture is regenerated and compared)."""

import pytest

from equivlab.deformed import graded_euler, spectral_table
from equivlab.geometry import cp1_model, torus_model
from equivlab.geometry.base import ModelSpec, FieldSpec
from equivlab.oracle import (POINT_TABLE, OracleTable, cp1_table,
                             fixture_tables, generate_fixture_tables,
                             kunneth, model_hodge_table, localization_prediction,
                             torus_table, zero_set)


def product_spec(k=0, nl=6, nr=2):
    return ModelSpec(
        kind="product", field=FieldSpec("product_lift", factor="left"),
        left=ModelSpec(kind="cp1", k=k, cutoff=nl, field=FieldSpec("linear")),
        right=ModelSpec(kind="torus", tau=1j, cutoff=nr,
                        field=FieldSpec("constant", c=1.0)))


# --- closed forms vs exact kernel counts ------------------------------------

@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_cp1_tables_cross_validated_spectrally(k):
    counts = cp1_model(k, 8).exact.t0_kernel_counts()
    table = cp1_table(k)
    for p in (0, 1):
        for q in (0, 1):
            assert counts[(p, q)] == table.entry(p, q)


def test_torus_table_cross_validated_spectrally():
    model = torus_model(1j, 2, 1.0)
    table0, _ = spectral_table(model, 0.0)
    assert table0.dims == torus_table().per_degree().dims


def test_fixture_matches_regenerated():
    committed = fixture_tables()
    fresh = generate_fixture_tables()
    assert committed["torus"] == fresh["torus"]
    assert committed["cp1"] == fresh["cp1"]


# --- kunneth ----------------------------------------------------------------

def test_kunneth_point_identity():
    t = cp1_table(2)
    assert kunneth(t, POINT_TABLE).h == t.h


def test_kunneth_torus_square():
    sq = kunneth(torus_table(), torus_table())
    assert sq.entry(1, 1) == 4
    assert sq.n == 2
    # per-degree profile is the convolution of (1, 2, 1) with itself
    assert sq.per_degree().dims == {-2: 1, -1: 4, 0: 6, 1: 4, 2: 1}


def test_kunneth_cp1_times_torus():
    prod = kunneth(cp1_table(0), torus_table())
    assert prod.per_degree().dims == {-2: 0, -1: 2, 0: 4, 1: 2, 2: 0}


def test_model_hodge_table_product():
    spec = product_spec()
    assert model_hodge_table(spec).h == kunneth(cp1_table(0),
                                                torus_table()).h


# --- localization prediction -------------------------------------------------

@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_prediction_independent_of_twist(k):
    spec = ModelSpec(kind="cp1", k=k, cutoff=8, field=FieldSpec("linear"))
    assert localization_prediction(spec).dims == {-1: 0, 0: 2, 1: 0}


def test_prediction_empty_zero_set():
    spec = ModelSpec(kind="torus", tau=1j, cutoff=3,
                     field=FieldSpec("constant", c=2.0))
    assert all(v == 0 for v in localization_prediction(spec).dims.values())


def test_prediction_positive_dimensional():
    assert localization_prediction(product_spec()).dims == {
        -2: 0, -1: 2, 0: 4, 1: 2, 2: 0}


def test_zero_set_descriptors():
    assert len(zero_set(product_spec()).components) == 2
    assert all(dim == 1 for dim, _, _ in zero_set(product_spec()).components)
    assert zero_set(ModelSpec(kind="torus", tau=1j, cutoff=2,
                              field=FieldSpec("constant", c=1.0))
                    ).components == ()


def test_prediction_matches_spectral_counts_end_to_end():
    for k in (0, 1):
        model = cp1_model(k, 8)
        table, _ = spectral_table(model, 4.0)
        assert table == localization_prediction(model.spec)


def test_index_theorem_consistency():
    # the graded Euler characteristic of the undeformed table equals that of
    # the prediction: the pairing is deformation invariant
    for k in (0, 1, 2, 3):
        spec = ModelSpec(kind="cp1", k=k, cutoff=8, field=FieldSpec("linear"))
        assert (graded_euler(cp1_table(k).per_degree())
                == graded_euler(localization_prediction(spec)) == 2)


def test_out_of_square_entries_rejected():
    with pytest.raises(ValueError):
        OracleTable.make(1, {(2, 0): 1})
