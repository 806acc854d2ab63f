"""Projective-line model: exact Grams against numerical quadrature, exact
closure of the truncated complex, kernel counts, and leakage reporting."""

import math
from fractions import Fraction

import pytest
from scipy import integrate

from equivlab.deformed import assemble_deformed, complex_property_defect
from equivlab.geometry.base import ModelError
from equivlab.geometry.cp1 import (CPSection, Cp1Exact, beta_moment,
                                   block_params, cp1_model, dbar, dbar_star,
                                   dual_field_wedge, embed, field_contract,
                                   l2_pair, weight_exponent)


def quad_gram_entry(a, b, c, d, big_p):
    """(1/pi) int z^{a+d} zbar^{b+c} (1+|z|^2)^{-P} dx dy by 2d quadrature,
    fully independent of the Beta-moment formula."""

    def real_part(r, th):
        phase = math.cos(th * (a + d - b - c))
        return (r ** (a + b + c + d) * phase * (1 + r * r) ** (-big_p)) * r

    val, err = integrate.dblquad(real_part, 0.0, 2 * math.pi,
                                 0.0, 60.0, epsabs=1e-12, epsrel=1e-11)
    return val / math.pi


@pytest.mark.parametrize("entry", [
    (0, 0, 0, 0), (1, 1, 1, 1), (2, 1, 1, 0), (1, 0, 1, 0), (2, 0, 0, 0)])
def test_gram_moments_match_quadrature(entry):
    a, b, c, d = entry
    big_p = 8
    numeric = quad_gram_entry(a, b, c, d, big_p)
    if a - b == c - d:
        exact = float(beta_moment(a + d, big_p))
    else:
        exact = 0.0
    assert abs(numeric - exact) < 1e-8


def test_normalized_volume():
    # <1, 1> = 1 for the trivial twist at cutoff 0 denominators
    assert beta_moment(0, weight_exponent(0, 0, 0, 0)) == 1


def test_block_bounds():
    # degree bounds follow the smooth-extension counting across the chart
    assert block_params(0, 8, 0, 0) == (8, 8, 8)
    assert block_params(2, 8, 1, 0) == (8, 8, 8)
    assert block_params(0, 8, 0, 1) == (9, 9, 7)
    assert block_params(1, 8, 1, 1) == (9, 8, 7)


def test_block_dimensions():
    model = cp1_model(0, 8)
    dims = {pq: sum(c.dims.get(pq, 0) for c in model.cells)
            for pq in ((0, 0), (1, 0), (0, 1), (1, 1))}
    assert dims == {(0, 0): 81, (1, 0): 63, (0, 1): 80, (1, 1): 64}


def test_cutoff_precondition():
    with pytest.raises(ModelError):
        cp1_model(0, 3)
    with pytest.raises(ModelError):
        cp1_model(4, 5)


def test_holomorphic_section_count_borel_weil():
    # twist 2: the undeformed scalar kernel is spanned by 1, z, z^2 at any
    # admissible cutoff
    for cutoff in (4, 6, 8):
        ex = cp1_model(2, cutoff).exact
        assert ex.t0_kernel_counts()[(0, 0)] == 3


def test_field_contraction_exact_and_degree():
    # contraction by z d/dz raises the monomial degree by one and stays in
    # the truncation
    s = CPSection.make(0, 1, 0, 6, {(2, 1): Fraction(1)})
    out = field_contract(s)
    assert out.terms == (((3, 1), Fraction(1)),)
    assert (out.p, out.q, out.den) == (0, 0, 6)


def test_field_vanishes_at_origin():
    # the image of any section under the contraction has no constant term
    s = CPSection.make(0, 1, 0, 6, {(0, 0): Fraction(1), (1, 1): Fraction(2)})
    out = field_contract(s)
    assert all(a >= 1 for (a, _), _ in out.terms)


def test_deformed_square_exact_zero():
    for k, cutoff in ((0, 6), (1, 6), (2, 8)):
        ex = cp1_model(k, cutoff).exact
        for T in (Fraction(0), Fraction(1), Fraction(4), Fraction(7, 3)):
            assert ex.deformed_square_is_zero(T)


def test_assembled_complex_property_float():
    model = cp1_model(1, 8)
    for T in (0.0, 1.0, 4.0):
        assert complex_property_defect(assemble_deformed(model, T)) < 1e-12


def test_dbar_star_is_l2_adjoint():
    # <dbar u, w> = <u, dbar* w> for random pairs, checked with exact
    # pairings on both sides
    k, cutoff = 1, 5
    ex = Cp1Exact(k, cutoff)
    src = ex.blocks[(0, 0)]
    tgt = ex.blocks[(0, 1)]
    for i in (0, 3, 7):
        for j in (0, 4, 11):
            u = src.basis_section(k, i % src.dim)
            w = tgt.basis_section(k, j % tgt.dim)
            lhs = l2_pair(dbar(u), w)
            rhs = l2_pair(u, dbar_star(w))
            assert lhs == rhs
    src = ex.blocks[(1, 0)]
    tgt = ex.blocks[(1, 1)]
    for i in (0, 2, 5):
        for j in (1, 3, 8):
            u = src.basis_section(k, i % src.dim)
            w = tgt.basis_section(k, j % tgt.dim)
            assert l2_pair(dbar(u), w) == l2_pair(u, dbar_star(w))


def test_dual_wedge_is_l2_adjoint_of_contraction():
    k, cutoff = 0, 5
    ex = Cp1Exact(k, cutoff)
    for q in (0, 1):
        src = ex.blocks[(1, q)]
        tgt = ex.blocks[(0, q)]
        for i in (0, 3, 6):
            for j in (0, 5, 9):
                u = src.basis_section(k, i % src.dim)
                w = tgt.basis_section(k, j % tgt.dim)
                lhs = l2_pair(field_contract(u), w)
                rhs = l2_pair(u, dual_field_wedge(w))
                assert lhs == rhs


def test_adjoint_consistency_of_assembled_blocks():
    for k in (0, 2):
        ex = cp1_model(k, 6).exact
        assert ex.adjoint_consistency_defect() == 0.0


def test_embed_preserves_pairings():
    s = CPSection.make(0, 0, 0, 4, {(1, 1): Fraction(2), (0, 0): Fraction(-1)})
    t = CPSection.make(0, 0, 0, 4, {(1, 1): Fraction(1)})
    assert l2_pair(embed(s, 6), t) == l2_pair(s, t)


def test_operator_leakage_zero_and_dual_wedge_reported():
    model = cp1_model(0, 8)
    for key, val in model.leakage.items():
        if key.startswith(("dbar", "iv")):
            assert val == 0.0
    duals = [v for key, v in model.leakage.items()
             if key.startswith("dual_wedge")]
    assert duals and all(v > 0 for v in duals)


def test_leakage_vs_cutoff():
    """The assembled operators are exactly closed at every cutoff, so their
    leakage sequence is identically zero (trivially nonincreasing).  The
    metric-dual wedge is the one operator that genuinely leaves the
    truncation; its operator-norm leakage saturates toward a constant below
    one half plus a small tail (the top-isotype fraction of a bounded
    multiplication operator), recorded here as a regression band."""
    dual = []
    for cutoff in (6, 10):
        model = cp1_model(0, cutoff)
        for key, val in model.leakage.items():
            if key.startswith(("dbar", "iv")):
                assert val == 0.0
        dual.append(max(v for key, v in model.leakage.items()
                        if key.startswith("dual_wedge")))
    assert 0.4 < dual[0] < 0.51 and 0.4 < dual[1] < 0.51
    assert abs(dual[1] - dual[0]) < 0.02


def test_gram_conditions_reported():
    model = cp1_model(0, 8)
    assert all(v >= 1.0 for v in model.gram_conditions.values())
