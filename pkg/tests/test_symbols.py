from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nctoeplitz import (
    COMPLEX1,
    COMPLEX2,
    PHASE,
    DimensionMismatch,
    PhasePoint,
    PolySymbol,
    SymbolSyntaxError,
    UnknownVariable,
    WrongChart,
    from_complex_chart,
    iota,
    parse_symbol,
    poisson_bracket,
    to_complex_chart,
    to_nc_coords,
    complexify,
)

from conftest import random_generic_params, random_phase_symbol


# -- parsing -----------------------------------------------------------------

def test_parse_basic_terms():
    f = parse_symbol("q1*p1 + 2")
    assert f.terms == {(1, 0, 1, 0): 1.0, (0, 0, 0, 0): 2.0}


def test_parse_imaginary_coefficient():
    f = parse_symbol("p1^2 - i*q2")
    assert f.coefficient((0, 0, 2, 0)) == 1.0
    assert f.coefficient((0, 1, 0, 0)) == -1j


def test_parse_expands_products():
    # hand expansion: q1*(p1+p2)^2 = q1 p1^2 + 2 q1 p1 p2 + q1 p2^2
    f = parse_symbol("q1*(p1+p2)^2")
    assert f.terms == {(1, 0, 2, 0): 1.0, (1, 0, 1, 1): 2.0, (1, 0, 0, 2): 1.0}


def test_parse_errors_carry_position():
    with pytest.raises(SymbolSyntaxError) as err:
        parse_symbol("q1 + ")
    assert err.value.position == 5
    with pytest.raises(UnknownVariable):
        parse_symbol("q3 + 1")
    with pytest.raises(SymbolSyntaxError):
        parse_symbol("q1^(2)")
    with pytest.raises(SymbolSyntaxError):
        parse_symbol("q1 q2")


def test_parse_complex_chart_variables():
    f = parse_symbol("z1*zb1 - i*z2", COMPLEX2)
    assert f.coefficient((1, 1, 0, 0)) == 1.0
    with pytest.raises(UnknownVariable):
        parse_symbol("q1", COMPLEX2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_parse_print_parse_fixed_point(seed):
    rng = np.random.default_rng(seed)
    f = random_phase_symbol(rng, degree=3, nterms=6)
    text = f.to_text()
    g = parse_symbol(text)
    assert g.to_text() == text
    assert f.max_coeff_diff(g) == 0.0


# -- ring structure ----------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_ring_distributivity(seed):
    rng = np.random.default_rng(seed)
    F = random_phase_symbol(rng, 2, 5)
    G = random_phase_symbol(rng, 2, 5)
    H = random_phase_symbol(rng, 2, 5)
    left = (F + G) * H
    right = F * H + G * H
    assert left.max_coeff_diff(right) <= 1e-12 * max(1.0, left.max_abs_coeff())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_leibniz_rule(seed):
    rng = np.random.default_rng(seed)
    F = random_phase_symbol(rng, 3, 6)
    G = random_phase_symbol(rng, 3, 6)
    for var in ("q1", "p2"):
        left = (F * G).differentiate(var)
        right = F.differentiate(var) * G + F * G.differentiate(var)
        assert left.max_coeff_diff(right) <= 1e-12 * max(1.0, left.max_abs_coeff())


def test_differentiate_examples():
    f = parse_symbol("z1^2*zb2", COMPLEX2)
    assert f.differentiate("z1").terms == {(1, 0, 0, 1): 2.0}
    g = parse_symbol("q1^3")
    assert g.differentiate("q1", 2).terms == {(1, 0, 0, 0): 6.0}
    assert parse_symbol("5").differentiate("q1").is_zero()
    with pytest.raises(UnknownVariable):
        f.differentiate("q1")


def test_chart_mismatch_raises():
    with pytest.raises(WrongChart):
        parse_symbol("q1") * parse_symbol("z1", COMPLEX2)
    with pytest.raises(WrongChart):
        poisson_bracket(parse_symbol("z1", COMPLEX2), parse_symbol("z1", COMPLEX2))


# -- poisson bracket ---------------------------------------------------------

def test_poisson_canonical_pairs():
    q1, p1, q2 = parse_symbol("q1"), parse_symbol("p1"), parse_symbol("q2")
    assert poisson_bracket(q1, p1).terms == {(0, 0, 0, 0): 1.0}
    assert poisson_bracket(q1, q2).is_zero()
    assert poisson_bracket(parse_symbol("q1^2"), p1).terms == {(1, 0, 0, 0): 2.0}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_poisson_antisymmetry_and_jacobi(seed):
    rng = np.random.default_rng(seed)
    F = random_phase_symbol(rng, 3, 5)
    G = random_phase_symbol(rng, 3, 5)
    H = random_phase_symbol(rng, 3, 5)
    anti = poisson_bracket(F, G) + poisson_bracket(G, F)
    assert anti.max_abs_coeff() <= 1e-12 * max(1.0, F.max_abs_coeff() * G.max_abs_coeff())
    jac = poisson_bracket(F, poisson_bracket(G, H)) \
        + poisson_bracket(G, poisson_bracket(H, F)) \
        + poisson_bracket(H, poisson_bracket(F, G))
    scale = max(1.0, F.max_abs_coeff() * G.max_abs_coeff() * H.max_abs_coeff())
    assert jac.max_abs_coeff() <= 1e-11 * scale


# -- evaluation --------------------------------------------------------------

def test_eval_examples():
    assert parse_symbol("q1 + p2")(PhasePoint(1, 0, 0, 2)) == 3.0
    f = parse_symbol("z1*zb1", COMPLEX2)
    assert f((3 + 4j, 0)) == pytest.approx(25.0)
    with pytest.raises(DimensionMismatch):
        f((1 + 0j,))


def test_eval_matches_substitution_composition(rng):
    # composition-vs-substitution oracle: eval(F o chart) == eval at the
    # composed point, and the round trip reproduces direct evaluation
    for _ in range(20):
        p = random_generic_params(rng)
        F = random_phase_symbol(rng, 3, 6)
        f = to_complex_chart(p, F)
        x = PhasePoint(*rng.uniform(-1, 1, 4))
        z = complexify(p, to_nc_coords(p, x))
        direct = F(x)
        via_chart = f(z)
        assert via_chart == pytest.approx(direct, rel=1e-12, abs=1e-12)
        back = from_complex_chart(p, f)
        assert back(x) == pytest.approx(direct, rel=1e-12, abs=1e-12)


# -- chart composition -------------------------------------------------------

def test_to_complex_chart_constant_and_q1():
    p = random_generic_params(np.random.default_rng(0))
    one = parse_symbol("1")
    assert to_complex_chart(p, one).terms == {(0, 0, 0, 0): 1.0}
    # at zero deformation with s = sqrt(hbar): q1 -> (z1 + zb1)/sqrt(2)
    from nctoeplitz import make_params
    p0 = make_params(1.0, s=1.0)
    img = to_complex_chart(p0, parse_symbol("q1"))
    r = 1.0 / math.sqrt(2.0)
    assert img.coefficient((1, 0, 0, 0)) == pytest.approx(r, rel=1e-15)
    assert img.coefficient((0, 1, 0, 0)) == pytest.approx(r, rel=1e-15)


def test_chart_round_trip_is_identity(rng):
    for _ in range(50):
        p = random_generic_params(rng)
        F = random_phase_symbol(rng, 3, 6)
        back = from_complex_chart(p, to_complex_chart(p, F))
        assert back.isclose(F, 1e-12)


def test_chart_composition_respects_products(rng):
    for _ in range(20):
        p = random_generic_params(rng)
        F = random_phase_symbol(rng, 2, 5)
        G = random_phase_symbol(rng, 2, 5)
        lhs = to_complex_chart(p, F * G)
        rhs = to_complex_chart(p, F) * to_complex_chart(p, G)
        assert lhs.isclose(rhs, 1e-12)


def test_real_symbol_has_bar_swap_symmetry(rng):
    for _ in range(10):
        p = random_generic_params(rng)
        F = random_phase_symbol(rng, 3, 6, real=True)
        f = to_complex_chart(p, F)
        assert f.bar_swap().isclose(f, 1e-12)
