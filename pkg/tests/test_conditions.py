import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from polycc.conditions import (ImaginaryPartWarning, condition_residual, cross_validate,
                               lemma32_norm, lemma32_residual, lemma34_residual, lemma34_values,
                               mixed_identity_residual)
from polycc.errors import InadmissibleTwistError, ParameterError
from polycc.kernels import kernel_yz
from polycc.newtonian import cc_residual
from polycc.polygon import TwistedPolygonParams, build_configuration
from polycc.solver import solve_h, solve_ring_ratio

SQRT2 = math.sqrt(2.0)

# 40-digit evaluations of the literal formulas (tests/oracles.py)
REGRESSION_R32 = (0.73755070829655043117, 0.87620839953485863689)
REGRESSION_R34 = (-0.46096919268534402588, 0.0, 0.91271708284881112653)

admissible = st.integers(2, 12).flatmap(
    lambda N: st.tuples(st.just(N), st.sampled_from([0.0, math.pi / N])))


def P(N, a, b, h, theta):
    return TwistedPolygonParams(N, a, b, h, theta)


def test_solved_three_gon():
    h = solve_h(3, math.pi / 3).h_root
    assert abs(h - SQRT2) < 1e-12
    r1, r2 = lemma32_residual(P(3, 1, 1, h, math.pi / 3))
    assert abs(r1) < 1e-12 and abs(r2) < 1e-12


def test_two_gon_quarter_twist():
    r1, _ = lemma32_residual(P(2, 1, 1, SQRT2, math.pi / 2))
    # y = 0, x = 1/4, z = 2/(2+h^2)^(3/2) = 1/4
    assert abs(r1) < 1e-12


def test_stacked_square_diverges_as_h_shrinks():
    hs = [1.0, 0.1, 0.01, 1e-3]
    r = [lemma32_residual(P(4, 1, 1, h, 0.0))[0] for h in hs]
    assert all(math.isfinite(v) for v in r)
    # the k = N term adds 1/h^3 to both y and z, so b a y - (x - z) grows like 2/h^3
    assert all(np.diff(r) > 0)
    assert r[-1] == pytest.approx(2e9, rel=1e-6)


def test_lemma34_at_solved_point():
    res = lemma34_residual(P(3, 1, 1, SQRT2, math.pi / 3))
    assert max(abs(c) for c in res) < 1e-11


@given(admissible, st.floats(0.05, 20), st.floats(0.05, 5), st.floats(1e-3, 10))
@settings(max_examples=200)
def test_real_expression_equals_z(Nt, a, b, h):
    N, theta = Nt
    _, second, _ = lemma34_values(P(N, a, b, h, theta))
    _, z = kernel_yz(N, a, h, theta)
    assert second.imag == 0.0
    assert abs(second.real - z) <= 1e-14 * max(1.0, z)


def test_regression_fixture():
    p = P(5, 0.6, 0.6, 1.0, 0.0)
    r1, r2 = lemma32_residual(p)
    assert r1 == pytest.approx(REGRESSION_R32[0], rel=1e-13)
    assert r2 == pytest.approx(REGRESSION_R32[1], rel=1e-13)
    r34 = lemma34_residual(p)
    for got, want in zip(r34, REGRESSION_R34):
        assert got.real == pytest.approx(want, rel=1e-13, abs=1e-15)
        assert abs(got.imag) < 1e-15
    rep = condition_residual(p)
    assert rep.norm > 1e-3
    assert rep.norm == pytest.approx(max(map(abs, REGRESSION_R32 + REGRESSION_R34)), rel=1e-13)


@given(admissible, st.floats(0.1, 10), st.floats(0.05, 5), st.floats(0.01, 10))
@settings(max_examples=40, deadline=None)
def test_lemma34_against_extended_precision(Nt, a, b, h):
    N, theta = Nt
    got = lemma34_values(P(N, a, b, h, theta))
    want = oracles.lemma34(N, a, b, h, theta)
    for g, w in zip(got, want):
        assert abs(g - complex(w)) <= 1e-13 * max(1.0, abs(complex(w)))


def test_cross_validate_examples():
    assert cross_validate(P(3, 1, 1, SQRT2, math.pi / 3))
    p = P(3, 2, 1, 1.0, math.pi / 3)
    assert cross_validate(p)
    assert lemma32_norm(p) > 1e-3
    assert cc_residual(build_configuration(p)).max_residual > 1e-3
    h4 = solve_h(4, math.pi / 4).h_root
    assert cross_validate(P(4, 1, 1, h4, math.pi / 4))


def test_rejects_planar_and_other_twists():
    with pytest.raises(ParameterError):
        lemma32_residual(P(3, 1, 1, 0.0, math.pi / 3))
    with pytest.raises(InadmissibleTwistError):
        lemma32_residual(P(3, 1, 1, 1.0, 0.4))
    with pytest.raises(InadmissibleTwistError):
        lemma34_residual(P(3, 1, 1, 1.0, 0.4))


def branch_points():
    pts = []
    for N in (3, 4, 6):
        for b in (0.2, 0.6, 0.9):
            bp = solve_ring_ratio(N, math.pi / N, b)
            pts.append(P(N, bp.a, b, bp.h, math.pi / N))
    return pts


@pytest.mark.parametrize("p", branch_points(), ids=lambda p: f"N{p.N}-b{p.b}")
def test_unequal_branch_points_are_central(p):
    assert p.a < 1.0
    assert cc_residual(build_configuration(p)).max_residual < 1e-12
    assert lemma32_norm(p) < 1e-12
    assert max(abs(c) for c in lemma34_residual(p)) < 1e-11
    assert cross_validate(p)


@pytest.mark.parametrize("p", branch_points(), ids=lambda p: f"N{p.N}-b{p.b}")
def test_mixed_identity_only_holds_on_equal_rings(p):
    # y = x - a b z is equivalent to the reduced pair only when a = b = 1
    assert abs(mixed_identity_residual(p)) > 1e-3


@given(admissible, st.floats(0.2, 5), st.floats(0.05, 1), st.floats(0.05, 5))
@settings(max_examples=150, deadline=None)
def test_lemma34_implies_lemma32(Nt, a, b, h):
    p = P(Nt[0], a, b, h, Nt[1])
    if max(abs(c) for c in lemma34_residual(p)) < 1e-11:
        assert lemma32_norm(p) < 1e-9


def test_lemma34_implies_lemma32_on_solutions():
    pts = branch_points() + [P(N, 1, 1, solve_h(N, t).h_root, t)
                             for N in range(2, 9) for t in (0.0, math.pi / N)]
    for p in pts:
        assert max(abs(c) for c in lemma34_residual(p)) < 1e-11
        assert lemma32_norm(p) < 1e-9


@given(admissible, st.floats(0.05, 20), st.floats(0.05, 5), st.floats(1e-3, 10))
@settings(max_examples=300)
def test_expressions_are_real(Nt, a, b, h):
    first, _, third = lemma34_values(P(Nt[0], a, b, h, Nt[1]))
    scale = max(1.0, abs(first), abs(third))
    assert abs(first.imag) < 1e-12 * scale and abs(third.imag) < 1e-12 * scale


@given(admissible, st.floats(0.2, 5), st.floats(0.05, 2), st.floats(0.05, 5))
@settings(max_examples=150, deadline=None)
def test_reduced_and_full_verdicts_agree(Nt, a, b, h):
    p = P(Nt[0], a, b, h, Nt[1])
    lemma = lemma32_norm(p)
    full = cc_residual(build_configuration(p)).max_residual
    if any(1e-10 <= v <= 1e-8 for v in (lemma, full)):
        return
    assert (lemma < 1e-10) == (full < 1e-9)


def test_imaginary_part_warning():
    with pytest.warns(ImaginaryPartWarning):
        lemma34_residual(P(3, 0.7, 0.5, 1.0, math.pi / 3), imag_tol=-1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        lemma34_residual(P(3, 0.7, 0.5, 1.0, math.pi / 3))


def test_condition_residual_json():
    d = condition_residual(P(4, 0.8, 0.5, 1.0, 0.0)).to_dict()
    assert list(d) == ["r32", "r34", "norm"]
    assert len(d["r34"]) == 3 and all(len(c) == 2 for c in d["r34"])
    assert d["norm"] == max([abs(v) for v in d["r32"]] + [abs(v) for c in d["r34"] for v in c])
