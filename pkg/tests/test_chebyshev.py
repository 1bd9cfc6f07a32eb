import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from fccdct.chebyshev import (SpectralPoint, TorusPoint, UVWPoint, cheb_eval_uvw, cheb_eval_xyz,
                              compose_scaled, coords_from_uvw, evaluate_box, evaluate_combination,
                              evaluate_indices, power_form_exponents, real_coords,
                              recurrence_product, symmetrized_exponential)
from fccdct.weyl_s4 import default_group, orbit

small = st.integers(-5, 5)
index3 = st.tuples(small, small, small)
angle = st.floats(0, 1, allow_nan=False, exclude_max=True)
angles = st.tuples(angle, angle, angle)


def test_power_form_rows_are_the_orbit():
    rng = np.random.default_rng(3)
    for k in rng.integers(-7, 8, size=(30, 3)):
        rows = {tuple(r) for r in power_form_exponents(k)}
        assert rows == set(orbit(k))


@given(index3, angles)
def test_power_form_matches_group_average(k, theta):
    uvw = np.exp(2j * np.pi * np.array(theta))
    assert abs(cheb_eval_uvw(k, *uvw) - symmetrized_exponential(k, theta)) < 1e-12


def test_low_degree_polynomials_are_coordinates(rng):
    for theta in rng.random((10, 3)):
        p = TorusPoint(tuple(theta)).to_uvw()
        s = coords_from_uvw(p)
        assert cheb_eval_uvw((0, 0, 0), p) == pytest.approx(1.0, abs=1e-15)
        for e, c in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)), (s.x, s.y, s.z)):
            assert abs(cheb_eval_uvw(e, p) - c) < 1e-14


def test_torus_point_wraps():
    p = TorusPoint((1.25, -0.25, 1.0))
    assert p.theta == pytest.approx((0.25, 0.75, 0.0))
    assert p.to_uvw().on_torus()


@given(index3, index3, angles)
@settings(max_examples=40)
def test_recurrence_product(k, l, theta):
    comb = recurrence_product(k, l)
    assert comb.total_weight() == 1
    assert all(w.denominator in (1, 2, 3, 4, 6, 8, 12, 24) for w in comb.as_dict().values())
    lhs = symmetrized_exponential(k, theta) * symmetrized_exponential(l, theta)
    assert abs(lhs - evaluate_combination(comb, theta)) < 1e-11


def test_recurrence_product_of_constants():
    comb = recurrence_product((0, 0, 0), (2, 1, 0))
    assert len(comb.terms) == 1
    (idx, w), = comb.terms
    assert w == Fraction(1) and idx in orbit((2, 1, 0))


def test_semigroup_property(rng):
    pts = [TorusPoint(tuple(t)).to_uvw() for t in rng.random((20, 3))]
    for k in range(4):
        for l in range(4):
            for j in (1, 2, 3):
                idx, err = compose_scaled(k, l, j, pts)
                assert sum(idx) == k * l
                assert err < 1e-11


def test_compose_scaled_argument_checks():
    with pytest.raises(ValueError):
        compose_scaled(-1, 2, 1)
    with pytest.raises(ValueError):
        compose_scaled(1, 2, 4)


def test_real_coords_of_torus_points(rng):
    for theta in rng.random((20, 3)):
        s = coords_from_uvw(TorusPoint(tuple(theta)).to_uvw())
        rc = real_coords(s)
        assert rc.dtype == float and rc.shape == (3,)


def test_real_coords_rejects_off_torus_points():
    s = SpectralPoint(1 + 1j, 2j, 0.5, origin=None)
    with pytest.raises(ValueError):
        real_coords(s)


def test_xyz_evaluation_needs_origin():
    with pytest.raises(ValueError):
        cheb_eval_xyz((1, 0, 0), SpectralPoint(0.1, 0.2, 0.3))
    p = UVWPoint(*np.exp(2j * np.pi * np.array([0.1, 0.2, 0.3])))
    s = coords_from_uvw(p)
    assert cheb_eval_xyz((2, 1, 0), s) == pytest.approx(cheb_eval_uvw((2, 1, 0), p))


def test_evaluate_box_matches_pointwise(rng):
    theta = rng.random((7, 3))
    n = 3
    box = evaluate_box(n, theta)
    idx = np.array([(a, b, c) for a in range(n) for b in range(n) for c in range(n)])
    np.testing.assert_allclose(box, evaluate_indices(idx, theta), atol=1e-13)
    np.testing.assert_allclose(evaluate_box(n, theta, first=slice(1, 2)), box[:, 9:18])
