import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicecalc.errors import DegenerateSlice
from slicecalc.quaternion import I, J, K, ONE, Quaternion, isclose, mul, norm
from slicecalc.slices import (
    NearPoleWarning,
    SphericalAngles,
    UnitImaginary,
    angles_of,
    iota_from_angles,
    iota_tangents,
    perp_direction,
    slice_form,
    split_increment,
)

from conftest import random_quaternions

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)


def random_units(rng, n):
    out = []
    for v in rng.normal(size=(n, 3)):
        v = v / np.linalg.norm(v)
        out.append(UnitImaginary(0.0, *(float(c) for c in v)))
    return out


@pytest.mark.parametrize("q,t,r,iota", [
    (1 + 2 * I, 1.0, 2.0, I),
    (3 - 4 * K, 3.0, 4.0, -K),
    (Quaternion(1, 1, 1, 1), 1.0, SQ3, Quaternion(0, 1, 1, 1) / SQ3),
])
def test_slice_form_examples(q, t, r, iota):
    sf = slice_form(q)
    assert sf.t == t
    assert math.isclose(sf.r, r, rel_tol=1e-15)
    assert isclose(sf.iota, iota, abs_tol=1e-15)
    assert isclose(sf.recompose(), q, abs_tol=1e-12)


def test_slice_form_real_is_degenerate():
    with pytest.raises(DegenerateSlice):
        slice_form(Quaternion(2.0))
    with pytest.raises(DegenerateSlice):
        slice_form(Quaternion(2.0, 1e-13))


def test_slice_form_of_conjugate(rng):
    for q in random_quaternions(rng, 100):
        a, b = slice_form(q), slice_form(q.conj())
        assert a.r == b.r and a.t == b.t
        assert isclose(b.iota, -a.iota, abs_tol=1e-15)


def test_unit_imaginary_squares_to_minus_one(rng):
    for q in random_quaternions(rng, 200):
        iota = slice_form(q).iota
        assert iota.t == 0.0
        assert abs(norm(iota) - 1.0) <= 1e-12
        assert isclose(mul(iota, iota), -ONE, abs_tol=1e-12)


def test_iota_from_angles_examples():
    assert isclose(iota_from_angles(SphericalAngles(0.0, math.pi / 2)), I, abs_tol=1e-15)
    assert isclose(iota_from_angles(SphericalAngles(math.pi / 2, math.pi / 2)), J, abs_tol=1e-15)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearPoleWarning)
        for alpha in (0.0, 1.0, -2.5):
            assert isclose(iota_from_angles(SphericalAngles(alpha, 0.0)), K, abs_tol=1e-15)


def test_pole_warns():
    with pytest.warns(NearPoleWarning):
        iota_from_angles(SphericalAngles(0.3, 1e-8))


@settings(max_examples=200)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_chart_is_unit_imaginary(alpha, beta):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearPoleWarning)
        iota = iota_from_angles(SphericalAngles(alpha, beta))
    assert iota.t == 0.0
    assert abs(norm(iota) - 1.0) <= 1e-12


def test_angles_roundtrip_and_tangents(rng):
    h = 1e-6
    for iota in random_units(rng, 50):
        ang = angles_of(iota)
        assert isclose(iota_from_angles(ang), iota, abs_tol=1e-12)
        ta, tb = iota_tangents(ang)
        fd_a = (iota_from_angles(SphericalAngles(ang.alpha + h, ang.beta))
                - iota_from_angles(SphericalAngles(ang.alpha - h, ang.beta))) * (0.5 / h)
        fd_b = (iota_from_angles(SphericalAngles(ang.alpha, ang.beta + h))
                - iota_from_angles(SphericalAngles(ang.alpha, ang.beta - h))) * (0.5 / h)
        assert norm(ta - fd_a) < 1e-8
        assert norm(tb - fd_b) < 1e-8
        # tangents are perpendicular to iota, hence anticommute with it
        assert isclose(mul(ta, iota), -mul(iota, ta), abs_tol=1e-12)
        assert isclose(mul(tb, iota), -mul(iota, tb), abs_tol=1e-12)


def test_split_examples():
    s = split_increment(Quaternion(5.0), I)
    assert s.h_par == Quaternion(5.0) and norm(s.h_perp) == 0.0
    # i j i = j, so j is entirely perpendicular to i
    assert mul(mul(I, J), I) == J
    s = split_increment(J, I)
    assert norm(s.h_par) == 0.0 and s.h_perp == J
    # i (1+i) i = -1 - i
    assert mul(mul(I, 1 + I), I) == Quaternion(-1, -1, 0, 0)
    s = split_increment(1 + I, I)
    assert s.h_par == 1 + I and norm(s.h_perp) == 0.0


def test_split_properties(rng):
    hs = random_quaternions(rng, 500)
    for h, iota in zip(hs, random_units(rng, 500)):
        s = split_increment(h, iota)
        assert norm(s.h_par + s.h_perp - h) <= 1e-15 * max(1.0, norm(h)) * 4
        assert isclose(mul(iota, s.h_par), mul(s.h_par, iota), abs_tol=1e-12)
        assert isclose(mul(iota, s.h_perp), -mul(s.h_perp, iota), abs_tol=1e-12)


@pytest.mark.parametrize("iota,expected", [
    (I, J),
    (K, I),
    (Quaternion(0, 1, 1, 0) / SQ2, Quaternion(0, 1, -1, 0) / SQ2),
])
def test_perp_direction_examples(iota, expected):
    assert isclose(perp_direction(UnitImaginary(*iota)), expected, abs_tol=1e-15)


def test_perp_direction_anticommutes(rng):
    for iota in random_units(rng, 300) + [UnitImaginary(*I), UnitImaginary(*J), UnitImaginary(*K)]:
        eta = perp_direction(iota)
        assert abs(eta.dot(iota)) <= 1e-12
        assert abs(norm(eta) - 1.0) <= 1e-12
        assert isclose(mul(eta, iota), -mul(iota, eta), abs_tol=1e-12)


def test_reflection_identity(rng):
    # u v u = v - 2 <u, v> u for pure units
    us, vs = random_units(rng, 300), random_units(rng, 300)
    for u, v in zip(us, vs):
        assert isclose(mul(mul(u, v), u), v - u * (2.0 * u.dot(v)), abs_tol=1e-12)


def test_slice_identities(rng):
    # (x/r) iota = (e - iota e iota)/2 for e = i, j, k
    for q in random_quaternions(rng, 300):
        sf = slice_form(q)
        iota = sf.iota
        for coord, e in ((q.x, I), (q.y, J), (q.z, K)):
            lhs = iota * (coord / sf.r)
            rhs = (e - mul(mul(iota, e), iota)) * 0.5
            assert isclose(lhs, rhs, abs_tol=1e-12)


def test_split_coefficient_sums(rng):
    for iota in random_units(rng, 1000):
        minus = plus = Quaternion()
        for e in (I, J, K):
            iei = mul(mul(iota, e), iota)
            minus = minus + mul(e, (e - iei) * 0.5)
            plus = plus + mul(e, (e + iei) * 0.5)
        assert isclose(minus, -ONE, abs_tol=1e-12)
        assert isclose(plus, -2 * ONE, abs_tol=1e-12)
