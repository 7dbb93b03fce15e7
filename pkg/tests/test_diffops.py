import math

import pytest

from slicecalc.diffops import (
    Domain,
    PartialDerivatives,
    QFunction,
    characteristic_residuals,
    cullen_residual,
    default_step,
    fueter_apply,
    fueter_decomposition_residual,
    jacobian_apply,
    partial_exact_pow,
    partial_fd,
    partial_iota,
    partials,
    partials_fd,
    pow_partials,
)
from slicecalc.errors import DegenerateSlice, DomainExit, OutsideRadius, SingularSubplane
from slicecalc.harness.catalog import iota_function, power_function
from slicecalc.quaternion import I, J, K, ONE, ZERO, Quaternion, conj, isclose, mul, norm
from slicecalc.slices import slice_form

from conftest import random_quaternions


def square():
    return QFunction("sq", lambda q: mul(q, q))


CONJ = QFunction("conj", conj)


def test_partial_fd_of_square():
    # d/dx (q^2) = q i + i q, which is 4i at q = 2
    f = square()
    assert isclose(partial_fd(f, Quaternion(2.0), "x", 1e-4), 4 * I, abs_tol=1e-10)
    assert isclose(partial_fd(f, Quaternion(2.0), "t", 1e-4), Quaternion(4.0), abs_tol=1e-10)
    with pytest.raises(ValueError):
        partial_fd(f, ONE, "x", 0.0)


def test_default_step_scales():
    assert default_step(Quaternion(0.5)) == 1e-5
    assert default_step(Quaternion(0, 3, 4, 0)) == pytest.approx(5e-5)


@pytest.mark.parametrize("n,q,axis,expected", [
    (3, Quaternion(2.0), "x", 12 * I),
    (2, I, "x", Quaternion(-2.0)),
    (2, I, "y", ZERO),     # i j + j i = 0
    (0, 1 + J, "t", ZERO),
    (1, 1 + J, "z", K),
])
def test_partial_exact_pow_examples(n, q, axis, expected):
    assert isclose(partial_exact_pow(n, q, axis), expected, abs_tol=1e-15)


def test_pow_partials_match_sum_formula(rng):
    # d(q^n)/dx_e = sum_m q^m e q^(n-1-m)
    for q in random_quaternions(rng, 20):
        for n in range(6):
            p = pow_partials(n, q)
            for e, d in zip((ONE, I, J, K), p):
                ref = ZERO
                for m in range(n):
                    ref = ref + mul(mul(q ** m, e), q ** (n - 1 - m))
                assert isclose(d, ref, abs_tol=1e-12)
    with pytest.raises(ValueError):
        pow_partials(-1, ONE)


def test_fueter_examples():
    ident = PartialDerivatives(ONE, I, J, K)
    assert fueter_apply(ident) == Quaternion(-2.0)
    assert fueter_apply(PartialDerivatives(ONE, -I, -J, -K)) == Quaternion(4.0)
    assert fueter_apply(PartialDerivatives(ZERO, ZERO, ZERO, ZERO)) == ZERO


def test_jacobian_reconstructs_directional_derivative(rng):
    f = power_function(4).function
    for q, h in zip(random_quaternions(rng, 30), random_quaternions(rng, 30)):
        eps = 1e-5
        fd = (f(q + h * eps) - f(q - h * eps)) * (0.5 / eps)
        scale = max(1.0, norm(q)) ** 3 * norm(h)
        assert norm(jacobian_apply(pow_partials(4, q), h) - fd) <= 1e-8 * scale


def test_fd_error_is_second_order(rng):
    f = QFunction("cube", lambda q: q ** 3)
    q = Quaternion(0.3, -0.7, 0.4, 1.1)
    exact = pow_partials(3, q)
    errs = []
    for s in (1e-2, 5e-3, 2.5e-3):
        fd = partials_fd(f, q, s)
        errs.append(max(norm(a - b) for a, b in zip(fd, exact)))
    assert errs[0] / errs[1] == pytest.approx(4.0, abs=0.2)
    assert errs[1] / errs[2] == pytest.approx(4.0, abs=0.2)


def test_partials_prefers_exact():
    calls = []
    f = QFunction("sq", lambda q: mul(q, q),
                  exact_partials=lambda q: calls.append(q) or pow_partials(2, q))
    partials(f, 1 + I)
    assert calls == [1 + I]


def test_cullen_examples():
    # conj at 1+i: 1 + i(-i) = 2
    assert cullen_residual(CONJ, 1 + I) == pytest.approx(2.0, abs=1e-9)
    assert cullen_residual(square(), 1 + I) <= 1e-9
    assert cullen_residual(power_function(5).function, Quaternion(0.2, 0.5, -0.3, 0.9)) <= 1e-12


def test_partial_iota_examples():
    # for f = iota each angular derivative is the tangent itself, so the sum is 2
    f = iota_function().function
    for q in (1 + 2 * I, Quaternion(0.3, 0.2, -0.5, 0.4)):
        assert isclose(partial_iota(f, q), Quaternion(2.0), abs_tol=1e-8)
    # q^2 = t^2 - r^2 + 2tr iota, so df/diota = 2 * 2tr
    q = Quaternion(0.7, 0.3, -0.2, 0.5)
    sf = slice_form(q)
    assert isclose(partial_iota(square(), q), Quaternion(4 * sf.t * sf.r), abs_tol=1e-8)


def test_partial_iota_singular_subplane():
    with pytest.raises(SingularSubplane):
        partial_iota(square(), 1 + K)
    with pytest.raises(DegenerateSlice):
        partial_iota(square(), Quaternion(1.0))


def test_characteristic_real_branch():
    res = characteristic_residuals(CONJ, Quaternion(0.5))
    assert res.real_branch
    for name in ("eq1", "eq2", "eq3"):
        # d/dx conj = -i, i d/dt conj = i
        assert getattr(res, name) == pytest.approx(2.0, abs=1e-9)
    res = characteristic_residuals(power_function(3).function, Quaternion(-1.2))
    assert res.max_equation() <= 1e-12


def test_characteristic_nonreal_branch(rng):
    f = power_function(6).function
    for q in random_quaternions(rng, 50):
        res = characteristic_residuals(f, q)
        assert not res.real_branch
        assert set(res.equations()) == {"eq4", "eq5", "eq6", "cullen"}
        assert res.max_equation() <= 1e-10 * max(1.0, norm(q)) ** 5
    res = characteristic_residuals(CONJ, Quaternion(0.1, 0.4, 0.3, 0.2))
    assert res.max_equation() > 0.5


def test_characteristic_on_k_axis_skips_consistency():
    res = characteristic_residuals(square(), 1 + K)
    assert res.fueter_consistency is None
    assert res.max_equation() <= 1e-6


def test_fueter_decomposition(rng):
    for n in (2, 5):
        f = power_function(n).function
        for q in random_quaternions(rng, 20):
            assert fueter_decomposition_residual(f, q) <= 1e-6 * max(1.0, norm(q)) ** n
    # the decomposition is an identity of calculus and holds for conj too
    assert fueter_decomposition_residual(CONJ, Quaternion(0.2, 0.5, 0.1, 0.3)) <= 1e-6
    with pytest.raises(DegenerateSlice):
        fueter_decomposition_residual(CONJ, Quaternion(1.0))


def test_domain_exits():
    f = iota_function().function
    assert f.domain is Domain.NONREAL
    with pytest.raises(DomainExit):
        f(Quaternion(1.0))
    ball = QFunction("b", lambda q: q, domain=Domain.BALL, radius=1.0)
    with pytest.raises(OutsideRadius):
        ball(Quaternion(2.0))
    with pytest.raises(DomainExit):
        partials(ball, Quaternion(0, 0, 0, 1.5))
    assert math.isinf(square().radius)
