
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicecalc.errors import ZeroDivisorError
from slicecalc.quaternion import (
    I, J, K, ONE, ZERO, Quaternion, conj, inverse, isclose, mul, norm, parse, render,
)

from conftest import random_quaternions


def left_matrix(a):
    """Matrix of q -> a q acting on (t, x, y, z); an independent product oracle."""
    t, x, y, z = a
    return np.array([
        [t, -x, -y, -z],
        [x, t, -z, y],
        [y, z, t, -x],
        [z, -y, x, t],
    ])


def oracle_mul(a, b):
    return Quaternion(*(float(c) for c in left_matrix(a) @ np.array(b)))


def test_unit_relations():
    assert mul(I, J) == K
    assert mul(J, K) == I
    assert mul(K, I) == J
    assert mul(J, I) == -K
    for e in (I, J, K):
        assert mul(e, e) == -ONE
    assert mul(mul(I, J), K) == -ONE


def test_mul_hand_expansion():
    # (1+i)(1+j) = 1 + j + i + ij = 1 + i + j + k
    assert (1 + I) * (1 + J) == Quaternion(1, 1, 1, 1)
    assert oracle_mul(1 + I, 1 + J) == Quaternion(1, 1, 1, 1)


def test_mul_matches_matrix_oracle(rng):
    for a, b in zip(random_quaternions(rng, 200), random_quaternions(rng, 200)):
        assert isclose(mul(a, b), oracle_mul(a, b), abs_tol=1e-14)


def test_inverse_examples():
    assert inverse(I) == -I
    assert inverse(Quaternion(2.0)) == Quaternion(0.5)
    q = Quaternion(1, 1, 1, 1)
    assert isclose(inverse(q), Quaternion(1, -1, -1, -1) / 4)


def test_inverse_zero_divisor():
    with pytest.raises(ZeroDivisorError):
        inverse(ZERO)
    with pytest.raises(ZeroDivisionError):
        inverse(Quaternion(1e-160, 0, 0, 0))


def test_plumbing():
    assert conj(1 + I) == 1 - I
    assert norm(3 + 4 * I) == 5.0
    assert abs(Quaternion(0, 0, 3, 4)) == 5.0
    assert 2 - I == Quaternion(2, -1, 0, 0)
    assert Quaternion(1, 2, 3, 4) ** 0 == ONE
    assert (I + J) ** 2 == Quaternion(-2.0)


def test_isclose_tolerances():
    assert isclose(1.0, 1.0 + 1e-13)
    assert not isclose(1.0, 1.0 + 1e-6)
    assert isclose(1e6, 1e6 + 1e-4)
    assert not isclose(ZERO, Quaternion(1e-11), abs_tol=1e-12, rel_tol=0.0)


@pytest.mark.parametrize("text,value", [
    ("1+2i+3j+4k", Quaternion(1, 2, 3, 4)),
    (" -1.5 - 2i + 0j - 4e-3k ", Quaternion(-1.5, -2, 0, -0.004)),
    ("0.0-0.0i+1.0j+0.0k", Quaternion(0, 0, 1, 0)),
])
def test_parse(text, value):
    assert parse(text) == value


@pytest.mark.parametrize("bad", ["1+2i", "i+j+k+1", "1+2j+3i+4k", "abc"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse(bad)


def test_render_roundtrip(rng):
    for q in random_quaternions(rng, 50, scale=1e3):
        assert parse(render(q)) == q
    assert render(Quaternion(1, -2, 0.5, 0)) == "1.0-2.0i+0.5j+0.0k"


finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)


@settings(max_examples=300)
@given(quats, quats, quats)
def test_associative(a, b, c):
    lhs = mul(mul(a, b), c)
    rhs = mul(a, mul(b, c))
    assert norm(lhs - rhs) <= 1e-12 * norm(a) * norm(b) * norm(c) + 1e-290


@settings(max_examples=300)
@given(quats, quats)
def test_conj_antiautomorphism(a, b):
    assert norm(conj(mul(a, b)) - mul(conj(b), conj(a))) <= 1e-12 * norm(a) * norm(b) + 1e-290


@settings(max_examples=300)
@given(quats, quats)
def test_norm_multiplicative(a, b):
    assert abs(norm(mul(a, b)) - norm(a) * norm(b)) <= 1e-9 * max(1e-300, norm(a) * norm(b)) + 1e-300


@given(quats)
def test_q_conj_q_is_real(q):
    for p in (mul(q, conj(q)), mul(conj(q), q)):
        assert isclose(p, Quaternion(q.norm2()), abs_tol=1e-9)


def test_bulk_invariants(rng):
    # 10^4 random triples for associativity; inverse over a wide magnitude range
    qs = random_quaternions(rng, 30000)
    for a, b, c in zip(qs[0::3], qs[1::3], qs[2::3]):
        assert norm(mul(mul(a, b), c) - mul(a, mul(b, c))) <= 1e-12 * norm(a) * norm(b) * norm(c)
    mags = 10.0 ** rng.uniform(-6, 6, size=1000)
    for q, m in zip(random_quaternions(rng, 1000), mags):
        q = q * (m / norm(q))
        assert norm(mul(q, inverse(q)) - ONE) <= 1e-12
        assert norm(mul(inverse(q), q) - ONE) <= 1e-12


def test_norm_keeps_precision_at_extreme_magnitudes():
    # squaring 1e-160 underflows to a subnormal; 3-4-5 scaled stays exact
    for scale in (1e-160, 1e160):
        assert norm(Quaternion(0, 3 * scale, 0, 4 * scale)) == pytest.approx(5 * scale, rel=1e-15)
