import warnings

import numpy as np
import pytest
from conftest import params, rotations, sigs
from hypothesis import given
from hypothesis import strategies as st

from pseudolorentz import bigyro, lorentz
from pseudolorentz.bigyro import gyr, lgyr, oplus, oplus_prime, rgyr
from pseudolorentz.lorentz import Signature
from pseudolorentz.matcore import ShapeError, Tolerance, is_special_orthogonal, random_param


def _eigh_sqrt(a, power=0.5):
    """Square-root oracle built on LAPACK, independent of the Jacobi kernel."""
    w, v = np.linalg.eigh(a)
    return (v * w**power) @ v.T


def pair(sig):
    return st.tuples(st.just(sig), params(sig, 2))


def triple_of_params(sig):
    return st.tuples(st.just(sig), params(sig, 3))


def test_exact_pythagorean_fixtures():
    # 3/4 sqrt(1 + 16/9) + sqrt(1 + 9/16) 4/3 = 5/4 + 5/3
    assert abs(oplus([[0.75]], [[4.0 / 3.0]])[0, 0] - 35.0 / 12.0) <= 1e-12
    # 2 sqrt(1 + 9/16) 3/4
    assert abs(oplus([[0.75]], [[0.75]])[0, 0] - 15.0 / 8.0) <= 1e-12
    assert abs(bigyro.square_param([[0.75]])[0, 0] - 15.0 / 8.0) <= 1e-12


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_one_by_one_is_rapidity_addition(a, b):
    # B([[sinh t]]) is the hyperbolic rotation by t, so parameters add through asinh
    expected = np.sinh(np.arcsinh(a) + np.arcsinh(b))
    got = oplus([[a]], [[b]])[0, 0]
    assert abs(got - expected) <= 1e-12 * (1 + abs(expected))
    assert lgyr([[a]], [[b]])[0, 0] == pytest.approx(1.0, abs=1e-14)
    assert rgyr([[a]], [[b]])[0, 0] == pytest.approx(1.0, abs=1e-14)


@given(sigs.flatmap(lambda s: params(s)))
def test_roots_against_lapack(ps):
    (p,) = ps
    n, m = p.shape
    np.testing.assert_allclose(bigyro.root_n(p), _eigh_sqrt(np.eye(n) + p @ p.T), atol=1e-12)
    np.testing.assert_allclose(bigyro.root_m(p), _eigh_sqrt(np.eye(m) + p.T @ p), atol=1e-12)


def test_root_rank_one_closed_form():
    # for a column v, sqrt(I + v v^t) = I + (gamma - 1) v v^t / |v|^2 with gamma = sqrt(1 + |v|^2)
    v = np.array([[0.5], [-1.5], [2.0]])
    s2 = (v.T @ v).item()
    gamma = np.sqrt(1 + s2)
    expected = np.eye(3) + (gamma - 1) * (v @ v.T) / s2
    np.testing.assert_allclose(bigyro.root_n(v), expected, atol=1e-13)
    np.testing.assert_allclose(bigyro.root_m(v), [[gamma]], atol=1e-13)


@given(sigs.flatmap(pair))
def test_closed_forms_against_matrix_product(case):
    sig, (p1, p2) = case
    prod = lorentz.biboost(p1) @ lorentz.biboost(p2)
    m, n = sig.m, sig.n
    s = prod[m:, :m]
    scale = 1 + np.abs(prod).max()
    np.testing.assert_allclose(oplus(p1, p2), s, atol=1e-11 * scale)
    # lower-right block is sqrt(I + S S^t) lgyr, upper-left is rgyr sqrt(I + S^t S)
    lg = _eigh_sqrt(np.eye(n) + s @ s.T, -0.5) @ prod[m:, m:]
    rg = prod[:m, :m] @ _eigh_sqrt(np.eye(m) + s.T @ s, -0.5)
    np.testing.assert_allclose(lgyr(p1, p2), lg, atol=1e-9)
    np.testing.assert_allclose(rgyr(p1, p2), rg, atol=1e-9)


@given(sigs.flatmap(pair))
def test_gyrations_are_rotations(case):
    _, (p1, p2) = case
    tol = Tolerance(rel=1e-10)
    assert is_special_orthogonal(lgyr(p1, p2), tol)
    assert is_special_orthogonal(rgyr(p1, p2), tol)


@given(sigs.flatmap(pair))
def test_bigyrocommutative_law(case):
    _, (p1, p2) = case
    lhs = oplus(p1, p2)
    rhs = lgyr(p1, p2) @ oplus(p2, p1) @ rgyr(p1, p2)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10 * (1 + np.abs(lhs).max()))


@given(sigs.flatmap(triple_of_params))
def test_left_gyroassociative_law(case):
    _, (a, b, x) = case
    lhs = oplus_prime(a, oplus_prime(b, x))
    rhs = oplus_prime(oplus_prime(a, b), gyr(a, b, x))
    np.testing.assert_allclose(lhs, rhs, atol=1e-10 * (1 + np.abs(lhs).max()))


@given(sigs.flatmap(pair))
def test_oplus_prime_forms_agree(case):
    _, (p1, p2) = case
    np.testing.assert_allclose(oplus_prime(p1, p2), bigyro.oplus_prime_left_form(p1, p2), atol=1e-10)


@given(sigs.flatmap(lambda s: st.tuples(params(s, 2), rotations(s.n), rotations(s.m))))
def test_birotation_covariance(case):
    (p1, p2), on, om = case
    lhs = on @ oplus(p1, p2) @ om
    np.testing.assert_allclose(lhs, oplus(on @ p1 @ om, on @ p2 @ om), atol=1e-10 * (1 + np.abs(lhs).max()))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_right_gyration_trivial_when_m_is_one(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        p1, p2 = rng.uniform(-2, 2, size=(2, n, 1))
        assert abs(rgyr(p1, p2)[0, 0] - 1.0) <= 1e-12
        np.testing.assert_allclose(oplus_prime(p1, p2), oplus(p1, p2), atol=1e-12)


def test_gyr_trivial_cases():
    p = random_param(3, 2, seed=1)
    x = random_param(3, 2, seed=2)
    np.testing.assert_allclose(gyr(p, p, x), x, atol=1e-12)
    np.testing.assert_allclose(gyr(np.zeros_like(p), p, x), x, atol=1e-12)


def test_zero_is_identity_and_negation_inverse():
    p = random_param(2, 3, seed=8)
    z = np.zeros_like(p)
    np.testing.assert_array_equal(oplus(z, p), p)
    np.testing.assert_allclose(oplus(p, bigyro.ominus(p)), z, atol=1e-12)
    g = bigyro.bigyration(p, z)
    np.testing.assert_allclose(g.lg, np.eye(2), atol=1e-13)
    np.testing.assert_allclose(g.rg, np.eye(3), atol=1e-13)


def test_symmetric_product_is_a_boost():
    p1, p2 = random_param(3, 2, seed=3), random_param(3, 2, seed=4)
    b1, b2 = lorentz.biboost(p1), lorentz.biboost(p2)
    np.testing.assert_allclose(b1 @ b2 @ b1, lorentz.biboost(bigyro.symmetric_product(p1, p2)), atol=1e-10)


def test_shape_mismatch_raises():
    with pytest.raises(ShapeError):
        oplus(np.zeros((2, 3)), np.zeros((3, 2)))
    with pytest.raises(ShapeError):
        gyr(np.zeros((2, 3)), np.zeros((2, 3)), np.zeros((3, 2)))


def test_large_parameters_warn_but_compute():
    big = np.full((2, 2), 30.0)
    with pytest.warns(bigyro.ParameterNormWarning):
        s = oplus(big, big)
    assert np.all(np.isfinite(s))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        oplus(np.full((2, 2), 20.0), np.zeros((2, 2)))


def test_batched_calls_match_single_calls():
    rng = np.random.default_rng(0)
    p1 = rng.uniform(-2, 2, size=(5, 3, 2))
    p2 = rng.uniform(-2, 2, size=(5, 3, 2))
    batched = lgyr(p1, p2)
    for k in range(5):
        np.testing.assert_allclose(batched[k], lgyr(p1[k], p2[k]), atol=1e-14)


def test_signature_of_param():
    assert Signature.of_param(np.zeros((3, 2))) == Signature(2, 3)
