import numpy as np
import pytest
from conftest import SIGS, sigs, triples
from hypothesis import given
from hypothesis import strategies as st

from pseudolorentz import lorentz
from pseudolorentz.lorentz import ParamTriple, Signature
from pseudolorentz.matcore import ConsistencyError, DomainError, ShapeError, frob, random_param, random_so


def _metric_defect(mat, sig):
    g = lorentz.eta(sig)
    return np.abs(mat.T @ g @ mat - g).max()


def test_signature_parse_and_format():
    assert Signature.parse("2x3") == Signature(2, 3)
    assert Signature.parse(" 1X1 ") == Signature(1, 1)
    assert str(Signature(3, 2)) == "3x2"
    assert Signature(2, 3).dim == 5
    for bad in ("2-3", "x3", "2x", ""):
        with pytest.raises(ValueError):
            Signature.parse(bad)
    with pytest.raises(DomainError):
        Signature(0, 2)


def test_eta_and_inner_product():
    sig = Signature(1, 2)
    np.testing.assert_array_equal(lorentz.eta(sig), np.diag([1.0, -1.0, -1.0]))
    assert lorentz.pseudo_inner([2, 1, 1], [2, 1, 1], sig) == 2.0
    assert lorentz.pseudo_inner([1, 1, 0], [1, 1, 0], sig) == 0.0
    with pytest.raises(ShapeError):
        lorentz.pseudo_inner([1, 2], [1, 2], sig)


def test_biboost_exact_fixture():
    # sqrt(1 + 9/16) = 5/4
    np.testing.assert_allclose(lorentz.biboost([[0.75]]), [[1.25, 0.75], [0.75, 1.25]], atol=1e-15)


def test_biboost_zero_is_identity():
    for sig in SIGS:
        np.testing.assert_array_equal(lorentz.biboost(np.zeros((sig.n, sig.m))), np.eye(sig.dim))


def test_biboost_shape_checked():
    with pytest.raises(ShapeError):
        lorentz.biboost(np.zeros((2, 3)), Signature(2, 3))


def test_is_lorentz_rejections():
    sig = Signature(1, 1)
    assert lorentz.is_lorentz(np.eye(2), sig)
    # preserves the metric but flips orientation
    assert not lorentz.is_lorentz(np.diag([1.0, -1.0]), sig)
    # det 1, preserves the metric, reverses time
    flip = lorentz.is_lorentz(-np.eye(2), sig)
    assert not flip and flip.leading_minor == -1.0
    scaled = lorentz.is_lorentz(2 * np.eye(2), sig)
    assert not scaled and scaled.metric_residual > 1
    with pytest.raises(ShapeError):
        lorentz.is_lorentz(np.eye(3), sig)


def test_rho_lam_blocks():
    sig = Signature(2, 3)
    om, on = random_so(2, 1), random_so(3, 2)
    r, l = lorentz.rho(om, sig), lorentz.lam(on, sig)
    np.testing.assert_array_equal(r[:2, :2], om)
    np.testing.assert_array_equal(r[2:, 2:], np.eye(3))
    np.testing.assert_array_equal(l[2:, 2:], on)
    assert lorentz.is_lorentz(r, sig) and lorentz.is_lorentz(l, sig)
    with pytest.raises(DomainError):
        lorentz.rho(np.diag([1.0, -1.0]), sig)
    with pytest.raises(ShapeError):
        lorentz.lam(np.eye(2), sig)


@given(sigs.flatmap(lambda s: st.tuples(st.just(s), triples(s))))
def test_assemble_recognize_roundtrip(case):
    sig, t = case
    mat = lorentz.assemble(t)
    assert lorentz.is_lorentz(mat, sig)
    back = lorentz.recognize(mat, sig)
    assert back.allclose(t, atol=1e-10)


@given(sigs.flatmap(lambda s: st.tuples(st.just(s), triples(s))))
def test_polar_decomposition(case):
    sig, t = case
    mat = lorentz.assemble(t)
    polar = lorentz.polar_decompose(mat, sig)
    np.testing.assert_allclose(polar.p, t.p @ t.om.T, atol=1e-10)
    np.testing.assert_allclose(lorentz.assemble_polar(polar), mat, atol=1e-9 * (1 + np.abs(mat).max()))


@given(sigs.flatmap(lambda s: st.tuples(st.just(s), triples(s), triples(s))))
def test_product_is_homomorphism(case):
    sig, t1, t2 = case
    lhs = lorentz.assemble(lorentz.product(t1, t2, sig))
    rhs = lorentz.assemble(t1) @ lorentz.assemble(t2)
    assert frob(lhs - rhs) <= 1e-9 * (1 + frob(rhs))
    assert _metric_defect(lhs, sig) <= 1e-9


@given(sigs.flatmap(lambda s: st.tuples(st.just(s), triples(s))))
def test_inverse_matches_eta_transpose(case):
    sig, t = case
    mat = lorentz.assemble(t)
    inv = lorentz.assemble(lorentz.inverse(t, sig))
    np.testing.assert_allclose(inv, lorentz.eta_inverse(mat, sig), atol=1e-10 * (1 + np.abs(mat).max()))
    np.testing.assert_allclose(mat @ inv, np.eye(sig.dim), atol=1e-9)


def test_identity_triple_is_neutral():
    sig = Signature(2, 3)
    e = ParamTriple.identity(sig)
    t = ParamTriple(random_param(3, 2, seed=1), random_so(3, 2), random_so(2, 3))
    np.testing.assert_array_equal(lorentz.assemble(e), np.eye(5))
    assert lorentz.product(e, t).allclose(t, atol=1e-12)
    assert lorentz.product(t, e).allclose(t, atol=1e-12)
    assert lorentz.product(t, lorentz.inverse(t)).allclose(e, atol=1e-10)


def test_boost_times_opposite_boost_is_identity():
    sig = Signature(2, 2)
    p = random_param(2, 2, seed=9)
    t = lorentz.product(ParamTriple(p, np.eye(2), np.eye(2)), ParamTriple(-p, np.eye(2), np.eye(2)))
    assert t.allclose(ParamTriple.identity(sig), atol=1e-12)


def test_triple_validation():
    sig = Signature(1, 2)
    p = np.zeros((2, 1))
    with pytest.raises(DomainError):
        lorentz.assemble(ParamTriple(p, np.diag([1.0, -1.0]), np.eye(1)))
    with pytest.raises(ShapeError):
        lorentz.assemble(ParamTriple(p, np.eye(3), np.eye(1)))
    with pytest.raises(ShapeError):
        lorentz.product(ParamTriple.identity(sig), ParamTriple.identity(Signature(2, 1)))


def test_recognize_rejects_non_lorentz():
    with pytest.raises(DomainError):
        lorentz.recognize(np.diag([1.0, -1.0, 1.0]), Signature(1, 2))


def test_recognize_repairs_rotation_drift():
    sig = Signature(2, 2)
    t = ParamTriple(random_param(2, 2, seed=4), random_so(2, 5), random_so(2, 6))
    mat = lorentz.assemble(t)
    clean = lorentz.recognize_with_report(mat, sig)
    assert not clean.reorthonormalized
    assert clean.fourth_relation_residual < 1e-12
    # drift small enough to pass the metric test but above the repair threshold
    drifted = mat.copy()
    drifted[2:, 2:] += 3e-10
    rec = lorentz.recognize_with_report(drifted, sig)
    assert rec.reorthonormalized
    assert rec.triple.allclose(t, atol=1e-8)


def test_fourth_relation_inconsistency_is_reported(monkeypatch):
    sig = Signature(1, 1)
    mat = lorentz.biboost([[0.75]])
    # make the metric test blind so that only the redundant relation can catch the edit
    monkeypatch.setattr(lorentz, "is_lorentz", lambda *a, **k: lorentz.LorentzCheck(True, 0.0, 0.0, 1.0))
    bad = mat.copy()
    bad[0, 1] = 0.5
    with pytest.raises(ConsistencyError):
        lorentz.recognize(bad, sig)
