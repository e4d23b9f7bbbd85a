"""Executable catalog of bi-gyrogroup identities and a randomized suite runner.

Each :class:`IdentityCheck` names the kinds of its free operands (``"P"`` for an
n x m parameter, ``"On"``/``"Om"`` for rotations) and an evaluator that maps a
batch of operands to absolute Frobenius residuals, optionally split into named
components.  :func:`run_check` samples operands, normalizes residuals by
``1 + max operand norm`` and aggregates them into a :class:`CheckReport`.
"""

from __future__ import annotations

import json
import warnings
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import bigyro, lorentz
from .bigyro import gyr, lgyr, oplus, oplus_prime, rgyr
from .lorentz import ParamTriple, Signature
from .matcore import frob, inv_sqrt_spd, orthogonality_residual, sample_param, sample_so, transpose

__all__ = [
    "PASS_THRESHOLD",
    "DEFAULT_SIGS",
    "MAX_FAILURES_KEPT",
    "IdentityCheck",
    "CheckReport",
    "catalog",
    "get_check",
    "trial_seed",
    "sample_operands",
    "run_check",
    "run_suite",
    "oracle_equivalence",
    "reports_to_json",
]

PASS_THRESHOLD = 1e-8
DEFAULT_SIGS = tuple(Signature(m, n) for m, n in ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 2)))
MAX_FAILURES_KEPT = 5


@dataclass(frozen=True)
class IdentityCheck:
    id: str
    operands: tuple[str, ...]
    evaluator: Callable[..., "np.ndarray | Mapping[str, np.ndarray]"] = field(repr=False)
    summary: str = ""

    @property
    def arity(self) -> int:
        return len(self.operands)

    def evaluate(self, ops: Sequence[np.ndarray]) -> dict[str, np.ndarray]:
        out = self.evaluator(*ops)
        if isinstance(out, Mapping):
            return {k: np.asarray(v, dtype=np.float64) for k, v in out.items()}
        return {"residual": np.asarray(out, dtype=np.float64)}


@dataclass(frozen=True)
class CheckReport:
    id: str
    sig: Signature
    trials: int
    max_residual: float
    mean_residual: float
    seed: int
    passed: bool
    components: dict[str, float] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "sig": [self.sig.m, self.sig.n],
            "trials": self.trials,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "seed": self.seed,
            "pass": self.passed,
        }
        if self.components:
            out["components"] = dict(self.components)
        if self.failures:
            out["failures"] = list(self.failures)
        return out


# ---------------------------------------------------------------------------
# residual helpers

def _d(a, b):
    return frob(np.asarray(a) - np.asarray(b))


def _dist_eye(a):
    return frob(a - np.eye(a.shape[-1]))


def _so_residual(o):
    """Distance of a rotation from SO(k): orthogonality defect plus |det - 1|."""
    return orthogonality_residual(o) + np.abs(np.linalg.det(o) - 1.0)


def _metric_residual(mat, sig):
    g = lorentz.eta(sig)
    return frob(transpose(mat) @ g @ mat - g)


def _sig(p):
    return Signature.of_param(p)


def _t(a):
    return transpose(a)


# ---------------------------------------------------------------------------
# evaluators

def _trivial_zero(p):
    z = np.zeros_like(p)
    return {
        "lgyr[0,P]": _dist_eye(lgyr(z, p)),
        "lgyr[P,0]": _dist_eye(lgyr(p, z)),
        "rgyr[0,P]": _dist_eye(rgyr(z, p)),
        "rgyr[P,0]": _dist_eye(rgyr(p, z)),
    }


def _inverse_pair_trivial(p):
    return {
        "lgyr[-P,P]": _dist_eye(lgyr(-p, p)),
        "lgyr[P,-P]": _dist_eye(lgyr(p, -p)),
        "rgyr[-P,P]": _dist_eye(rgyr(-p, p)),
        "rgyr[P,-P]": _dist_eye(rgyr(p, -p)),
    }


def _identity_element(p):
    z = np.zeros_like(p)
    return {"0+P": _d(oplus(z, p), p), "P+0": _d(oplus(p, z), p)}


def _inverse_element(p):
    return {"P+(-P)": frob(oplus(p, -p)), "(-P)+P": frob(oplus(-p, p))}


def _transpose_fourth(p1, p2):
    lhs = rgyr(p1, p2) @ _t(oplus(p1, p2)) @ lgyr(p1, p2)
    return _d(lhs, _t(oplus(p2, p1)))


def _oracle_column(p1, p2):
    r = oracle_equivalence(p1, p2)
    return {"oplus": r[0], "lgyr": r[1], "rgyr": r[2]}


def _biboost_square(p):
    sq = oplus(p, p)
    return {
        "matrix": _d(lorentz.biboost(p) @ lorentz.biboost(p), lorentz.biboost(sq)),
        "parameter": _d(bigyro.square_param(p), sq),
    }


def _sqrt_intertwining(p):
    rm, rn = bigyro.root_m(p), bigyro.root_n(p)
    n, m = p.shape[-2:]
    irm = inv_sqrt_spd(np.eye(m) + _t(p) @ p)
    irn = inv_sqrt_spd(np.eye(n) + p @ _t(p))
    return {
        "P root_m = root_n P": _d(p @ rm, rn @ p),
        "P^t root_n = root_m P^t": _d(_t(p) @ rn, rm @ _t(p)),
        "P root_m^-1 = root_n^-1 P": _d(p @ irm, irn @ p),
        "P^t root_n^-1 = root_m^-1 P^t": _d(_t(p) @ irn, irm @ _t(p)),
    }


def _biboost_covariance(p, on, om):
    sig = _sig(p)
    lam = lorentz.lam(on, sig)
    rho = lorentz.rho(om, sig)
    return {
        "lam B(P) = B(On P) lam": _d(lam @ lorentz.biboost(p), lorentz.biboost(on @ p) @ lam),
        "B(P) rho = rho B(P Om)": _d(lorentz.biboost(p) @ rho, rho @ lorentz.biboost(p @ om)),
        "lam rho B(P) = B(On P Om^t) lam rho": _d(
            lam @ rho @ lorentz.biboost(p), lorentz.biboost(on @ p @ _t(om)) @ lam @ rho
        ),
    }


def _lorentz_inverse(p, on, om):
    sig = _sig(p)
    t = ParamTriple(p, on, om)
    mat = lorentz.assemble(t)
    inv = lorentz.assemble(lorentz.inverse(t))
    return {
        "eta transpose form": _d(inv, lorentz.eta_inverse(mat, sig)),
        "product is identity": _dist_eye(mat @ inv),
    }


def _product_homomorphism(p1, on1, om1, p2, on2, om2):
    t1, t2 = ParamTriple(p1, on1, om1), ParamTriple(p2, on2, om2)
    return _d(lorentz.assemble(lorentz.product(t1, t2)), lorentz.assemble(t1) @ lorentz.assemble(t2))


def _metric_preservation(p1, on1, om1, p2, on2, om2):
    sig = _sig(p1)
    t1, t2 = ParamTriple(p1, on1, om1), ParamTriple(p2, on2, om2)
    return {
        "biboost": _metric_residual(lorentz.biboost(p1), sig),
        "assemble": _metric_residual(lorentz.assemble(t1), sig),
        "product": _metric_residual(lorentz.assemble(lorentz.product(t1, t2)), sig),
        "inverse": _metric_residual(lorentz.assemble(lorentz.inverse(t1)), sig),
    }


def _recognition_roundtrip(p, on, om):
    t = lorentz.recognize(lorentz.assemble(ParamTriple(p, on, om)), _sig(p))
    return {"p": _d(t.p, p), "on": _d(t.on, on), "om": _d(t.om, om)}


def _polar_roundtrip(p, on, om):
    mat = lorentz.assemble(ParamTriple(p, on, om))
    return _d(lorentz.assemble_polar(lorentz.polar_decompose(mat, _sig(p))), mat)


def _polar_of_biboost_product(p1, p2):
    sig = _sig(p1)
    t = lorentz.polar_decompose(lorentz.biboost(p1) @ lorentz.biboost(p2), sig)
    return {
        "parameter": _d(t.p, oplus_prime(p1, p2)),
        "om": _d(t.om, rgyr(p1, p2)),
        "on": _d(t.on, lgyr(p1, p2)),
    }


def _bigyration_from_biboosts(p1, p2):
    sig = _sig(p1)
    lhs = lorentz.rho(rgyr(p1, p2), sig) @ lorentz.lam(lgyr(p1, p2), sig)
    rhs = lorentz.biboost(-oplus_prime(p1, p2)) @ lorentz.biboost(p1) @ lorentz.biboost(p2)
    return _d(lhs, rhs)


def _symmetric_biboost(p1, p2):
    b1, b2 = lorentz.biboost(p1), lorentz.biboost(p2)
    return _d(b1 @ b2 @ b1, lorentz.biboost(bigyro.symmetric_product(p1, p2)))


def _symmetric_trivial_bigyration(p1, p2):
    s = oplus(p1, p2)
    lg, rg = lgyr(p1, p2), rgyr(p1, p2)
    q = p1 @ rgyr(p2, p1)
    s21 = oplus(p2, p1)
    return {
        "left": _dist_eye(lgyr(s, lg @ p1) @ lg),
        "right": _dist_eye(rg @ rgyr(s, lg @ p1)),
        "left, mirrored": _dist_eye(lgyr(q, s21) @ lgyr(p2, p1)),
        "right, mirrored": _dist_eye(rgyr(p2, p1) @ rgyr(q, s21)),
    }


def _gyr_matrix_pair_distance(a1, a2, b1, b2):
    """Distance between the (lgyr, rgyr) pairs that define gyr[a1, a2] and gyr[b1, b2]."""
    return _d(lgyr(a1, a2), lgyr(b1, b2)) + _d(rgyr(a2, a1), rgyr(b2, b1))


def _gyr_reduction(p1, p2, x):
    s = oplus_prime(p1, p2)
    t = oplus_prime(p2, p1)
    g = gyr(p1, p2, x)
    return {
        "left, on X": _d(g, gyr(s, p2, x)),
        "right, on X": _d(g, gyr(p1, t, x)),
        "left, matrices": _gyr_matrix_pair_distance(p1, p2, s, p2),
        "right, matrices": _gyr_matrix_pair_distance(p1, p2, p1, t),
    }


def _g5(p1, p2, x):
    s = oplus_prime(p1, p2)
    return {
        "on X": _d(gyr(p1, p2, x), gyr(s, p2, x)),
        "matrices": _gyr_matrix_pair_distance(p1, p2, s, p2),
    }


def _g4(p1, p2, x, y):
    return _d(gyr(p1, p2, oplus_prime(x, y)), oplus_prime(gyr(p1, p2, x), gyr(p1, p2, y)))


def _gyr_via_prime(p1, p2):
    n, m = p1.shape[-2:]
    s12 = oplus_prime(p1, p2)
    s21 = oplus_prime(p2, p1)
    core_l = p1 @ _t(p2) + bigyro.root_n(p1) @ bigyro.root_n(p2)
    core_r = _t(p1) @ p2 + bigyro.root_m(p1) @ bigyro.root_m(p2)
    return {
        "lgyr": _d(lgyr(p1, p2), inv_sqrt_spd(np.eye(n) + s12 @ _t(s12)) @ core_l),
        "rgyr": _d(rgyr(p1, p2), core_r @ inv_sqrt_spd(np.eye(m) + _t(s21) @ s21)),
    }


def _prime_rotation_automorphism(p1, p2, on, om):
    return {
        "left": _d(on @ oplus_prime(p1, p2), oplus_prime(on @ p1, on @ p2)),
        "right": _d(oplus_prime(p1, p2) @ om, oplus_prime(p1 @ om, p2 @ om)),
        "both": _d(on @ oplus_prime(p1, p2) @ om, oplus_prime(on @ p1 @ om, on @ p2 @ om)),
    }


def _lgyr_composition(p1, p2, x):
    s = oplus_prime(p2, x)
    lhs = lgyr(-oplus_prime(p1, p2), oplus_prime(p1, s)) @ lgyr(p1, s) @ lgyr(p2, x)
    return _dist_eye(_t(lgyr(p1, p2)) @ lhs)


def _rgyr_composition(p1, p2, x):
    s = oplus_prime(p2, x)
    lhs = rgyr(-oplus_prime(p1, p2), oplus_prime(p1, s)) @ rgyr(p1, s) @ rgyr(p2, x)
    return _dist_eye(_t(rgyr(p1, p2)) @ lhs)


def _pp_checks():
    """Identities in the two-parameter operands (P1, P2) expressed with lambdas."""
    P2 = ("P", "P")
    P3 = ("P", "P", "P")
    op, opp = oplus, oplus_prime
    return [
        IdentityCheck("bigyration_trivial_zero", ("P",), _trivial_zero, "gyrations generated with a zero parameter are trivial"),
        IdentityCheck("lgyr_PP_trivial", ("P",), lambda p: _dist_eye(lgyr(p, p)), "lgyr[P, P] = I"),
        IdentityCheck("rgyr_PP_trivial", ("P",), lambda p: _dist_eye(rgyr(p, p)), "rgyr[P, P] = I"),
        IdentityCheck("bigyration_inverse_pair_trivial", ("P",), _inverse_pair_trivial, "gyrations of (-P, P) and (P, -P) are trivial"),
        IdentityCheck("oplus_identity", ("P",), _identity_element, "0 is a two-sided identity of oplus"),
        IdentityCheck("oplus_inverse", ("P",), _inverse_element, "-P is a two-sided inverse of P under oplus"),
        IdentityCheck(
            "oplus_automorphic_inverse", P2,
            lambda a, b: _d(-op(a, b), op(-a, -b)),
            "-(P1 + P2) = (-P1) + (-P2)",
        ),
        IdentityCheck(
            "bigyration_even", P2,
            lambda a, b: {"lgyr": _d(lgyr(-a, -b), lgyr(a, b)), "rgyr": _d(rgyr(-a, -b), rgyr(a, b))},
            "gyrations are unchanged when both generators are negated",
        ),
        IdentityCheck(
            "oplus_transpose_duality", P2,
            lambda a, b: _d(_t(op(b, a)), op(_t(a), _t(b))),
            "(P2 + P1)^t = P1^t + P2^t",
        ),
        IdentityCheck("oplus_transpose_relation", P2, _transpose_fourth, "rgyr (P1 + P2)^t lgyr = (P2 + P1)^t"),
        IdentityCheck(
            "lgyr_special_orthogonal", P2, lambda a, b: _so_residual(lgyr(a, b)), "lgyr[P1, P2] lies in SO(n)"
        ),
        IdentityCheck(
            "rgyr_special_orthogonal", P2, lambda a, b: _so_residual(rgyr(a, b)), "rgyr[P1, P2] lies in SO(m)"
        ),
        IdentityCheck("product_oracle_column_form", P2, _oracle_column, "closed forms match recognize(B(P1) B(P2))"),
        IdentityCheck("biboost_square", ("P",), _biboost_square, "B(P)^2 = B(P + P)"),
        IdentityCheck("sqrt_intertwining", ("P",), _sqrt_intertwining, "P and P^t intertwine the two square-root blocks"),
        IdentityCheck(
            "bigyrocomm_op", P2,
            lambda a, b: _d(op(a, b), lgyr(a, b) @ op(b, a) @ rgyr(a, b)),
            "P1 + P2 = lgyr[P1, P2] (P2 + P1) rgyr[P1, P2]",
        ),
        IdentityCheck(
            "lgyr_inversion_law", P2, lambda a, b: _dist_eye(lgyr(b, a) @ lgyr(a, b)), "lgyr[P2, P1] lgyr[P1, P2] = I"
        ),
        IdentityCheck(
            "rgyr_inversion_law", P2, lambda a, b: _dist_eye(rgyr(a, b) @ rgyr(b, a)), "rgyr[P1, P2] rgyr[P2, P1] = I"
        ),
        IdentityCheck(
            "bigyroassoc_op", P3,
            lambda a, b, c: _d(op(op(a, b), lgyr(a, b) @ c), op(a @ rgyr(b, c), op(b, c))),
            "(P1 + P2) + lgyr[P1, P2] P3 = P1 rgyr[P2, P3] + (P2 + P3)",
        ),
        IdentityCheck(
            "bigyration_associativity_defect", P3,
            lambda a, b, c: {
                "left": _d(
                    lgyr(op(a, b), lgyr(a, b) @ c) @ lgyr(a, b),
                    lgyr(a @ rgyr(b, c), op(b, c)) @ lgyr(b, c),
                ),
                "right": _d(
                    rgyr(a, b) @ rgyr(op(a, b), lgyr(a, b) @ c),
                    rgyr(b, c) @ rgyr(a @ rgyr(b, c), op(b, c)),
                ),
            },
            "gyrations left over on both sides of the bi-gyroassociative law agree",
        ),
        IdentityCheck(
            "left_cancellation_op", P2,
            lambda a, b: _d(op(-(a @ rgyr(a, b)), op(a, b)), b),
            "(-P1 rgyr[P1, P2]) + (P1 + P2) = P2",
        ),
        IdentityCheck(
            "right_cancellation_op", P2,
            lambda a, b: _d(op(op(a, b), -(lgyr(a, b) @ b)), a),
            "(P1 + P2) + (-lgyr[P1, P2] P2) = P1",
        ),
        IdentityCheck(
            "left_bigyroassoc_op", P3,
            lambda a, b, c: _d(
                op(a, op(b, c)),
                op(op(a @ rgyr(c, b), b), lgyr(a @ rgyr(c, b), b) @ c),
            ),
            "P1 + (P2 + P3) regrouped to the left",
        ),
        IdentityCheck(
            "right_bigyroassoc_op", P3,
            lambda a, b, c: _d(
                op(op(a, b), c),
                op(a @ rgyr(b, lgyr(b, a) @ c), op(b, lgyr(b, a) @ c)),
            ),
            "(P1 + P2) + P3 regrouped to the right",
        ),
        IdentityCheck(
            "gyration_reduction_by_sum_second", P2,
            lambda a, b: {
                "lgyr": _d(lgyr(a, b), lgyr(-(lgyr(a, b) @ b), op(a, b))),
                "rgyr": _d(rgyr(a, b), rgyr(-(lgyr(a, b) @ b), op(a, b))),
            },
            "gyrations of (P1, P2) regenerated by (-lgyr P2, P1 + P2)",
        ),
        IdentityCheck(
            "gyration_reduction_by_sum_first", P2,
            lambda a, b: {
                "lgyr": _d(lgyr(a, b), lgyr(op(a, b), -(a @ rgyr(a, b)))),
                "rgyr": _d(rgyr(a, b), rgyr(op(a, b), -(a @ rgyr(a, b)))),
            },
            "gyrations of (P1, P2) regenerated by (P1 + P2, -P1 rgyr)",
        ),
        IdentityCheck(
            "lgyr_reduction", P2,
            lambda a, b: {
                "sum first": _d(lgyr(a, b), lgyr(op(a, b), b @ rgyr(a, b))),
                "sum second": _d(lgyr(a, b), lgyr(a @ rgyr(b, a), op(b, a))),
            },
            "left gyration reduction by P1 + P2 and P2 + P1",
        ),
        IdentityCheck(
            "rgyr_reduction", P2,
            lambda a, b: {
                "sum second": _d(rgyr(a, b), rgyr(lgyr(a, b) @ a, op(a, b))),
                "sum first": _d(rgyr(a, b), rgyr(op(b, a), lgyr(b, a) @ b)),
            },
            "right gyration reduction by P1 + P2 and P2 + P1",
        ),
        IdentityCheck(
            "bigyration_reduction", P2,
            lambda a, b: {
                "lgyr": _d(lgyr(a, b), lgyr(lgyr(a, b) @ a, op(a, b))),
                "rgyr": _d(rgyr(a, b), rgyr(op(a, b), b @ rgyr(a, b))),
            },
            "mixed left and right gyration reduction",
        ),
        IdentityCheck("symmetric_product_biboost", P2, _symmetric_biboost, "B(P1) B(P2) B(P1) is a bi-boost"),
        IdentityCheck(
            "symmetric_product_trivial_bigyration", P2, _symmetric_trivial_bigyration,
            "the symmetric bi-boost product carries no rotation",
        ),
        IdentityCheck(
            "symmetric_product_two_forms", P2,
            lambda a, b: _d(op(op(a, b), lgyr(a, b) @ a), op(a @ rgyr(b, a), op(b, a))),
            "(P1 + P2) + lgyr P1 = P1 rgyr[P2, P1] + (P2 + P1)",
        ),
        IdentityCheck(
            "gyration_reduction_prime", P2,
            lambda a, b: {
                "lgyr": _d(lgyr(a, b), lgyr(opp(a, b), -a)),
                "rgyr": _d(rgyr(a, b), rgyr(opp(a, b), -a)),
            },
            "gyrations of (P1, P2) regenerated by (P1 +' P2, -P1)",
        ),
        IdentityCheck(
            "oplus_prime_forms", P2,
            lambda a, b: {
                "left form": _d(opp(a, b), bigyro.oplus_prime_left_form(a, b)),
                "oplus from prime, right": _d(op(a, b), opp(a, b) @ rgyr(a, b)),
                "oplus from prime, left": _d(op(a, b), lgyr(a, b) @ opp(b, a)),
            },
            "the two expressions of +' and their inversions",
        ),
        IdentityCheck("gyrations_via_oplus_prime", P2, _gyr_via_prime, "gyrations written with +' sums"),
        IdentityCheck(
            "oplus_prime_rotation_automorphism", ("P", "P", "On", "Om"), _prime_rotation_automorphism,
            "rotations distribute over +'",
        ),
        IdentityCheck(
            "oplus_prime_left_cancellation", P2, lambda a, b: _d(opp(-a, opp(a, b)), b), "-P1 +' (P1 +' P2) = P2"
        ),
        IdentityCheck(
            "oplus_prime_automorphic_inverse", P2,
            lambda a, b: _d(-opp(a, b), opp(-a, -b)),
            "-(P1 +' P2) = (-P1) +' (-P2)",
        ),
        IdentityCheck("biboost_product_polar", P2, _polar_of_biboost_product, "polar parameter of B(P1) B(P2) is P1 +' P2"),
        IdentityCheck("bigyration_from_biboosts", P2, _bigyration_from_biboosts, "rho(rgyr) lam(lgyr) = B(-(P1 +' P2)) B(P1) B(P2)"),
        IdentityCheck("lgyr_composition_prime", P3, _lgyr_composition, "three chained left gyrations collapse to lgyr[P1, P2]"),
        IdentityCheck("rgyr_composition_prime", P3, _rgyr_composition, "three chained right gyrations collapse to rgyr[P1, P2]"),
        IdentityCheck(
            "left_bigyroassoc_prime", P3,
            lambda a, b, x: _d(opp(a, opp(b, x)), opp(opp(a, b), lgyr(a, b) @ x @ rgyr(b, a))),
            "P1 +' (P2 +' X) = (P1 +' P2) +' lgyr X rgyr",
        ),
        IdentityCheck(
            "right_bigyroassoc_prime", P3,
            lambda a, b, x: _d(opp(opp(a, b), x), opp(a, opp(b, lgyr(b, a) @ x @ rgyr(a, b)))),
            "(P1 +' P2) +' X = P1 +' (P2 +' lgyr X rgyr)",
        ),
        IdentityCheck(
            "bigyrocomm_prime", P2,
            lambda a, b: _d(opp(a, b), lgyr(a, b) @ opp(b, a) @ rgyr(b, a)),
            "P1 +' P2 = lgyr[P1, P2] (P2 +' P1) rgyr[P2, P1]",
        ),
        IdentityCheck(
            "gyr_right_gyroassoc", P3,
            lambda a, b, x: _d(opp(opp(a, b), x), opp(a, opp(b, gyr(b, a, x)))),
            "(P1 +' P2) +' X = P1 +' (P2 +' gyr[P2, P1] X)",
        ),
        IdentityCheck(
            "gyr_inversion", P3, lambda a, b, x: _d(gyr(b, a, gyr(a, b, x)), x), "gyr[P2, P1] gyr[P1, P2] X = X"
        ),
        IdentityCheck(
            "lgyr_reduction_prime", P2,
            lambda a, b: {
                "left": _d(lgyr(a, b), lgyr(opp(a, b), b)),
                "right": _d(lgyr(a, b), lgyr(a, opp(b, a))),
            },
            "lgyr[P1, P2] = lgyr[P1 +' P2, P2] = lgyr[P1, P2 +' P1]",
        ),
        IdentityCheck(
            "rgyr_reduction_prime", P2,
            lambda a, b: {
                "left": _d(rgyr(a, b), rgyr(opp(a, b), b)),
                "right": _d(rgyr(a, b), rgyr(a, opp(b, a))),
            },
            "rgyr[P1, P2] = rgyr[P1 +' P2, P2] = rgyr[P1, P2 +' P1]",
        ),
        IdentityCheck("gyr_reduction", P3, _gyr_reduction, "gyr[P1, P2] = gyr[P1 +' P2, P2] = gyr[P1, P2 +' P1]"),
        IdentityCheck(
            "gyro_axioms_G1", ("P",), lambda p: _d(opp(np.zeros_like(p), p), p), "0 +' P = P"
        ),
        IdentityCheck("gyro_axioms_G2", ("P",), lambda p: frob(opp(-p, p)), "-P +' P = 0"),
        IdentityCheck(
            "gyro_axioms_G3", P3,
            lambda a, b, x: _d(opp(a, opp(b, x)), opp(opp(a, b), gyr(a, b, x))),
            "P1 +' (P2 +' X) = (P1 +' P2) +' gyr[P1, P2] X",
        ),
        IdentityCheck("gyro_axioms_G4", ("P", "P", "P", "P"), _g4, "gyr[P1, P2] is an automorphism of +'"),
        IdentityCheck("gyro_axioms_G5", P3, _g5, "gyr[P1, P2] = gyr[P1 +' P2, P2]"),
        IdentityCheck(
            "gyro_axioms_G6", P2,
            lambda a, b: _d(opp(a, b), gyr(a, b, opp(b, a))),
            "P1 +' P2 = gyr[P1, P2] (P2 +' P1)",
        ),
    ]


def _rotation_checks():
    return [
        IdentityCheck(
            "oplus_left_rotation_automorphism", ("P", "P", "On"),
            lambda a, b, on: _d(on @ oplus(a, b), oplus(on @ a, on @ b)),
            "On (P1 + P2) = On P1 + On P2",
        ),
        IdentityCheck(
            "oplus_right_rotation_automorphism", ("P", "P", "Om"),
            lambda a, b, om: _d(oplus(a, b) @ om, oplus(a @ om, b @ om)),
            "(P1 + P2) Om = P1 Om + P2 Om",
        ),
        IdentityCheck(
            "oplus_birotation_automorphism", ("P", "P", "On", "Om"),
            lambda a, b, on, om: _d(on @ oplus(a, b) @ om, oplus(on @ a @ om, on @ b @ om)),
            "On (P1 + P2) Om = On P1 Om + On P2 Om",
        ),
        IdentityCheck(
            "lgyr_rotation_commuting", ("P", "P", "On"),
            lambda a, b, on: _d(on @ lgyr(a, b), lgyr(on @ a, on @ b) @ on),
            "On lgyr[P1, P2] = lgyr[On P1, On P2] On",
        ),
        IdentityCheck(
            "rgyr_rotation_commuting", ("P", "P", "Om"),
            lambda a, b, om: _d(rgyr(a, b) @ om, om @ rgyr(a @ om, b @ om)),
            "rgyr[P1, P2] Om = Om rgyr[P1 Om, P2 Om]",
        ),
        IdentityCheck(
            "lgyr_self_commuting", ("P", "P"),
            lambda a, b: _d(lgyr(lgyr(a, b) @ a, lgyr(a, b) @ b), lgyr(a, b)),
            "lgyr[L P1, L P2] = L for L = lgyr[P1, P2]",
        ),
        IdentityCheck(
            "rgyr_self_commuting", ("P", "P"),
            lambda a, b: _d(rgyr(a @ rgyr(a, b), b @ rgyr(a, b)), rgyr(a, b)),
            "rgyr[P1 R, P2 R] = R for R = rgyr[P1, P2]",
        ),
        IdentityCheck(
            "lgyr_right_rotation_invariance", ("P", "P", "Om"),
            lambda a, b, om: _d(lgyr(a @ om, b @ om), lgyr(a, b)),
            "lgyr[P1 Om, P2 Om] = lgyr[P1, P2]",
        ),
        IdentityCheck(
            "rgyr_left_rotation_invariance", ("P", "P", "On"),
            lambda a, b, on: _d(rgyr(on @ a, on @ b), rgyr(a, b)),
            "rgyr[On P1, On P2] = rgyr[P1, P2]",
        ),
        IdentityCheck("biboost_rotation_covariance", ("P", "On", "Om"), _biboost_covariance, "rotations slide through bi-boosts"),
        IdentityCheck(
            "biboost_inverse", ("P",), lambda p: _dist_eye(lorentz.biboost(p) @ lorentz.biboost(-p)), "B(P) B(-P) = I"
        ),
        IdentityCheck("lorentz_inverse", ("P", "On", "Om"), _lorentz_inverse, "inverse triple assembles to the inverse matrix"),
        IdentityCheck(
            "product_homomorphism", ("P", "On", "Om", "P", "On", "Om"), _product_homomorphism,
            "assemble(product(t1, t2)) = assemble(t1) assemble(t2)",
        ),
        IdentityCheck(
            "metric_preservation", ("P", "On", "Om", "P", "On", "Om"), _metric_preservation,
            "constructed matrices preserve the pseudo-inner product",
        ),
        IdentityCheck("recognition_roundtrip", ("P", "On", "Om"), _recognition_roundtrip, "recognize(assemble(t)) = t"),
        IdentityCheck("polar_roundtrip", ("P", "On", "Om"), _polar_roundtrip, "polar factors reassemble the matrix"),
    ]


_CATALOG: tuple[IdentityCheck, ...] | None = None


def catalog() -> list[IdentityCheck]:
    global _CATALOG
    if _CATALOG is None:
        checks = tuple(_pp_checks() + _rotation_checks())
        ids = [c.id for c in checks]
        assert len(ids) == len(set(ids)), "duplicate check id"
        _CATALOG = checks
    return list(_CATALOG)


def get_check(check_id: str) -> IdentityCheck:
    for c in catalog():
        if c.id == check_id:
            return c
    raise KeyError(f"unknown check id {check_id!r}")


# ---------------------------------------------------------------------------
# oracle

def oracle_equivalence(p1, p2):
    """Frobenius residuals of (oplus, lgyr, rgyr) against recognition of B(P1) B(P2)."""
    p1, p2 = np.asarray(p1, dtype=np.float64), np.asarray(p2, dtype=np.float64)
    sig = Signature.of_param(p1)
    g = bigyro.bigyration(p1, p2)
    t = lorentz.recognize(lorentz.biboost(p1, sig) @ lorentz.biboost(p2, sig), sig)
    res = (_d(bigyro.oplus(p1, p2), t.p), _d(g.lg, t.on), _d(g.rg, t.om))
    if np.ndim(res[0]) == 0:
        return tuple(float(r) for r in res)
    return res


# ---------------------------------------------------------------------------
# runner

def trial_seed(seed: int, check_id: str, sig: Signature, trial: int) -> list[int]:
    """Entropy words for one trial; independent of execution order."""
    return [seed, zlib.crc32(check_id.encode()), sig.m, sig.n, trial]


def sample_operands(kinds: Sequence[str], sig: Signature, rng: np.random.Generator, scale: float):
    out = []
    for kind in kinds:
        if kind == "P":
            out.append(sample_param(rng, sig.n, sig.m, scale))
        elif kind == "On":
            out.append(sample_so(rng, sig.n))
        elif kind == "Om":
            out.append(sample_so(rng, sig.m))
        else:
            raise ValueError(f"unknown operand kind {kind!r}")
    return out


def _matrix_doc(a):
    a = np.asarray(a)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": [float(v) for v in a.reshape(-1)]}


def _run_check(check: IdentityCheck, sig: Signature, trials: int, seed: int, scale: float) -> CheckReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    draws = [
        sample_operands(check.operands, sig, np.random.default_rng(trial_seed(seed, check.id, sig, t)), scale)
        for t in range(trials)
    ]
    ops = [np.stack([d[i] for d in draws]) for i in range(check.arity)]
    norm = 1.0 + np.max(np.stack([frob(o) for o in ops]), axis=0)
    comps = {k: v / norm for k, v in check.evaluate(ops).items()}
    total = np.max(np.stack(list(comps.values())), axis=0)
    total = np.where(np.isfinite(total), total, np.inf)
    worst = float(np.max(total))
    passed = worst <= PASS_THRESHOLD

    failures = []
    for t in np.flatnonzero(total > PASS_THRESHOLD)[:MAX_FAILURES_KEPT]:
        failures.append(
            {
                "trial": int(t),
                "seed": trial_seed(seed, check.id, sig, int(t)),
                "sig": [sig.m, sig.n],
                "residual": float(total[t]),
                "operands": [{"kind": k, **_matrix_doc(d)} for k, d in zip(check.operands, draws[t])],
            }
        )
    components = {k: float(np.max(v)) for k, v in comps.items()} if len(comps) > 1 else {}
    return CheckReport(
        id=check.id,
        sig=sig,
        trials=trials,
        max_residual=worst,
        mean_residual=float(np.mean(total)),
        seed=seed,
        passed=bool(passed),
        components=components,
        failures=failures,
    )


def run_check(
    check: IdentityCheck | str, sig: Signature, trials: int = 200, seed: int = 0, scale: float = 2.0
) -> CheckReport:
    """Evaluate one catalog entry on ``trials`` random instances at signature ``sig``."""
    if isinstance(check, str):
        check = get_check(check)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", bigyro.ParameterNormWarning)
        return _run_check(check, sig, trials, seed, scale)


def run_suite(
    sigs: Sequence[Signature] = DEFAULT_SIGS,
    trials: int = 200,
    seed: int = 0,
    scale: float = 2.0,
    workers: int = 1,
    checks: Sequence[IdentityCheck] | None = None,
) -> list[CheckReport]:
    """Run every catalog entry at every signature; report order is catalog order within signature order."""
    checks = catalog() if checks is None else list(checks)
    cells = [(c, s) for s in sigs for c in checks]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", bigyro.ParameterNormWarning)
        if workers > 1 and len(cells) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(lambda cell: _run_check(cell[0], cell[1], trials, seed, scale), cells))
        return [_run_check(c, s, trials, seed, scale) for c, s in cells]


def reports_to_json(reports: Sequence[CheckReport], indent: int | None = 2) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=indent)
