"""Parameter-level operations on real n x m matrices.

``oplus`` is the composition law of bi-boost parameters, ``lgyr``/``rgyr`` the
left (SO(n)) and right (SO(m)) rotations left over when two bi-boosts are
multiplied, and ``oplus_prime`` the operation under which the parameters form
a gyrocommutative gyrogroup with gyrations ``gyr``.

All functions are batch-aware: parameters may carry leading axes.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np

from .matcore import DEFAULT_TOL, ShapeError, Tolerance, as_matrix, frob, inv_sqrt_spd, sqrt_spd, transpose

__all__ = [
    "NORM_GUARDRAIL",
    "ParameterNormWarning",
    "Bigyration",
    "root_m",
    "root_n",
    "oplus",
    "ominus",
    "lgyr",
    "rgyr",
    "bigyration",
    "oplus_prime",
    "oplus_prime_left_form",
    "gyr",
    "square_param",
    "symmetric_product",
]

NORM_GUARDRAIL = 50.0


class ParameterNormWarning(RuntimeWarning):
    """A parameter is large enough that square-root conditioning erodes accuracy."""


class Bigyration(NamedTuple):
    lg: np.ndarray
    rg: np.ndarray


def _param(p, name="parameter"):
    p = as_matrix(p, name)
    if np.any(frob(p) > NORM_GUARDRAIL):
        warnings.warn(
            f"{name} has Frobenius norm above {NORM_GUARDRAIL:g}; expect degraded accuracy",
            ParameterNormWarning,
            stacklevel=3,
        )
    return p


def _pair(p1, p2):
    p1 = _param(p1, "p1")
    p2 = _param(p2, "p2")
    if p1.shape[-2:] != p2.shape[-2:]:
        raise ShapeError(f"parameter shapes differ: {p1.shape[-2:]} vs {p2.shape[-2:]}")
    return p1, p2


def root_m(p, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """sqrt(I_m + P^t P), the upper-left block of the bi-boost B(P)."""
    m = p.shape[-1]
    return sqrt_spd(np.eye(m) + transpose(p) @ p, tol)


def root_n(p, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """sqrt(I_n + P P^t), the lower-right block of B(P)."""
    n = p.shape[-2]
    return sqrt_spd(np.eye(n) + p @ transpose(p), tol)


def _oplus(p1, p2, tol):
    return p1 @ root_m(p2, tol) + root_n(p1, tol) @ p2


def oplus(p1, p2, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """P1 (+) P2 = P1 sqrt(I_m + P2^t P2) + sqrt(I_n + P1 P1^t) P2."""
    p1, p2 = _pair(p1, p2)
    return _oplus(p1, p2, tol)


def ominus(p) -> np.ndarray:
    return -as_matrix(p)


def _lgyr(p1, p2, tol):
    n = p1.shape[-2]
    s = _oplus(p1, p2, tol)
    core = p1 @ transpose(p2) + root_n(p1, tol) @ root_n(p2, tol)
    return inv_sqrt_spd(np.eye(n) + s @ transpose(s), tol) @ core


def _rgyr(p1, p2, tol):
    m = p1.shape[-1]
    s = _oplus(p1, p2, tol)
    core = transpose(p1) @ p2 + root_m(p1, tol) @ root_m(p2, tol)
    return core @ inv_sqrt_spd(np.eye(m) + transpose(s) @ s, tol)


def lgyr(p1, p2, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Left gyration in SO(n) generated by P1 and P2 (closed form, not re-orthonormalized)."""
    p1, p2 = _pair(p1, p2)
    return _lgyr(p1, p2, tol)


def rgyr(p1, p2, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Right gyration in SO(m) generated by P1 and P2 (closed form, not re-orthonormalized)."""
    p1, p2 = _pair(p1, p2)
    return _rgyr(p1, p2, tol)


def bigyration(p1, p2, tol: Tolerance = DEFAULT_TOL) -> Bigyration:
    p1, p2 = _pair(p1, p2)
    return Bigyration(_lgyr(p1, p2, tol), _rgyr(p1, p2, tol))


def oplus_prime(p1, p2, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Bi-gyrogroup operation P1 (+)' P2 = (P1 (+) P2) rgyr[P2, P1]."""
    p1, p2 = _pair(p1, p2)
    return _oplus(p1, p2, tol) @ _rgyr(p2, p1, tol)


def oplus_prime_left_form(p1, p2, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """The same operation written with a left gyration: lgyr[P1, P2] (P2 (+) P1)."""
    p1, p2 = _pair(p1, p2)
    return _lgyr(p1, p2, tol) @ _oplus(p2, p1, tol)


def gyr(p1, p2, x, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """gyr[P1, P2] X = lgyr[P1, P2] X rgyr[P2, P1]."""
    p1, p2 = _pair(p1, p2)
    x = as_matrix(x, "x")
    if x.shape[-2:] != p1.shape[-2:]:
        raise ShapeError(f"x has shape {x.shape[-2:]}, expected {p1.shape[-2:]}")
    return _lgyr(p1, p2, tol) @ x @ _rgyr(p2, p1, tol)


def square_param(p, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Parameter of B(P)^2, i.e. P (+) P = 2 sqrt(I_n + P P^t) P."""
    p = _param(p, "p")
    return 2.0 * root_n(p, tol) @ p


def symmetric_product(p1, p2, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Parameter Q with B(P1) B(P2) B(P1) = B(Q); Q = (P1 (+) P2) (+) lgyr[P1, P2] P1."""
    p1, p2 = _pair(p1, p2)
    return _oplus(_oplus(p1, p2, tol), _lgyr(p1, p2, tol) @ p1, tol)
