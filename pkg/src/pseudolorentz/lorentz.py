"""Lorentz transformations of order (m, n) and their parametrization.

A transformation is stored either as its (m+n) x (m+n) matrix or as the
triple ``(P, O_n, O_m)`` with ``Lambda = rho(O_m) B(P) lam(O_n)``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

import numpy as np

from . import bigyro
from .matcore import (
    DEFAULT_TOL,
    ConsistencyError,
    DomainError,
    ShapeError,
    Tolerance,
    as_matrix,
    frob,
    inv_sqrt_spd,
    is_special_orthogonal,
    nearest_orthogonal,
    orthogonality_residual,
    transpose,
)

log = logging.getLogger(__name__)

__all__ = [
    "Signature",
    "ParamTriple",
    "LorentzCheck",
    "Recognition",
    "eta",
    "pseudo_inner",
    "is_lorentz",
    "biboost",
    "rho",
    "lam",
    "assemble",
    "assemble_polar",
    "recognize",
    "recognize_with_report",
    "polar_decompose",
    "product",
    "inverse",
    "eta_inverse",
]

_SIG_RE = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


@dataclass(frozen=True)
class Signature:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DomainError(f"signature needs m, n >= 1, got ({self.m}, {self.n})")

    @property
    def dim(self) -> int:
        return self.m + self.n

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``"MxN"``, e.g. ``"2x3"``."""
        match = _SIG_RE.match(text)
        if match is None:
            raise ValueError(f"signature must look like MxN, got {text!r}")
        return cls(int(match.group(1)), int(match.group(2)))

    @classmethod
    def of_param(cls, p) -> "Signature":
        n, m = np.shape(p)[-2:]
        return cls(m, n)

    def __str__(self):
        return f"{self.m}x{self.n}"


@dataclass(frozen=True)
class ParamTriple:
    """(P, O_n, O_m); arrays may carry matching leading batch axes."""

    p: np.ndarray
    on: np.ndarray
    om: np.ndarray

    @property
    def sig(self) -> Signature:
        return Signature.of_param(self.p)

    @classmethod
    def identity(cls, sig: Signature) -> "ParamTriple":
        return cls(np.zeros((sig.n, sig.m)), np.eye(sig.n), np.eye(sig.m))

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> "ParamTriple":
        p = as_matrix(self.p, "p")
        on = as_matrix(self.on, "on")
        om = as_matrix(self.om, "om")
        n, m = p.shape[-2:]
        if on.shape[-2:] != (n, n) or om.shape[-2:] != (m, m):
            raise ShapeError(f"triple blocks {on.shape[-2:]}, {om.shape[-2:]} do not fit P of shape {(n, m)}")
        if not is_special_orthogonal(on, tol):
            raise DomainError("on is not in SO(n)")
        if not is_special_orthogonal(om, tol):
            raise DomainError("om is not in SO(m)")
        return ParamTriple(p, on, om)

    def allclose(self, other: "ParamTriple", atol: float = 1e-10) -> bool:
        return all(
            np.allclose(a, b, rtol=0.0, atol=atol)
            for a, b in ((self.p, other.p), (self.on, other.on), (self.om, other.om))
        )


@dataclass(frozen=True)
class LorentzCheck:
    """Residuals of the three SO(m, n) membership conditions; truthy iff all hold."""

    ok: bool
    metric_residual: float
    det_residual: float
    leading_minor: float

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {
            "metric_residual": self.metric_residual,
            "det_residual": self.det_residual,
            "leading_minor": self.leading_minor,
        }


@dataclass(frozen=True)
class Recognition:
    triple: ParamTriple
    fourth_relation_residual: float
    reorthonormalized: bool


def _check_sig_shape(mat, sig: Signature):
    if mat.shape[-2:] != (sig.dim, sig.dim):
        raise ShapeError(f"expected a {sig.dim}x{sig.dim} matrix for signature {sig}, got {mat.shape[-2:]}")


def eta(sig: Signature) -> np.ndarray:
    return np.diag(np.concatenate([np.ones(sig.m), -np.ones(sig.n)]))


def pseudo_inner(x, y, sig: Signature) -> float:
    """x . y = sum of the first m products minus the sum of the last n."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.size != sig.dim or y.size != sig.dim:
        raise ShapeError(f"vectors must have {sig.dim} entries, got {x.size} and {y.size}")
    return float(x[: sig.m] @ y[: sig.m] - x[sig.m :] @ y[sig.m :])


def is_lorentz(mat, sig: Signature, tol: Tolerance = DEFAULT_TOL) -> LorentzCheck:
    """Check Lambda^t eta Lambda = eta, det Lambda = 1 and a positive leading m x m minor.

    For a batch, the reported residuals are the worst over the batch.
    """
    mat = as_matrix(mat)
    _check_sig_shape(mat, sig)
    g = eta(sig)
    metric = frob(transpose(mat) @ g @ mat - g)
    det = np.linalg.det(mat)
    minor = np.linalg.det(mat[..., : sig.m, : sig.m])
    scale = frob(mat)
    ok = (
        np.all(metric <= tol.bound(scale**2))
        and np.all(np.abs(det - 1.0) <= tol.rel * sig.dim * (1.0 + scale**2))
        and np.all(minor > 0.0)
    )
    return LorentzCheck(
        ok=bool(ok),
        metric_residual=float(np.max(metric)),
        det_residual=float(np.max(np.abs(det - 1.0))),
        leading_minor=float(np.min(minor)),
    )


def biboost(p, sig: Signature | None = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """B(P) = [[sqrt(I_m + P^t P), P^t], [P, sqrt(I_n + P P^t)]]."""
    p = as_matrix(p, "p")
    if sig is not None and p.shape[-2:] != (sig.n, sig.m):
        raise ShapeError(f"P must be {sig.n}x{sig.m} for signature {sig}, got {p.shape[-2:]}")
    top = np.concatenate([bigyro.root_m(p, tol), transpose(p)], axis=-1)
    bottom = np.concatenate([p, bigyro.root_n(p, tol)], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def _block_diag(upper, lower):
    batch = np.broadcast_shapes(upper.shape[:-2], lower.shape[:-2])
    a, b = upper.shape[-1], lower.shape[-1]
    out = np.zeros(batch + (a + b, a + b))
    out[..., :a, :a] = upper
    out[..., a:, a:] = lower
    return out


def rho(om, sig: Signature, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Right rotation block-diag(O_m, I_n)."""
    om = as_matrix(om, "om")
    if om.shape[-2:] != (sig.m, sig.m):
        raise ShapeError(f"om must be {sig.m}x{sig.m}, got {om.shape[-2:]}")
    if not is_special_orthogonal(om, tol):
        raise DomainError("om is not in SO(m)")
    return _block_diag(om, np.eye(sig.n))


def lam(on, sig: Signature, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Left rotation block-diag(I_m, O_n)."""
    on = as_matrix(on, "on")
    if on.shape[-2:] != (sig.n, sig.n):
        raise ShapeError(f"on must be {sig.n}x{sig.n}, got {on.shape[-2:]}")
    if not is_special_orthogonal(on, tol):
        raise DomainError("on is not in SO(n)")
    return _block_diag(np.eye(sig.m), on)


def assemble(t: ParamTriple, sig: Signature | None = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """rho(O_m) B(P) lam(O_n)."""
    t = t.validate(tol)
    sig = sig or t.sig
    return rho(t.om, sig, tol) @ biboost(t.p, sig, tol) @ lam(t.on, sig, tol)


def assemble_polar(t: ParamTriple, sig: Signature | None = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """B(P) rho(O_m) lam(O_n), the polar-convention reading of a triple."""
    t = t.validate(tol)
    sig = sig or t.sig
    return biboost(t.p, sig, tol) @ rho(t.om, sig, tol) @ lam(t.on, sig, tol)


def recognize_with_report(lm, sig: Signature, tol: Tolerance = DEFAULT_TOL) -> Recognition:
    """Recover (P, O_n, O_m) from the blocks E11, E12, E21, E22 of a Lorentz matrix.

    P = E21, O_m = E11 sqrt(I_m + P^t P)^-1, O_n = sqrt(I_n + P P^t)^-1 E22.
    The relation O_m P^t O_n = E12 is redundant and only verified.
    """
    lm = as_matrix(lm)
    _check_sig_shape(lm, sig)
    check = is_lorentz(lm, sig, tol)
    if not check:
        raise DomainError(f"matrix is not in SO({sig.m},{sig.n}): {check.as_dict()}")
    m, n = sig.m, sig.n
    e11 = lm[..., :m, :m]
    e12 = lm[..., :m, m:]
    e21 = lm[..., m:, :m]
    e22 = lm[..., m:, m:]
    p = e21.copy()
    om = e11 @ inv_sqrt_spd(np.eye(m) + transpose(p) @ p, tol)
    on = inv_sqrt_spd(np.eye(n) + p @ transpose(p), tol) @ e22

    fixed = False
    if np.any(orthogonality_residual(om) > tol.rel * m / 10):
        om = nearest_orthogonal(om)
        fixed = True
    if np.any(orthogonality_residual(on) > tol.rel * n / 10):
        on = nearest_orthogonal(on)
        fixed = True
    if fixed:
        log.info("recognize: re-orthonormalized rotation blocks")

    fourth = frob(om @ transpose(p) @ on - e12)
    worst = float(np.max(fourth))
    if np.any(fourth > tol.bound(frob(lm) ** 2)):
        raise ConsistencyError(f"O_m P^t O_n differs from E12 by {worst:.3e}")
    return Recognition(ParamTriple(p, on, om), worst, fixed)


def recognize(lm, sig: Signature, tol: Tolerance = DEFAULT_TOL) -> ParamTriple:
    return recognize_with_report(lm, sig, tol).triple


def polar_decompose(lm, sig: Signature, tol: Tolerance = DEFAULT_TOL) -> ParamTriple:
    """Triple (P', O_n, O_m) with lm = B(P') rho(O_m) lam(O_n); P' = P O_m^t."""
    t = recognize(lm, sig, tol)
    return ParamTriple(t.p @ transpose(t.om), t.on, t.om)


def product(t1: ParamTriple, t2: ParamTriple, sig: Signature | None = None, tol: Tolerance = DEFAULT_TOL) -> ParamTriple:
    """Parameters of assemble(t1) @ assemble(t2), computed without forming matrices."""
    t1 = t1.validate(tol)
    t2 = t2.validate(tol)
    if t1.p.shape[-2:] != t2.p.shape[-2:]:
        raise ShapeError(f"signatures differ: {t1.sig} vs {t2.sig}")
    if sig is not None and t1.sig != sig:
        raise ShapeError(f"triples have signature {t1.sig}, expected {sig}")
    a = t1.p @ t2.om
    b = t1.on @ t2.p
    g = bigyro.bigyration(a, b, tol)
    return ParamTriple(bigyro.oplus(a, b, tol), g.lg @ t1.on @ t2.on, t1.om @ t2.om @ g.rg)


def inverse(t: ParamTriple, sig: Signature | None = None, tol: Tolerance = DEFAULT_TOL) -> ParamTriple:
    """(P, O_n, O_m)^-1 = (-O_n^t P O_m^t, O_n^t, O_m^t)."""
    t = t.validate(tol)
    if sig is not None and t.sig != sig:
        raise ShapeError(f"triple has signature {t.sig}, expected {sig}")
    on_t = transpose(t.on)
    om_t = transpose(t.om)
    return ParamTriple(-(on_t @ t.p @ om_t), on_t, om_t)


def eta_inverse(lm, sig: Signature) -> np.ndarray:
    """Inverse of a Lorentz matrix through eta Lambda^t eta (no numerical inversion)."""
    g = eta(sig)
    return g @ transpose(np.asarray(lm, dtype=np.float64)) @ g
