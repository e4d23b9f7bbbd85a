"""Small dense matrix kernels.

Every function accepts numpy arrays whose last two axes are the matrix axes;
any leading axes are treated as a batch, so a stack of 200 parameters can be
pushed through a single call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ShapeError",
    "DomainError",
    "ConsistencyError",
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "matmul",
    "transpose",
    "frob",
    "eye_like",
    "jacobi_eigh",
    "sqrt_spd",
    "inv_sqrt_spd",
    "sqrt_pair_spd",
    "is_special_orthogonal",
    "orthogonality_residual",
    "nearest_orthogonal",
    "random_so",
    "random_param",
    "sample_so",
    "sample_param",
]

JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-12


class ShapeError(ValueError):
    """Operand dimensions do not fit the operation."""


class DomainError(ValueError):
    """Operand is outside the mathematical domain of the operation."""


class ConsistencyError(ArithmeticError):
    """A redundant relation that must hold did not hold."""


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel > 0 and self.abs > 0):
            raise DomainError(f"tolerances must be positive, got rel={self.rel}, abs={self.abs}")

    def bound(self, reference_norm):
        """Acceptance bound ``rel * (1 + |reference|_F) + abs``."""
        return self.rel * (1.0 + reference_norm) + self.abs


DEFAULT_TOL = Tolerance()


def as_matrix(a, name="matrix") -> np.ndarray:
    """Coerce user input into a float64 array with at least two axes, rejecting NaN/Inf."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim < 2:
        raise ShapeError(f"{name} must have at least 2 axes, got shape {arr.shape}")
    if arr.shape[-1] == 0 or arr.shape[-2] == 0:
        raise ShapeError(f"{name} has an empty dimension: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    return arr


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def transpose(a) -> np.ndarray:
    return np.swapaxes(np.asarray(a), -1, -2)


def frob(a) -> np.ndarray:
    """Frobenius norm over the last two axes."""
    return np.sqrt(np.sum(np.square(a), axis=(-2, -1)))


def eye_like(k: int, batch_shape=()) -> np.ndarray:
    return np.broadcast_to(np.eye(k), tuple(batch_shape) + (k, k))


def jacobi_eigh(a, max_sweeps: int = JACOBI_MAX_SWEEPS, off_tol: float = JACOBI_OFF_TOL):
    """Cyclic Jacobi eigendecomposition of a (batch of) symmetric matrices.

    Returns ``(w, v, sweeps)`` with ``a = v @ diag(w) @ v.T``.  Sweeps stop once
    the off-diagonal Frobenius norm falls below ``off_tol`` relative to the
    diagonal scale and every ``|a_pq|`` is below ``off_tol * sqrt(a_pp * a_qq)``,
    or after ``max_sweeps``.  The per-pair test is what keeps small eigenvalues
    of positive definite input accurate relative to their own size.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    k = a.shape[-1]
    batch = a.shape[:-2]
    a = a.reshape((-1, k, k))
    v = np.tile(np.eye(k), (a.shape[0], 1, 1))
    sweeps = 0
    if k > 1:
        iu = np.triu_indices(k, 1)
        for sweeps in range(1, max_sweeps + 1):
            for p in range(k - 1):
                for q in range(p + 1, k):
                    apq = a[:, p, q]
                    app = a[:, p, p]
                    aqq = a[:, q, q]
                    active = np.abs(apq) > 1e-17 * np.sqrt(np.abs(app * aqq))
                    if not active.any():
                        continue
                    safe_apq = np.where(active, apq, 1.0)
                    theta = (aqq - app) / (2.0 * safe_apq)
                    t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                    t = np.where(theta == 0.0, 1.0, t)
                    t = np.where(active, t, 0.0)
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    c3 = c[:, None]
                    s3 = s[:, None]
                    # a <- a @ J, then a <- J.T @ a, with J the (p, q) plane rotation
                    colp = a[:, :, p].copy()
                    colq = a[:, :, q].copy()
                    a[:, :, p] = c3 * colp - s3 * colq
                    a[:, :, q] = s3 * colp + c3 * colq
                    rowp = a[:, p, :].copy()
                    rowq = a[:, q, :].copy()
                    a[:, p, :] = c3 * rowp - s3 * rowq
                    a[:, q, :] = s3 * rowp + c3 * rowq
                    a[:, p, q] = np.where(active, 0.0, a[:, p, q])
                    a[:, q, p] = a[:, p, q]
                    vp = v[:, :, p].copy()
                    vq = v[:, :, q].copy()
                    v[:, :, p] = c3 * vp - s3 * vq
                    v[:, :, q] = s3 * vp + c3 * vq
            upper = a[:, iu[0], iu[1]]
            off = np.sqrt(2.0 * np.sum(upper**2, axis=-1))
            diag = np.diagonal(a, axis1=1, axis2=2)
            scale = np.sqrt(np.sum(diag**2, axis=-1))
            pair_scale = np.sqrt(np.abs(diag[:, iu[0]] * diag[:, iu[1]]))
            if np.all(off <= off_tol * scale) and np.all(np.abs(upper) <= off_tol * pair_scale):
                break
    w = np.diagonal(a, axis1=1, axis2=2).copy()
    return w.reshape(batch + (k,)), v.reshape(batch + (k, k)), sweeps


def _check_spd_input(a, tol: Tolerance) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ShapeError(f"square matrix required, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix contains non-finite entries")
    asym = frob(a - transpose(a))
    if np.any(asym > tol.bound(frob(a))):
        raise DomainError(f"matrix is not symmetric (asymmetry {float(np.max(asym)):.3e})")
    return 0.5 * (a + transpose(a))


def _spectral(a, tol: Tolerance):
    sym = _check_spd_input(a, tol)
    w, v, _ = jacobi_eigh(sym)
    floor = -tol.bound(frob(sym))
    if np.any(w.min(axis=-1) < floor):
        raise DomainError(f"matrix has a negative eigenvalue ({float(w.min()):.3e})")
    return np.maximum(w, 0.0), v


def _recompose(v, d):
    return (v * d[..., None, :]) @ transpose(v)


def sqrt_spd(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Symmetric positive square root via Jacobi eigendecomposition."""
    w, v = _spectral(a, tol)
    return _recompose(v, np.sqrt(w))


def inv_sqrt_spd(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Inverse of :func:`sqrt_spd`, computed as ``v diag(1/sqrt(w)) v.T`` (no general inversion)."""
    w, v = _spectral(a, tol)
    if np.any(w <= 0.0):
        raise DomainError("matrix is singular; inverse square root undefined")
    return _recompose(v, 1.0 / np.sqrt(w))


def sqrt_pair_spd(a, tol: Tolerance = DEFAULT_TOL):
    """``(sqrt(a), sqrt(a)^-1)`` from one eigendecomposition."""
    w, v = _spectral(a, tol)
    if np.any(w <= 0.0):
        raise DomainError("matrix is singular; inverse square root undefined")
    r = np.sqrt(w)
    return _recompose(v, r), _recompose(v, 1.0 / r)


def orthogonality_residual(o) -> np.ndarray:
    o = np.asarray(o, dtype=np.float64)
    k = o.shape[-1]
    return frob(transpose(o) @ o - np.eye(k))


def is_special_orthogonal(o, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every matrix in ``o`` is in SO(k) within ``tol.rel * k``."""
    o = np.asarray(o, dtype=np.float64)
    if o.ndim < 2 or o.shape[-1] != o.shape[-2] or o.shape[-1] == 0:
        return False
    if not np.all(np.isfinite(o)):
        return False
    k = o.shape[-1]
    slack = tol.rel * k
    if np.any(orthogonality_residual(o) > slack):
        return False
    return bool(np.all(np.abs(np.linalg.det(o) - 1.0) <= slack))


def nearest_orthogonal(o) -> np.ndarray:
    """One orthonormalization pass: the orthogonal polar factor ``u @ vt``."""
    u, _, vt = np.linalg.svd(np.asarray(o, dtype=np.float64))
    return u @ vt


def sample_so(rng: np.random.Generator, k: int) -> np.ndarray:
    """SO(k) sample from ``rng``: QR of a Gaussian matrix with R's diagonal made positive, det forced to +1."""
    if k < 1:
        raise DomainError(f"SO(k) needs k >= 1, got {k}")
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    q = q * np.where(np.diag(r) < 0.0, -1.0, 1.0)
    if np.linalg.det(q) < 0.0:
        q[:, 0] = -q[:, 0]
    return q


def sample_param(rng: np.random.Generator, n: int, m: int, scale: float = 2.0) -> np.ndarray:
    """n x m matrix with i.i.d. entries uniform on [-scale, scale]."""
    if n < 1 or m < 1:
        raise DomainError(f"parameter dims must be positive, got ({n}, {m})")
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale}")
    return rng.uniform(-scale, scale, size=(n, m))


def _seeded(seed):
    if seed < 0:
        raise DomainError("seed must be non-negative")
    return np.random.default_rng(seed)


def random_so(k: int, seed: int) -> np.ndarray:
    """Seeded SO(k) sample; see :func:`sample_so`."""
    return sample_so(_seeded(seed), k)


def random_param(n: int, m: int, scale: float = 2.0, seed: int = 0) -> np.ndarray:
    """Seeded n x m matrix with entries uniform on [-scale, scale]."""
    return sample_param(_seeded(seed), n, m, scale)
