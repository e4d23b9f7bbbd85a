"""Lorentz transformations of signature (m, n) parametrized by bi-boosts and bi-rotations."""

from .bigyro import (
    Bigyration,
    ParameterNormWarning,
    bigyration,
    gyr,
    lgyr,
    ominus,
    oplus,
    oplus_prime,
    rgyr,
    square_param,
    symmetric_product,
)
from .lorentz import (
    LorentzCheck,
    ParamTriple,
    Signature,
    assemble,
    biboost,
    eta,
    inverse,
    is_lorentz,
    lam,
    polar_decompose,
    product,
    pseudo_inner,
    recognize,
    rho,
)
from .matcore import ConsistencyError, DomainError, ShapeError, Tolerance

__version__ = "0.1.0"

__all__ = [
    "Bigyration",
    "ParameterNormWarning",
    "bigyration",
    "gyr",
    "lgyr",
    "ominus",
    "oplus",
    "oplus_prime",
    "rgyr",
    "square_param",
    "symmetric_product",
    "LorentzCheck",
    "ParamTriple",
    "Signature",
    "assemble",
    "biboost",
    "eta",
    "inverse",
    "is_lorentz",
    "lam",
    "polar_decompose",
    "product",
    "pseudo_inner",
    "recognize",
    "rho",
    "ConsistencyError",
    "DomainError",
    "ShapeError",
    "Tolerance",
]
