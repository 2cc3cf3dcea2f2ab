"""Exact cyclotomic scalars and dense exact linear algebra."""

from .scalars import DivisionByZero, Scalar, cyclotomic_polynomial, euler_phi, root_of_unity
from .matrices import NoSolution, ShapeMismatch, SMat, nullspace, rank, solve
from .intform import NoConvergence, NotSymmetric, lift_idempotent, sym_int_signature

__all__ = [
    "DivisionByZero",
    "NoConvergence",
    "NoSolution",
    "NotSymmetric",
    "Scalar",
    "SMat",
    "ShapeMismatch",
    "cyclotomic_polynomial",
    "euler_phi",
    "lift_idempotent",
    "nullspace",
    "rank",
    "root_of_unity",
    "solve",
    "sym_int_signature",
]
