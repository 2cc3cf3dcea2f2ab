"""Exact signatures of symmetric matrices and idempotent lifting."""

from __future__ import annotations

from fractions import Fraction

from .matrices import SMat, ShapeMismatch


class NotSymmetric(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


def sym_int_signature(b) -> int:
    """Signature of a symmetric matrix with integer (or rational) entries.

    Computed by congruence diagonalization over Q: no floating point, no
    eigenvalues.  Congruence preserves signature (Sylvester), so the result
    is #positive - #negative diagonal pivots.
    """
    a = [[Fraction(x) for x in row] for row in b]
    size = len(a)
    for row in a:
        if len(row) != size:
            raise NotSymmetric("matrix is not square")
    for i in range(size):
        for j in range(i + 1, size):
            if a[i][j] != a[j][i]:
                raise NotSymmetric(f"entry ({i},{j}) != ({j},{i})")
    sig = 0
    idx = list(range(size))
    while idx:
        # find a nonzero diagonal entry among the remaining block
        k = next((i for i in idx if a[i][i] != 0), None)
        if k is None:
            # all diagonal zero; find off-diagonal nonzero and symmetrize
            pair = next(((i, j) for i in idx for j in idx if j > i and a[i][j] != 0), None)
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # congruence: row/col i += row/col j creates 2*a_ij on diagonal
            for t in range(size):
                a[i][t] += a[j][t]
            for t in range(size):
                a[t][i] += a[t][j]
            k = i
        piv = a[k][k]
        sig += 1 if piv > 0 else -1
        idx.remove(k)
        for i in list(idx):
            f = a[i][k] / piv
            if f:
                for t in range(size):
                    a[i][t] -= f * a[k][t]
                for t in range(size):
                    a[t][i] -= f * a[t][k]
    return sig


def lift_idempotent(e0: SMat, multiply, radical_nilpotency: int) -> SMat:
    """Lift an approximate idempotent to an exact one.

    ``e0`` squares to itself modulo a nilpotent ideal whose nilpotency order
    is at most ``radical_nilpotency``; ``multiply`` composes two elements
    (matrix product in the ambient algebra).  The Newton-style iteration
    e <- 3e^2 - 2e^3 squares the error, so convergence is certain within
    ceil(log2(order)) + 1 steps when the input is as promised.
    """
    if radical_nilpotency < 1:
        raise ValueError("nilpotency order must be positive")
    steps = max(1, radical_nilpotency).bit_length() + 1
    e = e0
    for _ in range(steps + 1):
        e2 = multiply(e, e)
        if e2 == e:
            return e
        e3 = multiply(e2, e)
        e = (e2.scale(3)) - (e3.scale(2))
    e2 = multiply(e, e)
    if e2 == e:
        return e
    raise NoConvergence("iteration did not reach an exact idempotent; "
                        "ideal not nilpotent at the declared order")
