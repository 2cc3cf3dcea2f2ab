"""Certified equality checking of integer tensor expressions.

Structure tensors over Q(zeta_N) are specialized at primitive N-th roots of
unity modulo primes p = 1 (mod N) and combined with vectorized int64
numpy contractions.  Every tensor carries an exact height bound that is
propagated through each operation; an expression is declared zero only
when the product of primes exceeds twice the propagated bound, which makes
the zero test deterministic, not probabilistic.
"""

from __future__ import annotations

import numpy as np

from .matrices import SMat, _modular_primes, _specialize
from .scalars import euler_phi, reduction_rows


class _BadPrime(Exception):
    def __init__(self, p):
        self.p = p


class ModSession:
    """A fixed pool of (prime, root) specializations of Q(zeta_N)."""

    def __init__(self, n: int, prime_count: int = 4, exclude: frozenset = frozenset()):
        self.n = n
        self.phi = euler_phi(n)
        if self.phi > 1:
            rr = reduction_rows(n)
            self.red_growth = 1 + max(sum(abs(x) for x in row) for row in rr)
        else:
            self.red_growth = 1
        pool = _modular_primes(n, prime_count + len(exclude))
        self.primes = tuple(p for p in pool if p not in exclude)[:prime_count]
        self.pairs = [(p, r) for p in self.primes for r in range(self.phi)]
        self.capacity = 1
        for p in self.primes:
            self.capacity *= p

    def covers(self, bound: int) -> bool:
        return self.capacity > 2 * bound

    def lift(self, m: SMat, reshape: tuple[int, ...] | None = None) -> MTensor:
        arrs = []
        for p in self.primes:
            if m.den % p == 0:
                raise _BadPrime(p)
            spec = _specialize(m.num, m.den, m.n, p)
            for r in range(self.phi):
                a = spec[r]
                if reshape is not None:
                    a = a.reshape(reshape)
                arrs.append(a)
        return MTensor(self, arrs, max(m.maxabs_num(), 1))


class MTensor:
    """Tensor specialized at every (prime, root) of a session, with a bound."""

    def __init__(self, session: ModSession, arrays, bound: int):
        self.session = session
        self.arrays = arrays
        self.bound = int(bound)
        self.shape = arrays[0].shape

    def _binary(self, other: MTensor, fn, bound: int) -> MTensor:
        out = [fn(a, b, p) for (p, _), a, b in
               zip(self.session.pairs, self.arrays, other.arrays)]
        return MTensor(self.session, out, bound)

    def __add__(self, other: MTensor) -> MTensor:
        return self._binary(other, lambda a, b, p: (a + b) % p,
                            self.bound + other.bound)

    def __sub__(self, other: MTensor) -> MTensor:
        return self._binary(other, lambda a, b, p: (a - b) % p,
                            self.bound + other.bound)

    def contract(self, other: MTensor, spec: str) -> MTensor:
        """einsum contraction; the bound grows by the contracted volume."""
        ins, out = spec.split("->")
        a_idx, b_idx = ins.split(",")
        dims = {}
        for idx, sh in ((a_idx, self.shape), (b_idx, other.shape)):
            for ch, d in zip(idx, sh):
                dims[ch] = d
        inner = 1
        for ch, d in dims.items():
            if ch in a_idx and ch in b_idx and ch not in out:
                inner *= d
        bound = (inner * self.bound * other.bound
                 * self.session.phi * self.session.red_growth)

        def fn(a, b, p):
            if inner * (p - 1) ** 2 < (1 << 62):
                return np.einsum(spec, a, b) % p
            return (np.einsum(spec, a.astype(object), b.astype(object)) % p).astype(np.int64)

        return self._binary(other, fn, bound)

    def reshape(self, *shape) -> MTensor:
        return MTensor(self.session, [a.reshape(shape) for a in self.arrays], self.bound)

    def transpose(self, *axes) -> MTensor:
        return MTensor(self.session, [a.transpose(axes) for a in self.arrays], self.bound)

    def scale_int(self, k: int) -> MTensor:
        return MTensor(self.session,
                       [(a * (k % p)) % p for (p, _), a in
                        zip(self.session.pairs, self.arrays)],
                       self.bound * max(abs(k), 1))

    def nonzero_witness(self):
        for a in self.arrays:
            nz = np.nonzero(a)
            if nz[0].size:
                return tuple(int(x[0]) for x in nz)
        return None


def run_zero_check(n: int, builder):
    """Drive a certified zero test.

    ``builder(session)`` evaluates the expression and returns its MTensor
    difference.  The session is enlarged and the expression re-evaluated
    until the prime pool provably covers the propagated height bound.

    Returns (is_zero, witness).
    """
    count = 4
    exclude = frozenset()
    while True:
        session = ModSession(n, count, exclude)
        try:
            t = builder(session)
        except _BadPrime as bad:
            exclude = exclude | {bad.p}
            continue
        w = t.nonzero_witness()
        if w is not None:
            return False, w  # a nonzero residue certifies exact nonzero
        if session.covers(t.bound):
            return True, None
        count *= 2
        if count > 4096:
            raise RuntimeError("zero check exceeded prime budget")
