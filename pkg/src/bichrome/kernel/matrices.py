"""Dense exact linear algebra over Q(zeta_N).

Matrices are stored as integer coefficient stacks: a matrix M over
Q(zeta_N) with phi = phi(N) is kept as ``num`` of shape (phi, rows, cols)
holding arbitrary-precision integers (numpy object dtype) together with a
single positive denominator ``den``, so M = (1/den) * sum_k num[k] z^k.

Elimination-type operations (rank, nullspace, solve) run either as exact
rational Gaussian elimination (small sizes) or through a multi-modular
path: the matrix is specialized at primitive N-th roots of unity modulo
primes p = 1 (mod N), echelonized with vectorized int64 arithmetic,
reconstructed by CRT plus rational reconstruction, and finally re-verified
exactly.  Every returned answer is certified by an exact identity; the
modular layer only accelerates the search.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np
import sympy

from .scalars import Scalar, cyclotomic_polynomial, euler_phi, reduction_rows


class ShapeMismatch(ValueError):
    pass


class NoSolution(ValueError):
    pass


def _obj_array(shape):
    a = np.empty(shape, dtype=object)
    a.fill(0)
    return a


def _maxabs(arr) -> int:
    if arr.size == 0:
        return 0
    return int(max(abs(int(v)) for v in arr.flat))


# --------------------------------------------------------------------------
# modular infrastructure
# --------------------------------------------------------------------------

_PRIME_FLOOR = 1 << 24


@lru_cache(maxsize=None)
def _modular_primes(n: int, count: int) -> tuple[int, ...]:
    """The first `count` primes p = 1 (mod n) above the working floor."""
    out = []
    p = _PRIME_FLOOR
    step = n if n > 1 else 1
    # align to 1 mod n
    p += (1 - p) % step
    while len(out) < count:
        if sympy.isprime(p):
            out.append(p)
        p += step
    return tuple(out)


@lru_cache(maxsize=None)
def _roots_mod(n: int, p: int) -> tuple[int, ...]:
    """All primitive n-th roots of unity in F_p (p = 1 mod n), sorted."""
    if n == 1:
        return (1,)
    g = sympy.primitive_root(p)
    w = pow(g, (p - 1) // n, p)
    roots = sorted(pow(w, j, p) for j in range(1, n + 1) if math.gcd(j, n) == 1)
    assert len(roots) == euler_phi(n)
    return tuple(roots)


@lru_cache(maxsize=None)
def _vandermonde_inv_mod(n: int, p: int) -> np.ndarray:
    """Inverse mod p of the matrix V[r][k] = root_r^k, k < phi(n)."""
    roots = _roots_mod(n, p)
    phi = len(roots)
    V = [[pow(r, k, p) for k in range(phi)] for r in roots]
    M = sympy.Matrix(V)
    Minv = M.inv_mod(p)
    return np.array([[int(Minv[i, j]) % p for j in range(phi)] for i in range(phi)],
                    dtype=np.int64)


def _specialize(num, den: int, n: int, p: int) -> np.ndarray:
    """Evaluate (num/den)(z -> each primitive root) mod p.

    Returns int64 array of shape (nroots, rows, cols).
    """
    roots = _roots_mod(n, p)
    phi, r, c = num.shape
    num_p = (num % p).astype(np.int64)
    dinv = pow(den % p, -1, p)
    out = np.zeros((len(roots), r, c), dtype=np.int64)
    for ri, w in enumerate(roots):
        acc = np.zeros((r, c), dtype=np.int64)
        wk = 1
        for k in range(phi):
            acc = (acc + wk * num_p[k]) % p
            wk = (wk * w) % p
        out[ri] = (acc * dinv) % p
    return out


def _values_to_coeffs_mod(vals: np.ndarray, n: int, p: int) -> np.ndarray:
    """Invert the root evaluation: (nroots, ...) -> (phi, ...) mod p."""
    Vinv = _vandermonde_inv_mod(n, p)
    phi = Vinv.shape[0]
    flat = vals.reshape(phi, -1)
    out = np.zeros_like(flat)
    for k in range(phi):
        acc = np.zeros(flat.shape[1], dtype=np.int64)
        for r in range(phi):
            acc = (acc + Vinv[k, r] * flat[r]) % p
        out[k] = acc
    return out.reshape(vals.shape)


def _rref_mod(a: np.ndarray, p: int) -> tuple[int, tuple[int, ...], np.ndarray]:
    """In-place style RREF of an int64 matrix mod p. Returns rank, pivots, rref."""
    a = a % p
    rows, cols = a.shape
    piv_cols = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        piv_cols.append(c)
        r += 1
    return r, tuple(piv_cols), a


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    # standard CRT for coprime moduli
    inv = pow(m1 % m2, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def _rational_reconstruct(r: int, m: int) -> Fraction | None:
    """Wang's algorithm: find p/q = r mod m with |p|, q <= sqrt(m/2)."""
    bound = math.isqrt(m // 2)
    v0, v1 = (m, 0), (r % m, 1)
    while v1[0] > bound:
        q = v0[0] // v1[0]
        v0, v1 = v1, (v0[0] - q * v1[0], v0[1] - q * v1[1])
    p_, q_ = v1
    if q_ == 0 or abs(q_) > bound or math.gcd(p_, q_) > 1 or math.gcd(q_, m) > 1:
        return None
    if q_ < 0:
        p_, q_ = -p_, -q_
    return Fraction(p_, q_)


# --------------------------------------------------------------------------
# the matrix class
# --------------------------------------------------------------------------

_EXACT_ELIM_LIMIT = 96          # max(rows, cols) below which we eliminate exactly
_EXACT_MATMUL_LIMIT = 64        # inner dimension below which matmul runs direct


class SMat:
    """Exact matrix over Q(zeta_N)."""

    __slots__ = ("n", "rows", "cols", "num", "den")

    def __init__(self, n: int, rows: int, cols: int, num=None, den: int = 1):
        self.n = n
        self.rows = rows
        self.cols = cols
        phi = euler_phi(n)
        if num is None:
            num = _obj_array((phi, rows, cols))
        assert num.shape == (phi, rows, cols)
        self.num = num
        self.den = int(den)
        assert self.den > 0

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, n: int, rows: int, cols: int) -> SMat:
        return cls(n, rows, cols)

    @classmethod
    def identity(cls, n: int, size: int) -> SMat:
        m = cls(n, size, size)
        for i in range(size):
            m.num[0, i, i] = 1
        return m

    @classmethod
    def from_scalars(cls, n: int, rows_of_scalars) -> SMat:
        rows = len(rows_of_scalars)
        cols = len(rows_of_scalars[0]) if rows else 0
        den = 1
        for row in rows_of_scalars:
            if len(row) != cols:
                raise ShapeMismatch("ragged rows")
            for s in row:
                s = _as_scalar(n, s)
                for c in s.coeffs:
                    den = den * c.denominator // math.gcd(den, c.denominator)
        m = cls(n, rows, cols, den=den)
        for i, row in enumerate(rows_of_scalars):
            for j, s in enumerate(row):
                s = _as_scalar(n, s)
                for k, c in enumerate(s.coeffs):
                    m.num[k, i, j] = int(c * den)
        return m

    @classmethod
    def from_rational_rows(cls, n: int, rows) -> SMat:
        return cls.from_scalars(n, [[Scalar.from_rational(n, v) for v in row] for row in rows])

    @classmethod
    def column(cls, n: int, scalars) -> SMat:
        return cls.from_scalars(n, [[s] for s in scalars])

    @classmethod
    def row(cls, n: int, scalars) -> SMat:
        return cls.from_scalars(n, [list(scalars)])

    def copy(self) -> SMat:
        return SMat(self.n, self.rows, self.cols, self.num.copy(), self.den)

    # -- entry access --------------------------------------------------------

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.n, [Fraction(int(self.num[k, i, j]), self.den)
                               for k in range(self.num.shape[0])])

    def scalar(self) -> Scalar:
        if self.rows != 1 or self.cols != 1:
            raise ShapeMismatch(f"not 1x1: {self.rows}x{self.cols}")
        return self.entry(0, 0)

    def to_scalar_rows(self) -> list[list[Scalar]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def column_scalars(self, j: int) -> list[Scalar]:
        return [self.entry(i, j) for i in range(self.rows)]

    # -- normalization ---------------------------------------------------------

    def normalized(self) -> SMat:
        """Divide out the gcd of all numerators and the denominator."""
        g = self.den
        for v in self.num.flat:
            if v:
                g = math.gcd(g, abs(int(v)))
                if g == 1:
                    return self
        if g <= 1:
            return self
        out = SMat(self.n, self.rows, self.cols, self.num // g, self.den // g)
        return out

    def maxabs_num(self) -> int:
        return _maxabs(self.num)

    # -- ring operations ---------------------------------------------------------

    def _check_same_field(self, other: SMat):
        if self.n != other.n:
            raise ShapeMismatch(f"mixed cyclotomic orders {self.n}, {other.n}")

    def __add__(self, other: SMat) -> SMat:
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch(f"{self.rows}x{self.cols} + {other.rows}x{other.cols}")
        g = math.gcd(self.den, other.den)
        la, lb = other.den // g, self.den // g
        num = self.num * la + other.num * lb
        return SMat(self.n, self.rows, self.cols, num, self.den * la).normalized()

    def __sub__(self, other: SMat) -> SMat:
        return self + (-other)

    def __neg__(self) -> SMat:
        return SMat(self.n, self.rows, self.cols, -self.num, self.den)

    def scale(self, s) -> SMat:
        """Multiply by a Scalar (or rational)."""
        s = _as_scalar(self.n, s)
        phi = euler_phi(self.n)
        den_s = 1
        for c in s.coeffs:
            den_s = den_s * c.denominator // math.gcd(den_s, c.denominator)
        coefs = [int(c * den_s) for c in s.coeffs]
        raw = _obj_array((2 * phi - 1, self.rows, self.cols))
        for k, ck in enumerate(coefs):
            if ck:
                for k2 in range(phi):
                    raw[k + k2] = raw[k + k2] + ck * self.num[k2]
        num = _reduce_stack(raw, self.n)
        return SMat(self.n, self.rows, self.cols, num, self.den * den_s).normalized()

    def __matmul__(self, other: SMat) -> SMat:
        self._check_same_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return SMat(self.n, self.rows, other.cols)
        if self.cols <= _EXACT_MATMUL_LIMIT or min(self.rows, other.cols) <= 2:
            return self._matmul_direct(other)
        return self._matmul_modular(other)

    def _matmul_direct(self, other: SMat) -> SMat:
        phi = euler_phi(self.n)
        raw = _obj_array((2 * phi - 1, self.rows, other.cols))
        for k1 in range(phi):
            a = self.num[k1]
            if not a.any():
                continue
            for k2 in range(phi):
                b = other.num[k2]
                if not b.any():
                    continue
                raw[k1 + k2] = raw[k1 + k2] + np.dot(a, b)
        num = _reduce_stack(raw, self.n)
        return SMat(self.n, self.rows, other.cols, num, self.den * other.den).normalized()

    def _matmul_modular(self, other: SMat) -> SMat:
        """Deterministic CRT product: enough primes to cover a proven bound."""
        phi = euler_phi(self.n)
        red_growth = 1
        if phi > 1:
            rr = reduction_rows(self.n)
            red_growth = 1 + max(sum(abs(x) for x in row) for row in rr)
        bound = phi * self.cols * max(self.maxabs_num(), 1) * max(other.maxabs_num(), 1)
        bound *= red_growth
        target = 2 * bound + 1
        primes, m, count = [], 1, 0
        while m < target:
            count += 8
            primes = list(_modular_primes(self.n, count))
            m = 1
            for p in primes:
                m *= p
        prefix, m = [], 1
        for p in primes:
            prefix.append(p)
            m *= p
            if m >= target:
                break
        primes = prefix
        acc = None
        mod_so_far = 1
        for p in primes:
            a = _specialize(self.num, 1, self.n, p)
            b = _specialize(other.num, 1, self.n, p)
            prod = np.zeros((a.shape[0], self.rows, other.cols), dtype=np.int64)
            for r in range(a.shape[0]):
                prod[r] = _matmul_mod(a[r], b[r], p)
            coeffs = _values_to_coeffs_mod(prod, self.n, p)
            if acc is None:
                acc = coeffs.astype(object)
                mod_so_far = p
            else:
                inv = pow(mod_so_far % p, -1, p)
                delta = (coeffs.astype(object) - acc) % p
                acc = acc + (delta * inv % p) * mod_so_far
                mod_so_far *= p
        # symmetric residue
        half = mod_so_far // 2
        num = np.where(acc > half, acc - mod_so_far, acc)
        out = SMat(self.n, self.rows, other.cols, num.astype(object),
                   self.den * other.den)
        return out.normalized()

    # -- structural ops ------------------------------------------------------------

    def transpose(self) -> SMat:
        return SMat(self.n, self.cols, self.rows, self.num.transpose(0, 2, 1).copy(), self.den)

    def kron(self, other: SMat) -> SMat:
        self._check_same_field(other)
        phi = euler_phi(self.n)
        raw = _obj_array((2 * phi - 1, self.rows * other.rows, self.cols * other.cols))
        for k1 in range(phi):
            a = self.num[k1]
            if not a.any():
                continue
            for k2 in range(phi):
                b = other.num[k2]
                if not b.any():
                    continue
                raw[k1 + k2] = raw[k1 + k2] + np.kron(a, b)
        num = _reduce_stack(raw, self.n)
        return SMat(self.n, self.rows * other.rows, self.cols * other.cols,
                    num, self.den * other.den).normalized()

    def hstack(self, other: SMat) -> SMat:
        self._check_same_field(other)
        if self.rows != other.rows:
            raise ShapeMismatch("hstack row mismatch")
        g = math.gcd(self.den, other.den)
        la, lb = other.den // g, self.den // g
        num = np.concatenate([self.num * la, other.num * lb], axis=2)
        return SMat(self.n, self.rows, self.cols + other.cols, num, self.den * la)

    def vstack(self, other: SMat) -> SMat:
        self._check_same_field(other)
        if self.cols != other.cols:
            raise ShapeMismatch("vstack col mismatch")
        g = math.gcd(self.den, other.den)
        la, lb = other.den // g, self.den // g
        num = np.concatenate([self.num * la, other.num * lb], axis=1)
        return SMat(self.n, self.rows + other.rows, self.cols, num, self.den * la)

    def submatrix(self, row_idx, col_idx) -> SMat:
        num = self.num[:, row_idx, :][:, :, col_idx]
        return SMat(self.n, len(row_idx), len(col_idx), num.copy(), self.den)

    def column_block(self, j0: int, j1: int) -> SMat:
        return SMat(self.n, self.rows, j1 - j0, self.num[:, :, j0:j1].copy(), self.den)

    def reshaped_vec(self) -> SMat:
        """Column vector of row-major entries."""
        num = self.num.reshape(self.num.shape[0], self.rows * self.cols, 1)
        return SMat(self.n, self.rows * self.cols, 1, num.copy(), self.den)

    @classmethod
    def from_vec(cls, v: SMat, rows: int, cols: int) -> SMat:
        assert v.cols == 1 and v.rows == rows * cols
        num = v.num.reshape(v.num.shape[0], rows, cols)
        return cls(v.n, rows, cols, num.copy(), v.den)

    # -- predicates ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(bool(v) for v in self.num.flat)

    def __eq__(self, other):
        if not isinstance(other, SMat):
            return NotImplemented
        if (self.n, self.rows, self.cols) != (other.n, other.rows, other.cols):
            return False
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("SMat is not hashable")

    def __repr__(self):
        return f"SMat({self.n}, {self.rows}x{self.cols})"

    def __str__(self):
        rows = [", ".join(str(self.entry(i, j)) for j in range(self.cols))
                for i in range(self.rows)]
        return "[" + "; ".join(rows) + "]"

    # -- elimination ----------------------------------------------------------------

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        if max(self.rows, self.cols) <= _EXACT_ELIM_LIMIT:
            return _exact_rref(self)[0]
        return self._rank_modular()

    def nullspace(self) -> SMat:
        """Matrix whose columns form a basis of the right kernel."""
        if self.cols == 0:
            return SMat(self.n, 0, 0)
        if self.rows == 0:
            return SMat.identity(self.n, self.cols)
        if max(self.rows, self.cols) <= _EXACT_ELIM_LIMIT:
            rank, pivots, rref = _exact_rref(self)
            return _nullspace_from_rref(self.n, self.cols, pivots, rref)
        return self._nullspace_modular()

    def solve(self, b: SMat) -> SMat:
        """One exact solution x of self @ x = b (raises NoSolution)."""
        self._check_same_field(b)
        if b.rows != self.rows:
            raise ShapeMismatch("solve shape mismatch")
        aug = self.hstack(b)
        if max(aug.rows, aug.cols) <= _EXACT_ELIM_LIMIT:
            rank, pivots, rref = _exact_rref(aug)
            if any(p >= self.cols for p in pivots):
                raise NoSolution("inconsistent linear system")
            x = SMat(self.n, self.cols, b.cols)
            sol = _particular_from_rref(self.n, self.cols, b.cols, pivots, rref)
            return sol
        x = self._solve_modular(b)
        return x

    def inverse(self) -> SMat:
        if self.rows != self.cols:
            raise ShapeMismatch("inverse of non-square")
        x = self.solve(SMat.identity(self.n, self.rows))
        if not (self @ x == SMat.identity(self.n, self.rows)):
            raise NoSolution("matrix is singular")
        return x

    # modular paths ------------------------------------------------------------

    def _spec_pairs(self, primes):
        for p in primes:
            if self.den % p == 0:
                continue
            spec = _specialize(self.num, self.den, self.n, p)
            for r in range(spec.shape[0]):
                yield p, r, spec[r]

    def _best_pattern(self, primes):
        """Max-rank, lex-min pivot pattern over specializations."""
        best = None
        for p, r, a in self._spec_pairs(primes):
            rank, pivots, _ = _rref_mod(a, p)
            key = (-rank, pivots)
            if best is None or key < best[0]:
                best = (key, rank, pivots)
        assert best is not None
        return best[1], best[2]

    def _rank_modular(self) -> int:
        null = self._nullspace_modular()
        return self.cols - null.cols

    def _nullspace_modular(self) -> SMat:
        def build(pivots, rref):
            return _nullspace_from_rref(self.n, self.cols, pivots, rref)

        def check(pivots, null):
            return null.cols == self.cols - len(pivots) and (self @ null).is_zero()

        return self._modular_echelon_search(self, build, check)

    def _solve_modular(self, b: SMat) -> SMat:
        aug = self.hstack(b)

        def build(pivots, rref):
            if any(p >= self.cols for p in pivots):
                return None  # modularly inconsistent
            return _particular_from_rref(self.n, self.cols, b.cols, pivots, rref)

        def check(pivots, x):
            return (self @ x) == b

        try:
            return self._modular_echelon_search(aug, build, check)
        except _ModularInconsistent:
            # certify inconsistency exactly: left kernel vector y with y.b != 0
            left = self.transpose().nullspace()
            prod = left.transpose() @ b
            if not prod.is_zero():
                raise NoSolution("inconsistent linear system") from None
            raise RuntimeError("modular solve: inconsistency not certified")

    @staticmethod
    def _modular_echelon_search(work: SMat, build, check) -> SMat:
        """Shared driver: reconstruct the exact RREF of `work` incrementally.

        `build(pivots, rref_rows)` turns a candidate RREF into the desired
        answer (or None when the pivot pattern itself shows inconsistency);
        `check` verifies the candidate exactly.  Primes are consumed one at a
        time; reconstruction is re-attempted as the CRT modulus grows.
        """
        max_primes = 400
        warmup = 3
        primes = list(_modular_primes(work.n, warmup))
        rank, pivots = work._best_pattern(primes)
        acc, mod = None, 1
        used = 0
        idx = 0
        next_attempt = 1
        while used < max_primes:
            if idx >= len(primes):
                primes = list(_modular_primes(work.n, max(2 * len(primes), 8)))
            p = primes[idx]
            idx += 1
            if work.den % p == 0:
                continue
            spec = _specialize(work.num, work.den, work.n, p)
            vals = np.zeros((spec.shape[0], rank, work.cols), dtype=np.int64)
            ok = True
            better = None
            for r in range(spec.shape[0]):
                rk, pv, rr = _rref_mod(spec[r], p)
                if (-rk, pv) < (-rank, pivots):
                    better = (rk, pv)
                    break
                if rk != rank or pv != pivots:
                    ok = False
                    break
                if rank:
                    vals[r] = rr[:rank]
            if better is not None:
                # previous pattern was unlucky; restart accumulation
                rank, pivots = better
                acc, mod, used = None, 1, 0
                next_attempt = 1
                continue
            if not ok:
                continue
            used += 1
            coeffs = _values_to_coeffs_mod(vals, work.n, p).astype(object) if rank \
                else np.zeros((euler_phi(work.n), 0, work.cols), dtype=object)
            if acc is None:
                acc, mod = coeffs, p
            else:
                inv = pow(mod % p, -1, p)
                delta = (coeffs - acc) % p
                acc = acc + (delta * inv % p) * mod
                mod *= p
            # reconstruction attempts back off geometrically; a cheap probe on
            # a few entries gates the full-matrix attempt
            if used == next_attempt:
                next_attempt = used + max(1, used // 2)
                if rank and not _probe_reconstruct(acc, mod):
                    continue
                cand = _rational_matrix_from_crt(work.n, acc, mod, rank, work.cols)
                if cand is None:
                    continue
                built = build(pivots, cand)
                if built is None:
                    raise _ModularInconsistent()
                if check(pivots, built):
                    return built
        raise RuntimeError("modular elimination failed to certify within prime budget")


class _ModularInconsistent(Exception):
    pass


def _probe_reconstruct(acc, mod: int, samples: int = 6) -> bool:
    """Quick check: do a few sampled entries reconstruct already?"""
    flat = acc.reshape(-1)
    if flat.size == 0:
        return True
    step = max(1, flat.size // samples)
    for i in range(0, flat.size, step):
        if _rational_reconstruct(int(flat[i]), mod) is None:
            return False
    return True


def _rational_matrix_from_crt(n: int, acc, mod: int, rank: int, cols: int) -> SMat | None:
    """Entrywise rational reconstruction of a CRT-accumulated stack."""
    if rank == 0:
        return SMat(n, 0, cols)
    den_lcm = 1
    fracs = np.empty(acc.shape, dtype=object)
    for idx, v in np.ndenumerate(acc):
        f = _rational_reconstruct(int(v), mod)
        if f is None:
            return None
        fracs[idx] = f
        den_lcm = den_lcm * f.denominator // math.gcd(den_lcm, f.denominator)
    num = np.empty(acc.shape, dtype=object)
    for idx, f in np.ndenumerate(fracs):
        num[idx] = int(f * den_lcm)
    return SMat(n, rank, cols, num, den_lcm)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """int64 matmul mod p, chunked so products never overflow."""
    # a: (r, k), b: (k, c); p < 2^25 so p^2 < 2^50; chunk k to keep sums < 2^63
    chunk = max(1, (1 << 62) // (p * p))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, a.shape[1], chunk):
        out = (out + a[:, s:s + chunk] @ b[s:s + chunk, :]) % p
    return out


def _reduce_stack(raw, n: int):
    """Reduce a (2*phi-1, r, c) integer stack modulo Phi_n to (phi, r, c)."""
    phi = euler_phi(n)
    if raw.shape[0] == phi:
        return raw
    rows = reduction_rows(n)
    out = raw[:phi].copy()
    for k in range(phi, raw.shape[0]):
        layer = raw[k]
        if not layer.any():
            continue
        row = rows[k - phi]
        for i in range(phi):
            if row[i]:
                out[i] = out[i] + row[i] * layer
    return out


def _as_scalar(n: int, s) -> Scalar:
    if isinstance(s, Scalar):
        if s.n != n:
            raise ShapeMismatch(f"scalar in Q(zeta_{s.n}) used with Q(zeta_{n})")
        return s
    return Scalar.from_rational(n, s)


# --------------------------------------------------------------------------
# exact elimination (small matrices)
# --------------------------------------------------------------------------

def _exact_rref(m: SMat) -> tuple[int, tuple[int, ...], list[list[Scalar]]]:
    a = m.to_scalar_rows()
    rows, cols = m.rows, m.cols
    zero = Scalar.zero(m.n)
    piv_cols = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = None
        for i in range(r, rows):
            if not a[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    return r, tuple(piv_cols), a


def _nullspace_from_rref(n: int, cols: int, pivots, rref) -> SMat:
    piv_set = set(pivots)
    free = [c for c in range(cols) if c not in piv_set]
    basis = []
    get = (lambda i, j: rref[i][j]) if isinstance(rref, list) else (lambda i, j: rref.entry(i, j))
    for f in free:
        v = [Scalar.zero(n) for _ in range(cols)]
        v[f] = Scalar.one(n)
        for i, pc in enumerate(pivots):
            v[pc] = -get(i, f)
        basis.append(v)
    if not basis:
        return SMat(n, cols, 0)
    return SMat.from_scalars(n, [[basis[j][i] for j in range(len(basis))]
                                 for i in range(cols)])


def _particular_from_rref(n: int, a_cols: int, b_cols: int, pivots, rref) -> SMat:
    get = (lambda i, j: rref[i][j]) if isinstance(rref, list) else (lambda i, j: rref.entry(i, j))
    x = [[Scalar.zero(n) for _ in range(b_cols)] for _ in range(a_cols)]
    for i, pc in enumerate(pivots):
        for j in range(b_cols):
            x[pc][j] = get(i, a_cols + j)
    return SMat.from_scalars(n, x)


# --------------------------------------------------------------------------
# convenience wrappers (spec-level operations)
# --------------------------------------------------------------------------

def rank(m: SMat) -> int:
    return m.rank()


def nullspace(m: SMat) -> SMat:
    return m.nullspace()


def solve(a: SMat, b: SMat) -> SMat:
    return a.solve(b)
