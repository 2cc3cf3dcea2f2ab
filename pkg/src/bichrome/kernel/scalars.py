"""Exact arithmetic in the cyclotomic field Q(zeta_N).

A scalar is stored in the power basis 1, z, ..., z^(phi(N)-1) of
Q(zeta_N) = Q[z]/(Phi_N(z)) with rational coefficients.  All arithmetic
is exact; equality of reduced representations is literal equality of
coefficient vectors.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache


class DivisionByZero(ZeroDivisionError):
    pass


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Exact division of integer polynomials, coefficients listed from degree 0.
    # Requires den monic; used only to build cyclotomic polynomials.
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 0)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, from degree 0, monic."""
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def reduction_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k expresses z^(phi+k) in the power basis, for k = 0..phi-2.

    Entries are integers since Phi_n is monic over Z.
    """
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    # z^phi = -(c_0 + c_1 z + ... + c_{phi-1} z^{phi-1})
    rows = [tuple(-c for c in poly[:phi])]
    for _ in range(phi - 2):
        prev = rows[-1]
        # multiply by z and reduce the single overflow term
        shifted = [0] + list(prev[:-1])
        top = prev[-1]
        rows.append(tuple(s + top * r for s, r in zip(shifted, rows[0])))
    return tuple(rows)


def reduce_coeffs(coeffs: list[Fraction], n: int) -> list[Fraction]:
    """Reduce a coefficient list of any length modulo Phi_n."""
    phi = euler_phi(n)
    rows = reduction_rows(n)
    out = list(coeffs[:phi]) + [Fraction(0)] * max(0, phi - len(coeffs))
    for k in range(phi, len(coeffs)):
        c = coeffs[k]
        if c:
            row = rows[k - phi]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return out


class Scalar:
    """An element of Q(zeta_N), immutable and always reduced."""

    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs):
        phi = euler_phi(n)
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > phi:
            cs = reduce_coeffs(cs, n)
        elif len(cs) < phi:
            cs = cs + [Fraction(0)] * (phi - len(cs))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> Scalar:
        return cls(n, [])

    @classmethod
    def one(cls, n: int) -> Scalar:
        return cls(n, [1])

    @classmethod
    def from_rational(cls, n: int, value) -> Scalar:
        return cls(n, [Fraction(value)])

    @classmethod
    def root_of_unity(cls, n: int, k: int) -> Scalar:
        """zeta_N^k as an element of Q(zeta_N)."""
        k %= n
        coeffs = [Fraction(0)] * (k + 1)
        coeffs[k] = Fraction(1)
        return cls(n, coeffs)

    # -- field operations ------------------------------------------------

    def _check(self, other: Scalar):
        if self.n != other.n:
            raise ValueError(f"mixed cyclotomic orders {self.n} and {other.n}")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return Scalar(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return Scalar(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Scalar(self.n, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        phi = euler_phi(self.n)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return Scalar(self.n, reduce_coeffs(prod, self.n))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.from_rational(self.n, other)
        return NotImplemented

    def inverse(self) -> Scalar:
        """Multiplicative inverse via extended gcd with Phi_N."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        # xgcd in Q[x] of self (as poly) with Phi_N; gcd is a nonzero constant.
        a = list(self.coeffs)
        b = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        s0, s1 = [Fraction(1)], [Fraction(0)]

        def deg(p):
            for i in range(len(p) - 1, -1, -1):
                if p[i]:
                    return i
            return -1

        def scale(p, c):
            return [x * c for x in p]

        def sub_shift(p, q, c, k):
            out = list(p) + [Fraction(0)] * max(0, len(q) + k - len(p))
            for i, x in enumerate(q):
                out[i + k] -= c * x
            return out

        # keep invariant: s0*self = a (mod Phi), s1*self = b (mod Phi)
        while deg(b) > 0:
            while deg(a) >= deg(b):
                da, db = deg(a), deg(b)
                c = a[da] / b[db]
                a = sub_shift(a, b, c, da - db)
                s0 = sub_shift(s0, s1, c, da - db)
            a, b = b, a
            s0, s1 = s1, s0
        d = deg(b)
        if d == -1:
            # gcd ended in a; self shares a factor with Phi_N: impossible for
            # a reduced nonzero element unless Phi_N is not irreducible here.
            raise DivisionByZero("inverse of zero")
        inv = scale(s1, 1 / b[0])
        return Scalar(self.n, reduce_coeffs(inv, self.n))

    def __pow__(self, k: int) -> Scalar:
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates & hashing ---------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(self.n, other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.n, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return not self.is_zero()

    # -- serialization -----------------------------------------------------

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mon = "z" if i == 1 else f"z^{i}"
                if c == 1:
                    terms.append(mon)
                elif c == -1:
                    terms.append(f"-{mon}")
                else:
                    terms.append(f"{c}*{mon}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __repr__(self):
        return f"Scalar({self.n}, '{self}')"

    _TERM_RE = re.compile(
        r"^(?P<coef>[+-]?\d+(?:/\d+)?|[+-])?(?P<star>\*)?(?P<mon>z(?:\^(?P<exp>\d+))?)?$"
    )

    @classmethod
    def parse(cls, n: int, text: str) -> Scalar:
        """Parse the string form "a0 + a1*z + a2*z^2 + ...".

        Coefficients are rationals "p/q"; whitespace is ignored.
        """
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty scalar string")
        # split into signed terms
        parts = re.findall(r"[+-]?[^+-]+", s)
        if "".join(parts) != s:
            raise ValueError(f"cannot parse scalar {text!r}")
        coeffs: dict[int, Fraction] = {}
        for part in parts:
            m = cls._TERM_RE.match(part)
            if not m or (m.group("coef") is None and m.group("mon") is None):
                raise ValueError(f"cannot parse scalar term {part!r} in {text!r}")
            if m.group("star") and (m.group("coef") is None or m.group("mon") is None):
                raise ValueError(f"cannot parse scalar term {part!r} in {text!r}")
            coef = Fraction(m.group("coef")) if m.group("coef") not in (None, "+", "-") else (
                Fraction(-1) if m.group("coef") == "-" else Fraction(1)
            )
            if m.group("mon") is None:
                exp = 0
            else:
                exp = int(m.group("exp")) if m.group("exp") else 1
            coeffs[exp] = coeffs.get(exp, Fraction(0)) + coef
        out = [Fraction(0)] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c
        return cls(n, out)


def root_of_unity(n: int, k: int) -> Scalar:
    return Scalar.root_of_unity(n, k)
