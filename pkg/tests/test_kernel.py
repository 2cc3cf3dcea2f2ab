"""Kernel: exact cyclotomic scalars, linear algebra, signatures, lifting."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from bichrome.kernel import (
    DivisionByZero,
    NoConvergence,
    NotSymmetric,
    Scalar,
    SMat,
    lift_idempotent,
    root_of_unity,
    sym_int_signature,
)


def rand_scalar(rng, n):
    from bichrome.kernel import euler_phi
    return Scalar(n, [Fraction(rng.randrange(-9, 10), rng.randrange(1, 7))
                      for _ in range(euler_phi(n))])


class TestScalar:
    def test_fourth_root_squares_to_minus_one(self):
        z = root_of_unity(4, 1)
        assert z * z == -1

    def test_inverse_of_two(self):
        two = Scalar.from_rational(4, 2)
        assert two.inverse() * two == 1

    def test_fifth_roots_sum(self):
        # 1 + z + z^2 + z^3 + z^4 = 0 in Q(zeta_5), so the four roots sum to -1
        z = root_of_unity(5, 1)
        assert z + z ** 2 + z ** 3 + z ** 4 == -1

    def test_inverse_of_zero_raises(self):
        with pytest.raises(DivisionByZero):
            Scalar.zero(8).inverse()

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 8, 12])
    def test_field_axioms_random(self, n):
        rng = random.Random(n)
        for _ in range(25):
            a, b = rand_scalar(rng, n), rand_scalar(rng, n)
            assert (a + b) - b == a
            if not b.is_zero():
                assert (a * b) / b == a
        # associativity / distributivity spot checks
        for _ in range(10):
            a, b, c = (rand_scalar(rng, n) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c

    @pytest.mark.parametrize("n", [1, 4, 5, 8, 12])
    def test_serialization_roundtrip(self, n):
        rng = random.Random(10 + n)
        for _ in range(30):
            s = rand_scalar(rng, n)
            assert Scalar.parse(n, str(s)) == s

    def test_parse_forms(self):
        assert Scalar.parse(8, "0") == Scalar.zero(8)
        assert Scalar.parse(8, "-z") == -root_of_unity(8, 1)
        assert Scalar.parse(8, "3/2*z^3 + 1") == \
            Scalar(8, [Fraction(1), 0, 0, Fraction(3, 2)])
        with pytest.raises(ValueError):
            Scalar.parse(8, "1 + q")

    def test_root_of_unity_order(self):
        z = root_of_unity(12, 1)
        assert z ** 12 == 1
        assert z ** 6 == -1
        assert not (z ** 4 == 1)


class TestMatrix:
    def test_rank_identity(self):
        assert SMat.identity(5, 3).rank() == 3

    def test_rank_zero(self):
        assert SMat.zeros(5, 2, 5).rank() == 0

    def test_nullspace_ones(self):
        # hand elimination: kernel of [[1,1],[1,1]] is spanned by (1,-1)
        ns = SMat.from_rational_rows(1, [[1, 1], [1, 1]]).nullspace()
        assert ns.cols == 1
        assert ns.entry(0, 0) == -ns.entry(1, 0)

    @pytest.mark.parametrize("n", [1, 5, 8])
    def test_rank_nullity_random(self, n):
        rng = random.Random(n)
        for _ in range(8):
            r, c = rng.randrange(1, 7), rng.randrange(1, 7)
            m = SMat.from_scalars(n, [[rand_scalar(rng, n) for _ in range(c)]
                                      for _ in range(r)])
            ns = m.nullspace()
            assert m.rank() + ns.cols == c
            if ns.cols:
                assert (m @ ns).is_zero()

    def test_solve_and_inverse(self):
        a = SMat.from_rational_rows(1, [[2, 1], [1, 1]])
        b = SMat.from_rational_rows(1, [[1], [0]])
        x = a.solve(b)
        assert a @ x == b
        inv = a.inverse()
        assert a @ inv == SMat.identity(1, 2)

    def test_solve_inconsistent(self):
        from bichrome.kernel import NoSolution
        a = SMat.from_rational_rows(1, [[1, 1], [1, 1]])
        b = SMat.from_rational_rows(1, [[1], [0]])
        with pytest.raises(NoSolution):
            a.solve(b)

    def test_modular_path_matches_exact(self):
        # same matrix through both elimination paths
        rng = random.Random(7)
        num = np.array([[[rng.randrange(-4, 5) for _ in range(40)]
                         for _ in range(30)] for _ in range(4)], dtype=object)
        m = SMat(8, 30, 40, num, 3)
        exact_null = m.nullspace()
        big = m._nullspace_modular()
        assert exact_null.cols == big.cols
        assert (m @ big).is_zero()

    def test_kron_mixed_product(self):
        rng = random.Random(3)
        def rnd(r, c):
            return SMat.from_scalars(5, [[rand_scalar(rng, 5) for _ in range(c)]
                                         for _ in range(r)])
        a, b, c, d = rnd(2, 3), rnd(3, 2), rnd(2, 2), rnd(2, 3)
        assert (a @ b).kron(c @ d) == a.kron(c) @ b.kron(d)


class TestSignature:
    def test_diag(self):
        assert sym_int_signature([[1, 0, 0], [0, 1, 0], [0, 0, -1]]) == 1

    def test_zero(self):
        assert sym_int_signature([[0] * 3] * 3) == 0

    def test_hyperbolic(self):
        # eigenvalues of [[0,1],[1,0]] are +1 and -1
        assert sym_int_signature([[0, 1], [1, 0]]) == 0

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            sym_int_signature([[0, 1], [2, 0]])

    def test_congruence_invariance(self):
        rng = random.Random(11)
        for _ in range(20):
            size = rng.randrange(1, 5)
            b = [[0] * size for _ in range(size)]
            for i in range(size):
                for j in range(i, size):
                    b[i][j] = b[j][i] = rng.randrange(-4, 5)
            # random unimodular U from elementary row ops
            u = np.eye(size, dtype=object)
            for _ in range(6):
                i, j = rng.randrange(size), rng.randrange(size)
                if i != j:
                    u[i] = u[i] + rng.randrange(-2, 3) * u[j]
            bb = np.array(b, dtype=object)
            congr = u.T @ bb @ u
            assert sym_int_signature(congr.tolist()) == sym_int_signature(b)


class TestLifting:
    @staticmethod
    def mul(a, b):
        return a @ b

    def test_already_idempotent(self):
        e = SMat.from_rational_rows(1, [[1, 0], [0, 0]])
        assert lift_idempotent(e, self.mul, 3) == e

    def test_zero(self):
        z = SMat.zeros(1, 2, 2)
        assert lift_idempotent(z, self.mul, 3) == z

    def test_perturbed_projector(self):
        # idempotent modulo the square-zero ideal of strictly upper matrices
        e0 = SMat.from_rational_rows(1, [[1, Fraction(1, 3)], [0, 0]])
        e = lift_idempotent(e0, self.mul, 2)
        assert e @ e == e
        # lift agrees with e0 modulo the ideal: diagonal part unchanged
        assert e.entry(0, 0) == 1 and e.entry(1, 1) == 0

    def test_no_convergence(self):
        bad = SMat.from_rational_rows(1, [[2]])
        with pytest.raises(NoConvergence):
            lift_idempotent(bad, self.mul, 2)
