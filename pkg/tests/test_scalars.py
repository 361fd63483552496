"""Exact scalar ring: Gaussian rationals, sparse Laurent polynomials,
affine exponents, and generic rank over the lam function field."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invdist.scalars import (AffineExponent, GaussianRational, Scalar,
                             falling_factorial, generalized_binomial,
                             rank_over_function_field, LAM, U)

fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))
gaussians = st.builds(GaussianRational, fractions, fractions)


class TestGaussianRational:
    def test_field_ops(self):
        a = GaussianRational.of(Fraction(3, 4), Fraction(-1, 2))
        b = GaussianRational.of(2, 5)
        assert (a + b) - b == a
        assert (a * b) / b == a
        assert a * a.inverse() == GaussianRational.of(1)

    def test_conj_norm(self):
        a = GaussianRational.of(3, 4)
        assert a * a.conj() == GaussianRational.of(a.norm2())
        assert a.conj().conj() == a

    def test_i_squares_to_minus_one(self):
        i = GaussianRational.of(0, 1)
        assert i * i == GaussianRational.of(-1)

    @given(gaussians, gaussians, gaussians)
    @settings(max_examples=50)
    def test_ring_axioms(self, a, b, c):
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert (a * b).conj() == a.conj() * b.conj()


class TestScalar:
    def test_distributivity(self):
        x = Scalar.var("a1")
        y = Scalar.var("a2")
        z = LAM
        assert x * (y + z) == x * y + x * z
        assert (x + y) * (x - y) == x * x - y * y

    def test_conjugation_involution(self):
        x = Scalar.var("a1") * LAM + Scalar.i() * U
        assert x.conjugate().conjugate() == x

    def test_unit_phase(self):
        # u * conj(u) = 1: the phase symbol is unimodular by construction
        assert U * U.conjugate() == Scalar.one()
        assert U ** -1 == U.conjugate()
        assert (U ** 3) * (U ** -3) == Scalar.one()

    def test_lam_is_real(self):
        assert LAM.conjugate() == LAM

    def test_conjugate_pair_symbols(self):
        a = Scalar.var("a1")
        assert a.conjugate() != a
        assert str(a.conjugate()) != str(a)
        assert (a * a.conjugate()).conjugate() == a * a.conjugate()

    def test_substitute(self):
        x = LAM * LAM + Scalar.of(1)
        assert x.substitute({"lam": GaussianRational.of(2)}) \
            == Scalar.of(5)

    def test_constant_value(self):
        assert Scalar.of(Fraction(7, 3)).constant_value() \
            == GaussianRational.of(Fraction(7, 3))
        with pytest.raises(ValueError):
            LAM.constant_value()

    def test_lam_coeffs(self):
        p = LAM * LAM * Scalar.of(3) - LAM + Scalar.of(2)
        assert p.lam_coeffs() == [GaussianRational.of(2),
                                  GaussianRational.of(-1),
                                  GaussianRational.of(3)]
        assert Scalar.zero().lam_coeffs() == []
        with pytest.raises(ValueError):
            Scalar.var("a1").lam_coeffs()


class TestAffineExponent:
    def test_arithmetic(self):
        # 1 - lam/2, shifted down twice
        s = AffineExponent(Fraction(1), Fraction(-1, 2))
        assert (s - 1) - 1 == AffineExponent(Fraction(-1), Fraction(-1, 2))
        assert s.specialize(Fraction(2)) == 0
        assert not s.is_integer()
        assert AffineExponent.of(3).is_integer()

    def test_as_scalar(self):
        s = AffineExponent(Fraction(2), Fraction(-1, 2))
        assert s.as_scalar() == Scalar.of(2) - LAM * Scalar.of(Fraction(1, 2))


class TestBinomials:
    @pytest.mark.parametrize("n,k", [(5, 0), (5, 2), (7, 7), (6, 3)])
    def test_integer_case_matches_comb(self, n, k):
        from math import comb
        got = generalized_binomial(AffineExponent.of(n), k)
        assert got == Scalar.of(comb(n, k))

    def test_vanishing_above_integer_index(self):
        assert generalized_binomial(AffineExponent.of(3), 5) == Scalar.zero()

    def test_affine_case(self):
        # C(sigma, 1) = sigma
        s = AffineExponent(Fraction(1), Fraction(-1, 2))
        assert generalized_binomial(s, 1) == s.as_scalar()

    def test_falling_factorial(self):
        s = AffineExponent.of(4)
        assert falling_factorial(s, 2) == Scalar.of(12)
        assert falling_factorial(s, 0) == Scalar.one()


def _frac_rank(rows):
    """Oracle: plain Gaussian elimination over Fraction matrices."""
    rows = [list(map(Fraction, r)) for r in rows]
    rank = 0
    for col in range(len(rows[0]) if rows else 0):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] / rows[rank][col]
            rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


class TestRank:
    def test_identity(self):
        one, zero = Scalar.one(), Scalar.zero()
        m = [[one if i == j else zero for j in range(4)] for i in range(4)]
        assert rank_over_function_field(m) == 4

    def test_dependent_rows(self):
        one = Scalar.one()
        m = [[one, LAM], [LAM, LAM * LAM]]
        assert rank_over_function_field(m) == 1

    def test_generic_vs_specialized(self):
        # [[1, lam], [lam, 1]] has generic rank 2 even though it drops
        # rank at lam = 1
        one = Scalar.one()
        assert rank_over_function_field([[one, LAM], [LAM, one]]) == 2

    @given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4),
                    min_size=1, max_size=5))
    @settings(max_examples=40)
    def test_constant_matrices_match_fraction_oracle(self, rows):
        m = [[Scalar.of(x) for x in r] for r in rows]
        assert rank_over_function_field(m) == _frac_rank(rows)

    def test_column_permutation_invariance(self):
        # regression: staircase matrices must have full rank in any
        # column order
        import itertools
        one, zero = Scalar.one(), Scalar.zero()
        base = [[one, zero, LAM, zero],
                [zero, zero, zero, one],
                [LAM, one, zero, zero]]
        for perm in itertools.permutations(range(4)):
            m = [[row[p] for p in perm] for row in base]
            assert rank_over_function_field(m) == 3

    def test_rejects_foreign_symbols(self):
        with pytest.raises(ValueError):
            rank_over_function_field([[Scalar.var("a1")]])
