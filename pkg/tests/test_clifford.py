"""The twisted algebra, its matrix group, the real embedding, and the
complexified pair algebra."""

import random
from fractions import Fraction

import pytest

from invdist.clifford import (CplxPairElement, REpsElement, REpsMatrix,
                              cplx_pair_times_eps_power, group_inverse, h_closure_check, h_det_check,
                              h_phase, h_shift, h_shift_formal,
                              iota, mat_mul_scalar, reduce_rotation)
from invdist.scalars import GaussianRational, Scalar


def scal(re, im=0):
    return Scalar.from_gauss(GaussianRational.of(Fraction(re), Fraction(im)))


def rand_elem(rng):
    def g():
        return GaussianRational.of(
            Fraction(rng.randint(-5, 5), rng.randint(1, 3)),
            Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
    return REpsElement(Scalar.from_gauss(g()), Scalar.from_gauss(g()))


class TestAlgebraRelations:
    ONE = REpsElement(Scalar.one(), Scalar.zero())
    I = REpsElement(Scalar.i(), Scalar.zero())
    EPS = REpsElement(Scalar.zero(), Scalar.one())

    def test_eps_squared_is_one(self):
        assert self.EPS * self.EPS == self.ONE

    def test_i_squared_is_minus_one(self):
        minus_one = REpsElement(-Scalar.one(), Scalar.zero())
        assert self.I * self.I == minus_one

    def test_i_eps_anticommute(self):
        lhs = self.I * self.EPS
        rhs = self.EPS * self.I
        assert lhs == REpsElement(-rhs.a, -rhs.b)
        assert lhs != rhs

    def test_associativity_random(self):
        rng = random.Random(1)
        for _ in range(30):
            x, y, z = rand_elem(rng), rand_elem(rng), rand_elem(rng)
            assert (x * y) * z == x * (y * z)

    def test_action_is_module_structure(self):
        # x.(y.z) = (x*y).z for the R-linear action on C
        rng = random.Random(2)
        for _ in range(20):
            x, y = rand_elem(rng), rand_elem(rng)
            zval = rand_elem(rng).a
            inner, inner_bar = y.act(zval, zval.conjugate())
            assert inner_bar == inner.conjugate()
            lhs, _ = x.act(inner, inner_bar)
            rhs, _ = (x * y).act(zval, zval.conjugate())
            assert lhs == rhs


class TestIota:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_multiplicative_on_random_samples(self, n):
        rng = random.Random(3)
        for _ in range(25):
            rows_a = [[rand_elem(rng) for _ in range(n)] for _ in range(n)]
            rows_b = [[rand_elem(rng) for _ in range(n)] for _ in range(n)]
            a = REpsMatrix(n, tuple(tuple(r) for r in rows_a))
            b = REpsMatrix(n, tuple(tuple(r) for r in rows_b))
            assert iota(a * b) == mat_mul_scalar(iota(a), iota(b))

    def test_identity_embeds_to_identity(self):
        m = iota(REpsMatrix.identity(3))
        for i in range(6):
            for j in range(6):
                expected = Scalar.one() if i == j else Scalar.zero()
                assert m[i][j] == expected

    def test_known_block(self):
        # a + b*eps with a = p + iq, b = r + is maps to
        # [[p+r, -q+s], [q+s, p-r]]
        e = REpsElement(scal(1, 2), scal(3, 4))
        blocks = iota(REpsMatrix(1, ((e,),)))
        assert blocks[0][0] == scal(4)
        assert blocks[0][1] == scal(2)
        assert blocks[1][0] == scal(6)
        assert blocks[1][1] == scal(-2)


class TestGroup:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_det_check_passes(self, n):
        assert h_det_check(n).passed

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_closure_check_passes(self, n):
        assert h_closure_check(n, samples=15, seed=5).passed

    def test_group_inverse(self):
        rng = random.Random(7)
        n = 4
        for _ in range(10):
            g = REpsMatrix.identity(n)
            for j in range(1, n):
                a = GaussianRational.of(
                    Fraction(rng.randint(-3, 3), rng.randint(1, 2)),
                    Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
                g = g * h_shift(n, j, Scalar.from_gauss(a))
            assert g * group_inverse(g) == REpsMatrix.identity(n)
            assert group_inverse(g) * g == REpsMatrix.identity(n)

    def test_formal_phase_inverse(self):
        g = h_phase(3)
        assert g * group_inverse(g) == REpsMatrix.identity(3)

    def test_formal_shift_inverse(self):
        g = h_shift_formal(4, 1)
        assert g * group_inverse(g) == REpsMatrix.identity(4)

    def test_rotation_det_reduces_to_one(self):
        # the embedded phase block has det c^2 + s^2 -> 1
        c, s = Scalar.var("c"), Scalar.var("s")
        det = c * c + s * s
        assert reduce_rotation(det) == Scalar.one()


class TestComplexified:
    def test_eps_squared(self):
        eps = CplxPairElement.eps()
        assert eps * eps == CplxPairElement.one()

    def test_embedding_is_homomorphism(self):
        # the real algebra sits diagonally: a + b*eps -> (a, a) + (b, b)*eps
        rng = random.Random(11)

        def embed(x: REpsElement) -> CplxPairElement:
            return CplxPairElement(x.a, x.a, x.b, x.b)

        for _ in range(25):
            x, y = rand_elem(rng), rand_elem(rng)
            assert embed(x * y) == embed(x) * embed(y)

    def test_eps_power_products(self):
        a, b = Scalar.var("a1"), Scalar.var("a2")
        e1 = cplx_pair_times_eps_power(a, b, 1)
        e2 = cplx_pair_times_eps_power(a, b, 2)
        assert e1 * CplxPairElement.eps() == e2

    def test_action_on_pairs(self):
        # diagonal (t, s) acts as (t z, s w); eps swaps with conjugation
        t, s = Scalar.var("t"), Scalar.var("tdual")
        z, w = Scalar.var("Z"), Scalar.var("W")
        dz, dw = CplxPairElement.diagonal(t, s).act(z, w)
        assert dz == t * z and dw == s * w
        ez, ew = CplxPairElement.eps().act(z, w)
        assert ez == w.conjugate() and ew == z.conjugate()
