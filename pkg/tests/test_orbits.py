"""Orbit stratification of projective space and the complexified orbit
continuum."""

import random
from fractions import Fraction

import pytest

from invdist.orbits import (CplxProjPoint, ProjPoint, _symbolic_zeta_check,
                            complex_orbit_check, enumerate_strata,
                            orbit_dimension, stratum_dimension, stratum_of,
                            transitivity_witness, zeta_invariant)
from invdist.scalars import GaussianRational


def G(re, im=0):
    return GaussianRational.of(Fraction(re), Fraction(im))


def point(*values):
    return ProjPoint.of(*values)


class TestStrata:
    def test_stratum_of(self):
        assert stratum_of(point(1, 0, 0)) == 1
        assert stratum_of(point(0, (1, 2), 0)) == 2
        assert stratum_of(point(3, 0, (0, -1))) == 3

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            point(0, 0, 0)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_basis_point_dimensions(self, n):
        for j in range(1, n + 1):
            coords = [G(0)] * n
            coords[j - 1] = G(1)
            p = ProjPoint(tuple(coords))
            assert orbit_dimension(p) == stratum_dimension(j) == 2 * j - 1

    def test_random_point_dimensions(self):
        rng = random.Random(3)
        n = 4
        for _ in range(20):
            j = rng.randint(1, n)
            coords = [G(Fraction(rng.randint(-5, 5), rng.randint(1, 3)),
                        Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
                      for _ in range(j - 1)]
            coords.append(G(1, rng.randint(-2, 2)))
            coords.extend([G(0)] * (n - j))
            p = ProjPoint(tuple(coords))
            assert stratum_of(p) == j
            assert orbit_dimension(p) == 2 * j - 1


class TestWitness:
    def test_exact_witness_same_stratum(self):
        # q2 / p2 = 3 + 4i has rational modulus 5, so the solve is exact
        p = point(1, (1, 1), 0)
        q = point((2, 1), (-1, 7), 0)
        w = transitivity_witness(p, q)
        assert w is not None
        assert w.exact
        assert w.residual == 0.0

    def test_float_witness(self):
        # |ratio| = sqrt(2)/... irrational modulus forces the float path
        p = point(1, 1, 0)
        q = point(0, (1, 1), 0)
        w = transitivity_witness(p, q)
        assert w is not None
        assert w.residual <= 1e-9

    def test_cross_stratum_is_none(self):
        assert transitivity_witness(point(1, 0, 0), point(1, 1, 0)) is None
        assert transitivity_witness(point(0, 1, 0), point(0, 0, 1)) is None

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            transitivity_witness(point(1, 0), point(1, 0, 0))


class TestCensus:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_census_passes(self, n):
        rec = enumerate_strata(n, samples=40, seed=1, witness_pairs=10)
        assert rec.passed, rec.details
        assert rec.details["dimensions"] == {
            str(j): 2 * j - 1 for j in range(1, n + 1)}

    def test_census_deterministic(self):
        a = enumerate_strata(3, samples=30, seed=9)
        b = enumerate_strata(3, samples=30, seed=9)
        assert a.to_dict() == b.to_dict()


class TestComplexOrbits:
    def test_zeta_on_locus(self):
        p = CplxProjPoint(((G(1), G(2)), (G(3), G(1)), (G(6), G(0))))
        assert zeta_invariant(p) == G(Fraction(1, 2))

    def test_zeta_off_locus(self):
        p = CplxProjPoint(((G(1), G(2)), (G(3), G(1)), (G(6), G(1))))
        assert zeta_invariant(p) is None
        q = CplxProjPoint(((G(1), G(2)), (G(3), G(1)), (G(0), G(0))))
        assert zeta_invariant(q) is None

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_symbolic_invariance(self, n):
        assert _symbolic_zeta_check(n)

    def test_complex_orbit_check(self):
        labels = [G(k) for k in range(12)]
        rec = complex_orbit_check(3, labels, samples=6, seed=2)
        assert rec.passed, rec.details

    def test_label_collision_fails(self):
        labels = [G(1), G(1)]
        rec = complex_orbit_check(2, labels, samples=2, seed=0)
        assert not rec.passed
