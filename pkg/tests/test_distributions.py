"""Canonical distribution expressions: rewrite rules, Leibniz
differentiation, group action, and gradings."""

import random
from fractions import Fraction
from math import factorial

import pytest

from invdist.clifford import h_phase, h_shift
from invdist.distributions import (DistExpr, RawTerm, SupportDescriptor,
                                   UnsupportedSubstitutionError,
                                   _canonical_key, independence_rank)
from invdist.scalars import AffineExponent, GaussianRational, Scalar, LAM
from invdist.weyl import (Substitution, WeylOp, substitution_from_group,
                          sym_z, sym_zbar)


def delta_functional(expr: DistExpr, r: int, s: int) -> Scalar:
    """Oracle pairing of a canonical n=1 delta expression against the
    test monomial z^r zbar^s: <c z^p zbar^q d^(a,b) delta, z^r zbar^s>
    = c (-1)^(a+b) a! b! [p+r=a][q+s=b]."""
    total = Scalar.zero()
    for (mono, powers, delta), coeff in expr.terms.items():
        assert not powers
        ((_, a, b),) = delta
        p, q = mono[0], mono[1]
        if p + r == a and q + s == b:
            sign = -1 if (a + b) % 2 else 1
            total = total + coeff * Scalar.of(
                sign * factorial(a) * factorial(b))
    return total


def raw_functional(p, q, a, b, r, s) -> Scalar:
    """The same pairing computed on the unnormalized term directly."""
    if p + r == a and q + s == b:
        sign = -1 if (a + b) % 2 else 1
        return Scalar.of(sign * factorial(a) * factorial(b))
    return Scalar.zero()


class TestRewriteRules:
    def test_jet_pairing_oracle(self):
        # normalize agrees with the pairing oracle for all
        # z^p zbar^q d^a dbar^b delta with p,q,a,b <= 4
        bound = 4
        for p in range(bound + 1):
            for q in range(bound + 1):
                for a in range(bound + 1):
                    for b in range(bound + 1):
                        expr = DistExpr.single(
                            1, mono={0: p, 1: q}, delta={1: (a, b)})
                        for r in range(bound + 1):
                            for s in range(bound + 1):
                                assert delta_functional(expr, r, s) \
                                    == raw_functional(p, q, a, b, r, s)

    def test_annihilation_above_order(self):
        expr = DistExpr.single(1, mono={0: 3}, delta={1: (2, 0)})
        assert expr.is_zero()

    def test_absorption_coefficient(self):
        # z * d^2 delta = -2 d delta
        expr = DistExpr.single(1, mono={0: 1}, delta={1: (2, 0)})
        expected = DistExpr.single(1, coeff=Scalar.of(-2), delta={1: (1, 0)})
        assert expr == expected

    def test_monomials_fold_into_power_factor(self):
        sigma = AffineExponent(Fraction(1), Fraction(-1, 2))
        a = DistExpr.single(2, mono={sym_z(1): 1, sym_zbar(1): 1},
                            powers={1: sigma}, delta={2: (0, 0)})
        b = DistExpr.single(2, powers={1: sigma + 1}, delta={2: (0, 0)})
        assert a == b

    def test_integer_power_becomes_monomial(self):
        a = DistExpr.single(2, powers={1: AffineExponent.of(2)},
                            delta={2: (0, 0)})
        b = DistExpr.single(2, mono={sym_z(1): 2, sym_zbar(1): 2},
                            delta={2: (0, 0)})
        assert a == b

    def test_normalize_idempotent(self):
        sigma = AffineExponent(Fraction(2), Fraction(-1, 2))
        expr = DistExpr.single(3, mono={sym_zbar(1): 1, sym_z(2): 2},
                               powers={2: sigma}, delta={3: (1, 1)})
        again = DistExpr.from_raw(3, expr.raw_terms())
        assert again == expr

    def test_power_on_delta_variable_rejected(self):
        raw = RawTerm([0, 0, 0, 0], {2: AffineExponent(Fraction(1, 2))},
                      {2: (0, 0)}, Scalar.one())
        with pytest.raises(UnsupportedSubstitutionError):
            _canonical_key(raw)


class TestDifferentiation:
    def test_delta_derivative(self):
        # d/dz1 of delta(z1) raises the derivative order
        expr = DistExpr.single(1, delta={1: (0, 0)})
        d = WeylOp.term(1, Scalar.one(), deriv={0: 1})
        assert expr.apply_weyl(d) == DistExpr.single(1, delta={1: (1, 0)})

    def test_power_factor_derivative(self):
        # d/dz1 (z1 zbar1)^sigma = sigma zbar1 (z1 zbar1)^(sigma-1)
        sigma = AffineExponent(Fraction(1), Fraction(-1, 2))
        expr = DistExpr.single(2, powers={1: sigma}, delta={2: (0, 0)})
        d = WeylOp.term(2, Scalar.one(), deriv={sym_z(1): 1})
        expected = DistExpr.single(
            2, coeff=sigma.as_scalar(), mono={sym_zbar(1): 1},
            powers={1: sigma - 1}, delta={2: (0, 0)})
        assert expr.apply_weyl(d) == expected

    def test_apply_weyl_respects_composition(self):
        rng = random.Random(4)
        n = 2
        sigma = AffineExponent(Fraction(1), Fraction(-1, 2))
        expr = DistExpr.single(n, powers={1: sigma}, delta={2: (1, 1)})
        for _ in range(10):
            a = WeylOp.term(n, Scalar.of(rng.randint(1, 3)),
                            {rng.randrange(4): 1}, {rng.randrange(4): 1})
            b = WeylOp.term(n, Scalar.of(rng.randint(1, 3)),
                            {rng.randrange(4): 1}, {rng.randrange(4): 1})
            assert expr.apply_weyl(b).apply_weyl(a) \
                == expr.apply_weyl(a.compose(b))


def shift_sub(n, j, re=Fraction(1, 2), im=Fraction(1, 3)):
    a = GaussianRational.of(re, im)
    return substitution_from_group(h_shift(n, j, Scalar.from_gauss(a)))


class TestGroupAction:
    def test_identity_action(self):
        sigma = AffineExponent(Fraction(1), Fraction(-1, 2))
        expr = DistExpr.single(3, powers={2: sigma}, delta={3: (1, 0)})
        assert expr.act_group(Substitution.identity(3)) == expr

    def test_action_composes(self):
        n = 3
        sigma = AffineExponent(Fraction(1), Fraction(-1, 2))
        expr = DistExpr.single(n, mono={sym_zbar(1): 1},
                               powers={2: sigma}, delta={3: (1, 1)})
        s1, s2 = shift_sub(n, 1), shift_sub(n, 2, Fraction(1, 4), Fraction(0))
        seq = expr.act_group(s1).act_group(s2)
        assert seq in (expr.act_group(s1.then(s2)),
                       expr.act_group(s2.then(s1)))

    def test_phase_action_on_delta(self):
        # the full-phase rotation fixes the delta block and rotates
        # monomials by u
        n = 2
        sub = substitution_from_group(h_phase(n))
        expr = DistExpr.single(n, mono={sym_z(1): 1}, delta={2: (0, 0)})
        acted = expr.act_group(sub)
        # z1 -> u z1 pulled back through the inverse gives u^{-1} z1
        (key, coeff), = acted.terms.items()
        assert key == next(iter(expr.terms))
        assert coeff in (Scalar.var("u"), Scalar.var("u").inverse_unit())

    def test_linearity(self):
        n = 3
        sub = shift_sub(n, 1)
        sigma = AffineExponent(Fraction(1), Fraction(-1, 2))
        a = DistExpr.single(n, powers={2: sigma}, delta={3: (1, 0)})
        b = DistExpr.single(n, mono={sym_zbar(1): 2}, powers={2: sigma},
                            delta={3: (0, 0)})
        assert (a + b).act_group(sub) == a.act_group(sub) + b.act_group(sub)

    def test_inverse_action_roundtrips(self):
        n = 3
        sub = shift_sub(n, 1)
        sigma = AffineExponent(Fraction(1), Fraction(-1, 2))
        expr = DistExpr.single(n, mono={sym_zbar(1): 1}, powers={2: sigma},
                               delta={3: (1, 1)})
        assert expr.act_group(sub).act_group(sub.inverse()) == expr


class TestGradings:
    def test_degree_of_power_delta_term(self):
        # (z2 zbar2)^(1 - lam/2) delta(z3): degree 2(1 - lam/2) - 2 = -lam
        sigma = AffineExponent(Fraction(1), Fraction(-1, 2))
        expr = DistExpr.single(3, powers={2: sigma}, delta={3: (0, 0)})
        assert expr.degree() == AffineExponent(Fraction(0), Fraction(-1))

    def test_mixed_degrees_give_none(self):
        a = DistExpr.single(2, mono={0: 1}, delta={2: (0, 0)})
        b = DistExpr.single(2, delta={2: (0, 0)})
        assert (a + b).degree() is None

    def test_parity(self):
        even = DistExpr.single(2, mono={0: 1}, delta={2: (1, 0)})
        assert even.parity() == "even"
        odd = DistExpr.single(2, mono={0: 1}, delta={2: (0, 0)})
        assert odd.parity() == "odd"

    def test_u1_weight(self):
        # z1 delta^{(1,0)}(z2): weight(z1) = 1, weight of dz2-derivative -1
        expr = DistExpr.single(2, mono={0: 1}, delta={2: (1, 0)})
        assert expr.u1_weights() == {0}


class TestSupportAndRank:
    def test_formal_support(self):
        sigma = AffineExponent(Fraction(2), Fraction(-1, 2))
        expr = DistExpr.single(4, powers={2: sigma},
                               delta={3: (0, 0), 4: (1, 1)})
        desc = expr.formal_support()
        assert isinstance(desc, SupportDescriptor)
        assert desc.stratum == 2
        assert desc.label() == "X2"

    def test_independence_rank_basics(self):
        n = 2
        a = DistExpr.single(n, delta={2: (0, 0)})
        b = DistExpr.single(n, delta={2: (1, 0)})
        assert independence_rank([a, b]) == 2
        assert independence_rank([a, a.scale(LAM)]) == 1
        assert independence_rank([]) == 0
