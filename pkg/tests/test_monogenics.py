import random
from fractions import Fraction
from math import comb

import pytest

from sbolab.paramfield import GaussianRational, ONE, ZERO
from sbolab.cliffspin import Spinor, spin_dim
from sbolab.monogenics import (SpinorPolynomial, dirac, monomials,
                               monogenic_basis, fischer_split,
                               mult_coordinate_split, branch_embed,
                               apply_group_element, NotMonogenic, SplitFailure,
                               _embed_values)


def gr(a, b=0):
    return GaussianRational(a, b)


def const_poly(n, s):
    return SpinorPolynomial(n, n, "+", {(0,) * n: s})


class TestDirac:
    def test_constant(self):
        assert dirac(const_poly(3, Spinor.basis(1, 0))).is_zero()

    def test_linear(self):
        # D(x_k s) = e_k s
        s = Spinor.basis(1, 1)
        phi = SpinorPolynomial(3, 3, "+", {(0, 1, 0): s})
        assert dirac(phi) == const_poly(3, s).apply_e(2)

    def test_zeta_x(self):
        # D(zeta(x) s) = -n s for a constant spinor
        for n in (2, 3, 4):
            s = Spinor.basis(n // 2, 0)
            assert dirac(const_poly(n, s).zeta_x()) == \
                const_poly(n, s).scale(gr(-n))


class TestMonogenicBasis:
    @pytest.mark.parametrize("n,i", [(2, 0), (2, 1), (2, 3), (2, 5), (3, 2),
                                     (3, 4), (3, 5), (4, 2), (4, 5)])
    def test_dimension_against_rank_oracle(self, n, i):
        # surjectivity of the Dirac operator gives the independent count
        basis = monogenic_basis(n, i)
        want = spin_dim(n) * (comb(n + i - 1, i) -
                              (comb(n + i - 2, i - 1) if i else 0))
        assert len(basis) == want

    @pytest.mark.parametrize("n,i", [(2, 2), (3, 2), (4, 3)])
    def test_members_are_monogenic(self, n, i):
        for phi in monogenic_basis(n, i):
            assert dirac(phi).is_zero()

    def test_constants(self):
        assert len(monogenic_basis(2, 0)) == 2


def random_poly(rng, n, deg):
    m = n // 2
    coeffs = {}
    for mono in monomials(n, deg):
        coeffs[mono] = Spinor(m, {rng.randrange(1 << m): gr(rng.randint(-2, 2))})
    return SpinorPolynomial(n, n, "+", coeffs)


class TestFischer:
    def test_monogenic_is_single_component(self):
        for phi in monogenic_basis(3, 2)[:3]:
            assert fischer_split(phi) == [(0, phi)]

    def test_norm_square(self):
        # |x|^2 s = zeta(x)^2 (-s)
        s = Spinor.basis(1, 1)
        phi = const_poly(3, s).norm2_mul()
        comps = fischer_split(phi)
        assert [j for j, _ in comps] == [2]
        assert comps[0][1] == const_poly(3, s).scale(gr(-1))

    def test_coordinate_times_constant(self):
        # matches the coordinate-multiplication split at degree 0
        n = 3
        s = Spinor.basis(1, 0)
        c = const_poly(n, s)
        phi = c.mul_monomial((1, 0, 0))
        comps = dict(fischer_split(phi))
        plus, zero, minus = mult_coordinate_split(c, 1)
        assert comps[0] == plus
        assert comps[1] == zero.scale(gr(-1))
        assert 2 not in comps and minus.is_zero()

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_reconstruction_random(self, n):
        rng = random.Random(n)
        for deg in range(0, 6 if n < 4 else 4):
            phi = random_poly(rng, n, deg)
            comps = fischer_split(phi)
            rec = phi._zero_like()
            for j, psi in comps:
                assert dirac(psi).is_zero()
                t = psi
                for _ in range(j):
                    t = t.zeta_x()
                rec = rec + t
            assert rec == phi

    def test_inhomogeneous_rejected(self):
        s = Spinor.basis(1, 0)
        phi = SpinorPolynomial(2, 2, "+", {(0, 0): s, (1, 0): s})
        with pytest.raises(SplitFailure):
            fischer_split(phi)


class TestCoordinateSplit:
    def test_degree_zero_formulas(self):
        for n in (2, 3, 4):
            s = Spinor.basis(n // 2, 0)
            c = const_poly(n, s)
            plus, zero, minus = mult_coordinate_split(c, 1)
            assert minus.is_zero()
            assert zero == c.apply_e(1).scale(gr(Fraction(1, n)))
            want_plus = c.mul_monomial(tuple(1 if t == 0 else 0 for t in range(n))) + \
                c.apply_e(1).zeta_x().scale(gr(Fraction(1, n)))
            assert plus == want_plus

    @pytest.mark.parametrize("n,i", [(3, 2), (4, 2)])
    def test_recombination_and_monogenicity(self, n, i):
        for phi in monogenic_basis(n, i):
            for k in range(1, n + 1):
                plus, zero, minus = mult_coordinate_split(phi, k)
                xk = tuple(1 if t == k - 1 else 0 for t in range(n))
                assert phi.mul_monomial(xk) == \
                    plus - zero.zeta_x() + minus.norm2_mul()
                for c in (plus, zero, minus):
                    assert dirac(c).is_zero()

    def test_rejects_non_monogenic(self):
        s = Spinor.basis(1, 0)
        bad = const_poly(2, s).mul_monomial((1, 0))  # x_1 s is not monogenic
        with pytest.raises(NotMonogenic):
            mult_coordinate_split(bad, 1)


class TestBranchEmbed:
    def test_equal_degrees_is_scaling(self):
        for n in (2, 3):
            for j in (0, 1):
                for phi in monogenic_basis(n, j):
                    e = branch_embed(n, j, j, phi)
                    want = _embed_values(phi).extend_vars(n + 1).scale(
                        gr(n + 2 * j - 1))
                    assert e == want

    def test_degree_zero_to_one(self):
        # I(s) = n(n-1) x_{n+1} s + (n-1) zeta(x') e_{n+1} s
        for n in (2, 3, 4):
            s = Spinor.basis(n // 2, 0)
            phi = const_poly(n, s)
            out = branch_embed(n, 0, 1, phi)
            emb = _embed_values(phi).extend_vars(n + 1)
            xlast = tuple(0 if t < n else 1 for t in range(n + 1))
            want = emb.mul_monomial(xlast, gr(n * (n - 1)))
            core = emb.apply_e(n + 1)
            for k in range(1, n + 1):
                ek = tuple(1 if t == k - 1 else 0 for t in range(n + 1))
                want = want + core.apply_e(k).mul_monomial(ek, gr(n - 1))
            assert out == want

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_monogenic_in_one_more_variable(self, n):
        for j in range(0, 3):
            for i in range(j, 4):
                for phi in monogenic_basis(n, j)[:3]:
                    emb = branch_embed(n, j, i, phi, check=True)
                    assert emb.degree() in (-1, i)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_equivariance_on_generators(self, n):
        for j in (0, 1):
            for i in range(j, 3):
                for phi in monogenic_basis(n, j)[:2]:
                    for gens in ((1,), (1, 2)):
                        lhs = branch_embed(n, j, i, apply_group_element(phi, gens))
                        rhs = apply_group_element(branch_embed(n, j, i, phi), gens)
                        assert lhs == rhs
