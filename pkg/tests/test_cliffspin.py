import random

import pytest

from sbolab.paramfield import GaussianRational, ONE, ZERO, I
from sbolab.cliffspin import (CliffordElt, Spinor, SpinMap, clifford_mul,
                              pin_element, pin_cover_action, zeta_action,
                              zeta_gen_apply, zeta_matrix, gamma, gamma_matrix,
                              fund_branching, spin_dim, spin_projection_P,
                              check_proj_independence, DimensionMismatch,
                              NotInPin)


def gr(a, b=0):
    return GaussianRational(a, b)


class TestCliffordAlgebra:
    def test_generator_square(self):
        e1 = CliffordElt.basis(3, [1])
        assert (e1 * e1).scalar_part() == gr(-1)

    def test_anticommutation(self):
        e1, e2 = CliffordElt.basis(3, [1]), CliffordElt.basis(3, [2])
        assert (e1 * e2 + e2 * e1).is_zero()
        assert e1 * e2 == CliffordElt.basis(3, [1, 2])
        assert e2 * e1 == CliffordElt.basis(3, [1, 2]).scale(gr(-1))

    def test_bivector_square(self):
        e12 = CliffordElt.basis(4, [1, 2])
        assert (e12 * e12).scalar_part() == gr(-1)

    def test_mixed_signature(self):
        # Cl(1,1): e_1^2 = -1, e_2^2 = +1
        e1 = CliffordElt.basis(2, [1], p=1)
        e2 = CliffordElt.basis(2, [2], p=1)
        assert (e1 * e1).scalar_part() == gr(-1)
        assert (e2 * e2).scalar_part() == ONE

    def test_associativity_random(self):
        rng = random.Random(11)

        def rnd():
            return CliffordElt(4, {rng.randrange(16): gr(rng.randint(-3, 3),
                                                         rng.randint(-3, 3))
                                   for _ in range(4)})
        for _ in range(25):
            a, b, c = rnd(), rnd(), rnd()
            assert (a * b) * c == a * (b * c)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            clifford_mul(CliffordElt.basis(2, [1]), CliffordElt.basis(3, [1]))


class TestPinCover:
    def test_reflection(self):
        g = pin_element([[1, 0, 0]])
        assert pin_cover_action(g, [1, 0, 0]) == [gr(-1), ZERO, ZERO]
        assert pin_cover_action(g, [0, 1, 0]) == [ZERO, ONE, ZERO]

    def test_identity(self):
        g = CliffordElt.scalar(3, ONE)
        y = ["1/2", 2, -3]
        assert pin_cover_action(g, y) == [gr("1/2"), gr(2), gr(-3)]

    def test_preserves_quadratic_form(self):
        rng = random.Random(5)
        for _ in range(10):
            vecs = []
            for _ in range(rng.randint(1, 3)):
                v = [0] * 4
                v[rng.randrange(4)] = 1
                vecs.append(v)
            g = pin_element(vecs)
            y = [gr(rng.randint(-4, 4)) for _ in range(4)]
            z = pin_cover_action(g, y)
            q = lambda w: sum((c * c for c in w), ZERO)
            assert q(z) == q(y)

    def test_not_unit_vector(self):
        with pytest.raises(NotInPin):
            pin_element([[1, 1, 0]])


class TestSpinModule:
    def test_wedge_action(self):
        one = Spinor.basis(1, 0)
        assert zeta_action(2, "+", [1, I], one).coeffs == {1: gr(2)}  # 2 w_1

    def test_odd_generator(self):
        one, w1 = Spinor.basis(1, 0), Spinor.basis(1, 1)
        assert zeta_gen_apply(3, "+", 3, one) == one.scale(I)
        assert zeta_gen_apply(3, "+", 3, w1) == w1.scale(-I)

    def test_clifford_relation(self):
        # zeta(v)^2 = -|v|^2 on every basis spinor
        for n in (2, 3, 4, 5, 6):
            m = n // 2
            v = [gr(k + 1) for k in range(n)]
            norm = sum((c * c for c in v), ZERO)
            for mask in range(1 << m):
                s = Spinor.basis(m, mask)
                assert zeta_action(n, "+", v, zeta_action(n, "+", v, s)) == \
                    s.scale(-norm)

    def test_variant_is_alpha_twist(self):
        s = Spinor.basis(1, 1)
        assert zeta_gen_apply(3, "-", 2, s) == \
            zeta_gen_apply(3, "+", 2, s).scale(gr(-1))


class TestGamma:
    def test_degree_zero(self):
        assert gamma(Spinor.basis(2, 0)) == Spinor.basis(2, 0)

    def test_degree_one(self):
        w1 = Spinor.basis(2, 1)
        assert gamma(w1) == w1.scale(gr(-1))

    def test_involution(self):
        rng = random.Random(3)
        for _ in range(10):
            s = Spinor(3, {rng.randrange(8): gr(rng.randint(-3, 3))
                           for _ in range(3)})
            assert gamma(gamma(s)) == s

    def test_anticommutes_with_even_generators(self):
        # gamma intertwines zeta and zeta o alpha on the 2m wedge generators
        for n in (2, 3, 4, 5):
            m = n // 2
            for i in range(1, 2 * m + 1):
                for mask in range(1 << m):
                    s = Spinor.basis(m, mask)
                    assert gamma(zeta_gen_apply(n, "+", i, s)) + \
                        zeta_gen_apply(n, "+", i, gamma(s)) == Spinor(m)


class TestFundBranching:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
    def test_intertwining(self, n):
        plus, minus = fund_branching(n)
        m = n // 2
        for i in range(1, n + 1):
            for mask in range(1 << m):
                s = Spinor.basis(m, mask)
                zplus = zeta_matrix(n + 1, "+", i)
                assert zplus.apply_spinor(plus.apply_spinor(s)) == \
                    plus.apply_spinor(zeta_gen_apply(n, "+", i, s))
                assert zplus.apply_spinor(minus.apply_spinor(s)) == \
                    minus.apply_spinor(zeta_gen_apply(n, "-", i, s))

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
    def test_injective(self, n):
        plus, minus = fund_branching(n)
        assert plus.rank() == spin_dim(n)
        assert minus.rank() == spin_dim(n)

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_even_top_generator_is_i_gamma(self, n):
        assert zeta_matrix(n + 1, "+", n + 1) == gamma_matrix(n // 2).scale(I)

    @pytest.mark.parametrize("n", [3, 5])
    def test_odd_projection_formula(self, n):
        # projection onto the +- images is (id +- zeta(e_{n+1}) gamma)/2
        m = n // 2
        plus, minus = fund_branching(n)
        dim = 1 << (m + 1)
        zc = zeta_matrix(n + 1, "+", n + 1)
        gm = gamma_matrix(m + 1)
        proj_plus = (SpinMap.identity(dim) + zc.compose(gm)).scale(gr("1/2"))
        for mask in range(1 << m):
            s = Spinor.basis(m, mask)
            assert proj_plus.apply_spinor(plus.apply_spinor(s)) == \
                plus.apply_spinor(s)
            assert proj_plus.apply_spinor(minus.apply_spinor(s)).is_zero()
            # zeta(e_{n+1}) acts by -+gamma on the +- summand
            assert zc.apply_spinor(plus.apply_spinor(s)) == \
                gm.apply_spinor(plus.apply_spinor(s)).scale(gr(-1))


class TestSpinProjection:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_rank(self, n):
        P = spin_projection_P(n)
        want = spin_dim(n) if n % 2 else spin_dim(n) // 2
        assert P.rank() == want

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_intertwining_with_det_twist(self, n):
        P = spin_projection_P(n)
        for i in range(1, n):
            assert P.compose(zeta_matrix(n, "+", i)) == \
                zeta_matrix(n - 1, "+", i).compose(P).scale(gr(-1))

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_kernel_is_complementary_summand(self, n):
        P = spin_projection_P(n)
        iplus, iminus = fund_branching(n - 1)
        assert P.compose(iminus) == SpinMap.identity(spin_dim(n - 1))
        assert P.compose(iplus).is_zero()
        # P o zeta(e_n) vanishes on the summand P inverts
        assert P.compose(zeta_matrix(n, "+", n)).compose(iminus).is_zero()

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_independence(self, n):
        rep = check_proj_independence(n)
        assert rep["ok"] and rep["rank"] == n
