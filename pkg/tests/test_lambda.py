import pytest

from sbolab.paramfield import ParamScalar, PS_I
from sbolab.monogenics import (lambda_constant, lambda_constant_bruteforce,
                               NotAdjacent, ZeroMap, MultiplicityViolation)


def frac(a, b=1):
    return ParamScalar.from_fraction(a, b)


def adjacent_quadruples(n, i, j, sa):
    if n % 2 == 0:
        alpha, alphap = (i, sa), j
        betas = [(i + 1, sa), (i, -sa), (i - 1, sa)]
        betaps = [j + 1, j, j - 1]
    else:
        alpha, alphap = i, (j, sa)
        betas = [i + 1, i, i - 1]
        betaps = [(j + 1, sa), (j, -sa), (j - 1, sa)]
    return [(alpha, alphap, b, bp) for b in betas for bp in betaps]


class TestClosedForm:
    def test_even_diagonal_up(self):
        # ((i,+), j) -> ((i+1,+), j+1): (n+2j-1)/(n+2i+1)
        assert lambda_constant(4, (1, 1), 0, (2, 1), 1) == frac(3, 7)

    def test_even_sign_flip(self):
        # ((i,+), j) -> ((i,-), j): (n+2i)(n+2j-1)/((n+2i-1)(n+2i+1))
        assert lambda_constant(4, (0, 1), 0, (0, -1), 0) == frac(4, 5)

    def test_even_down_left(self):
        # ((i,+), j) -> ((i-1,+), j-1)
        assert lambda_constant(4, (2, 1), 1, (1, 1), 0) == \
            frac((4 + 2 + 1 - 2) * (4 + 2 + 1 - 1), (4 + 4 - 1) * (4 + 2 - 3))

    def test_even_imaginary_entry(self):
        # ((i,+), j) -> ((i+1,+), j): -(i-j+1)/(n+2i+1) sqrt(-1)
        assert lambda_constant(4, (1, 1), 0, (2, 1), 0) == \
            frac(-2, 7) * PS_I

    def test_odd_entries_are_real(self):
        v = lambda_constant(3, 1, (0, 1), 2, (0, -1))
        assert not v.num.terms or all(c.im == 0 for c in v.num.terms.values())

    def test_not_adjacent(self):
        with pytest.raises(NotAdjacent):
            lambda_constant(4, (1, 1), 0, (3, 1), 1)
        with pytest.raises(NotAdjacent):
            lambda_constant(4, (1, 1), 2, (2, 1), 1)  # containment fails
        with pytest.raises(NotAdjacent):
            lambda_constant(3, (1, 1), 0, (2, 1), 1)  # wrong label shape


class TestBruteForceAgreement:
    @pytest.mark.parametrize("n,imax", [(3, 2), (4, 2)])
    def test_full_spanning_set(self, n, imax):
        for i in range(imax + 1):
            for j in range(i + 1):
                for sa in (1, -1):
                    for quad in adjacent_quadruples(n, i, j, sa):
                        try:
                            table = lambda_constant(n, *quad)
                        except NotAdjacent:
                            continue
                        bf = lambda_constant_bruteforce(n, *quad)
                        assert bf == table, quad

    @pytest.mark.parametrize("n,mb", [(5, 4), (6, 3)])
    def test_reduced_spanning_set(self, n, mb):
        for i in range(2):
            for j in range(i + 1):
                for quad in adjacent_quadruples(n, i, j, 1):
                    try:
                        table = lambda_constant(n, *quad)
                    except NotAdjacent:
                        continue
                    bf = lambda_constant_bruteforce(n, *quad, max_basis=mb)
                    assert bf == table, quad

    def test_proportionality_is_certified(self):
        # the solve sees every sampled basis element and direction at once;
        # a wrong table value can never sneak through as "proportional"
        v = lambda_constant_bruteforce(4, (1, 1), 1, (1, -1), 1)
        assert v == lambda_constant(4, (1, 1), 1, (1, -1), 1)
        assert v != frac(1, 2)
