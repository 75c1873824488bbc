import pytest

from sbolab.paramfield import ParamScalar, PS_LAM, PS_ONE
from sbolab.monogenics import (gegenbauer, gegenbauer_coeffs_rational,
                               verify_gegenbauer_identities, IdentityFailure,
                               _geg_identity_diff, _GEG_IDENTITIES)


class TestExplicitCoefficients:
    def test_degree_zero(self):
        g = gegenbauer(0, PS_LAM)
        assert g.coeffs == [PS_ONE]

    def test_degree_one(self):
        g = gegenbauer(1, PS_LAM)
        assert g.coeffs[0].is_zero()
        assert g.coeffs[1] == 2 * PS_LAM

    def test_degree_two(self):
        g = gegenbauer(2, PS_LAM)
        assert g.coeffs[2] == 2 * PS_LAM * (PS_LAM + PS_ONE)
        assert g.coeffs[1].is_zero()
        assert g.coeffs[0] == -PS_LAM

    def test_rational_parameter_agrees(self):
        from sbolab.paramfield import evaluate
        for deg in range(6):
            num = gegenbauer_coeffs_rational(deg, "3/2")
            sym = gegenbauer(deg, PS_LAM)
            for t in range(deg + 1):
                assert evaluate(sym.coeffs[t], "3/2", 0) == num[t]


class TestIdentities:
    def test_suite_to_degree_ten(self):
        report = verify_gegenbauer_identities(10)
        assert set(report) == set(_GEG_IDENTITIES)
        for per in report.values():
            assert all(per.values())

    def test_g1_degree_three(self):
        assert not _geg_identity_diff("G1", 3)

    def test_g7_degree_one(self):
        # 2 lam (1-z^2) C_0^{lam+1} = (1+2 lam) z C_1^lam - 2 C_2^lam
        assert not _geg_identity_diff("G7", 1)

    def test_ode_degree_zero(self):
        assert not _geg_identity_diff("ODE", 0)

    def test_requires_min_degree(self):
        with pytest.raises(ValueError):
            verify_gegenbauer_identities(1)
