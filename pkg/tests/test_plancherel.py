from fractions import Fraction
from unittest.mock import patch

import pytest

import plancherel
from characters import MultChar
from plancherel import (c_sigma, central_sign, conductor_identity_check, determinant_relation, l_quotient,
                        plancherel_average, plancherel_closed, plancherel_harmonic_mean, plancherel_plan_and_sum,
                        plancherel_report, pole_order_at_s0, reducibility, related_reps)
from ratfun import RatFun
from slcm import SlcmError


class TestCentralSign:
    """Tests for (-1, -1)_n chi_psi(-1)."""

    @pytest.mark.parametrize("unit_exp, expected", [(0, 1), (2, 1), (3, -1), (1, -1)])
    def test_odd_cover(self, ctx_7_3, genuine, unit_exp, expected):
        """Test the sign is chi(-1) when -1 is a cube."""
        # Execute / Assert
        assert central_sign(genuine(ctx_7_3, unit_exp)) == expected


class TestClosedForm:
    """Tests for c(sigma) and the L-quotient."""

    def test_c_sigma_unramified_power(self, ctx_7_3, genuine):
        """Test c(sigma) = 1 when chi^n is unramified."""
        # Execute / Assert
        assert c_sigma(genuine(ctx_7_3, 2, 7)) == 1

    def test_c_sigma_ramified_power(self, ctx_7_3, genuine):
        """Test every twist keeps conductor 1, so c(sigma) = 1/7."""
        # Execute / Assert
        assert c_sigma(genuine(ctx_7_3, 1)) == Fraction(1, 7)

    def test_l_quotient_trivial(self, ctx_7_3):
        """Test L(3s) L(-3s) / (L(1 - 3s) L(1 + 3s)) has a double pole at s = 0."""
        # Execute
        quotient = l_quotient(ctx_7_3, MultChar.trivial(ctx_7_3), 3)

        # Assert
        assert pole_order_at_s0(quotient) == 2

    def test_l_quotient_ramified(self, ctx_7_3):
        """Test the quotient is 1 for a ramified chi^n."""
        # Execute / Assert
        assert l_quotient(ctx_7_3, MultChar.make(ctx_7_3, 1), 3) == 1

    @pytest.mark.parametrize("unit_exp, varpi_exp", [(0, 0), (0, 56), (1, 0), (2, 7), (3, 0)])
    def test_closed_matches_average_odd(self, ctx_7_3, genuine, unit_exp, varpi_exp):
        """Test c(sigma) times the L-quotient equals the averaged rank-one measures."""
        # Setup
        data = genuine(ctx_7_3, unit_exp, varpi_exp)

        # Execute / Assert
        assert plancherel_closed(data) == plancherel_average(data)

    @pytest.mark.parametrize("unit_exp", [0, 1, 2])
    def test_closed_matches_average_double(self, ctx_5_2, genuine, unit_exp):
        """Test the double cover."""
        # Setup
        data = genuine(ctx_5_2, unit_exp, 5)

        # Execute / Assert
        assert plancherel_closed(data) == plancherel_average(data)


class TestPaths:
    """Tests for the agreement of every route to mu^-1."""

    @pytest.mark.parametrize("unit_exp, varpi_exp", [(0, 0), (1, 0), (2, 10)])
    def test_report_double_cover(self, ctx_5_2, genuine, unit_exp, varpi_exp):
        """Test all paths agree when d = 1."""
        # Execute
        report = plancherel_report(genuine(ctx_5_2, unit_exp, varpi_exp))

        # Assert
        assert report.paths_agree, report.notes
        assert report.notes == []
        assert set(report.paths) == {"plan_and_sum", "average", "closed", "trace_sum"}

    def test_plan_and_sum_odd(self, ctx_7_3, genuine):
        """Test one Slcm row reproduces the average."""
        # Setup
        data = genuine(ctx_7_3, 2, 56)

        # Execute / Assert
        assert plancherel_plan_and_sum(data) == plancherel_average(data)

    def test_report_six_fold_cover(self, ctx_7_6, genuine):
        """Test all paths agree on the six-fold cover with chi ramified and chi^2 unramified."""
        # Execute
        report = plancherel_report(genuine(ctx_7_6, 3))

        # Assert
        assert report.paths_agree, report.notes

    @pytest.mark.parametrize("unit_exp", range(6))
    def test_report_linear_cover(self, ctx_7_1, genuine, unit_exp):
        """Test all paths agree on SL2 itself for every unit exponent."""
        # Execute
        report = plancherel_report(genuine(ctx_7_1, unit_exp, 28))

        # Assert
        assert report.paths_agree, report.notes

    def test_linear_unramified_is_l_quotient(self, ctx_7_1, genuine):
        """Test mu^-1 is the L-quotient with c(sigma) = 1 for an unramified chi."""
        # Setup
        data = genuine(ctx_7_1, 0, 28)

        # Execute / Assert
        assert plancherel_average(data) == l_quotient(ctx_7_1, data.chi, 1)

    @pytest.mark.slow
    @pytest.mark.parametrize("name, unit_exp", [("ctx_7_3", 0), ("ctx_7_3", 1), ("ctx_7_6", 0), ("ctx_7_6", 1)])
    def test_report_higher_covers(self, request, genuine, name, unit_exp):
        """Test all paths on the triple and six-fold covers."""
        # Setup
        ctx = request.getfixturevalue(name)

        # Execute
        report = plancherel_report(genuine(ctx, unit_exp))

        # Assert
        assert report.paths_agree, report.notes

    def test_determinant_relation(self, ctx_7_3, genuine):
        """Test D(sigma, s) D(sigma^w, -s) chi_sigma(-I2)^d = (mu^-1)^d."""
        # Execute / Assert
        assert determinant_relation(genuine(ctx_7_3, 2, 56))


class TestReducibility:
    """Tests for the reducibility classifier."""

    def test_quadratic_restriction_is_reducible(self, ctx_7_3, genuine):
        """Test chi(u) = -1 restricts to a nontrivial quadratic character of F*^3."""
        # Execute
        report = reducibility(genuine(ctx_7_3, 3))

        # Assert
        assert report.reducible
        assert report.restricted_order == 2
        assert report.pole_order == 0
        assert report.consistent

    def test_trivial_is_irreducible(self, ctx_7_3, genuine):
        """Test mu^-1 has a double pole at s = 0 for the trivial character."""
        # Execute
        report = reducibility(genuine(ctx_7_3))

        # Assert
        assert not report.reducible
        assert report.pole_order == 2
        assert report.consistent

    def test_not_weyl_invariant(self, ctx_7_3, genuine):
        """Test chi(varpi) = zeta_8 is irreducible although mu^-1 is analytic at s = 0."""
        # Execute
        report = reducibility(genuine(ctx_7_3, 0, 21))

        # Assert
        assert not report.reducible
        assert not report.weyl_invariant
        assert report.restricted_order == 8
        assert report.pole_order == 0
        assert report.consistent

    def test_even_covers_are_irreducible(self, ctx_7_6, genuine):
        """Test the verdict is never reducible for even n."""
        # Execute / Assert
        assert not reducibility(genuine(ctx_7_6, 3)).reducible

    def test_inconsistent_verdict_is_logged(self, ctx_7_3, genuine):
        """Test a disagreeing mu^-1 is reported through the logger."""
        # Setup
        data = genuine(ctx_7_3)

        # Execute
        with patch.object(plancherel.logger, "warning") as warning:
            report = reducibility(data, RatFun.one(ctx_7_3.field))

        # Assert
        assert not report.consistent
        warning.assert_called_once()


class TestRelatedRepresentations:
    """Tests for E_m(sigma) and the harmonic mean."""

    def test_double_cover_members(self, ctx_7_6, genuine):
        """Test nine twists survive on the double cover."""
        # Execute
        members = related_reps(genuine(ctx_7_6, 1, 3), 2)

        # Assert
        assert len(members) == 9
        assert all(member.ctx.n == 2 for member in members)

    def test_same_cover_has_one_member(self, ctx_7_3, genuine):
        """Test E_n(sigma) = {sigma}."""
        # Execute / Assert
        assert len(related_reps(genuine(ctx_7_3, 1), 3)) == 1

    @pytest.mark.parametrize("m", [0, 3, 4])
    def test_rejects_bad_m(self, ctx_7_6, genuine, m):
        """Test m must divide n and share its parity."""
        # Execute / Assert
        with pytest.raises(SlcmError):
            related_reps(genuine(ctx_7_6), m)

    def test_harmonic_mean_linear(self, ctx_7_3, genuine):
        """Test the mean over the linear cover recovers mu_3^-1."""
        # Setup
        data = genuine(ctx_7_3, 2, 7)

        # Execute / Assert
        assert plancherel_harmonic_mean(data, 1) == plancherel_average(data)

    def test_harmonic_mean_double(self, ctx_7_6, genuine):
        """Test the mean over the double cover recovers mu_6^-1."""
        # Setup
        data = genuine(ctx_7_6, 1, 3)

        # Execute / Assert
        assert plancherel_harmonic_mean(data, 2) == plancherel_average(data)


class TestConductorIdentity:
    """Tests for the sum of q^-e(eta) over eta^n = 1."""

    def test_cubic(self, ctx_7_3):
        """Test 3 + 6/7 on both sides."""
        # Execute
        identity = conductor_identity_check(ctx_7_3)

        # Assert
        assert identity.total == Fraction(27, 7)
        assert identity.passed

    def test_linear(self, ctx_7_1):
        """Test the trivial character alone gives 1 on both sides."""
        # Execute
        identity = conductor_identity_check(ctx_7_1)

        # Assert
        assert identity.total == 1
        assert identity.passed

    def test_even_rejected(self, ctx_7_6):
        """Test even covers are refused."""
        # Execute / Assert
        with pytest.raises(SlcmError):
            conductor_identity_check(ctx_7_6)
