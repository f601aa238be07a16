import random
from fractions import Fraction

import pytest

from characters import MultChar
from exact_scalars import CyclotomicField
from lagrangian import standard_decomposition
from ratfun import RatFun
from schwartz import (SchwartzError, SchwartzFn, evaluate, fourier, integral, normalize,
                      partial_functional_equation, psi_root, random_schwartz, reduce_mod, sample_points,
                      step_values, tate_functional_equation, valuation, zeta)
from tame_field import make_context


class TestPadicHelpers:
    """Tests for valuations, residues and psi."""

    @pytest.mark.parametrize("x, expected", [(Fraction(50), 2), (Fraction(1, 25), -2), (Fraction(-3, 5), -1),
                                             (Fraction(7, 3), 0)])
    def test_valuation(self, x, expected):
        """Test v_5."""
        # Execute / Assert
        assert valuation(5, x) == expected

    def test_valuation_of_zero(self):
        """Test v(0) is None."""
        # Execute / Assert
        assert valuation(5, Fraction(0)) is None

    @pytest.mark.parametrize("x, depth, expected", [(Fraction(7), 1, Fraction(2)), (Fraction(-1), 1, Fraction(4)),
                                                    (Fraction(6, 5), 0, Fraction(1, 5)),
                                                    (Fraction(6, 5), -1, Fraction(0))])
    def test_reduce_mod(self, x, depth, expected):
        """Test representatives of x + p^depth Z_p."""
        # Execute / Assert
        assert reduce_mod(5, x, depth) == expected

    def test_psi_root(self, deep_5_2):
        """Test psi(1/5) = zeta_5 and psi(integers) = 1."""
        # Setup
        field = deep_5_2.field

        # Assert
        assert psi_root(field, Fraction(1, 5)) == field.root_of_order(5, 1)
        assert psi_root(field, Fraction(-4, 5)) == field.root_of_order(5, 1)
        assert psi_root(field, Fraction(3)) == 1

    def test_psi_root_needs_roots_of_unity(self):
        """Test psi(1/125) is not in Q(zeta_200)."""
        # Setup
        field = CyclotomicField(200, prime=5)

        # Execute / Assert
        with pytest.raises(SchwartzError):
            psi_root(field, Fraction(1, 125))


class TestSchwartzFunctions:
    """Tests for evaluation, integration and the Fourier transform."""

    def test_indicator_values(self, deep_5_2):
        """Test 1_{1 + 5 Z_5}."""
        # Setup
        phi = SchwartzFn.indicator(deep_5_2, center=1, depth=1)

        # Assert
        assert evaluate(phi, 6) == 1
        assert evaluate(phi, Fraction(-4)) == 1
        assert phi(2) == 0
        assert phi(Fraction(1, 5)) == 0

    def test_integrals(self, deep_5_2):
        """Test vol(5 Z_5) = 1/5 and vol(5^-1 Z_5) = 5."""
        # Assert
        assert integral(SchwartzFn.indicator(deep_5_2, depth=1)) == Fraction(1, 5)
        assert integral(SchwartzFn.indicator(deep_5_2, depth=-1)) == 5
        assert integral(SchwartzFn.indicator(deep_5_2, center=3, depth=0, coefficient=2)) == 2

    def test_fourier_of_unit_ball(self, deep_5_2):
        """Test 1_{Z_p} is self-dual."""
        # Setup
        unit = SchwartzFn.indicator(deep_5_2)

        # Execute / Assert
        assert normalize(fourier(unit)) == normalize(unit)

    def test_fourier_of_small_ball(self, deep_5_2):
        """Test the transform of 1_{pZ_p} is p^-1 1_{p^-1 Z_p}."""
        # Execute
        transformed = fourier(SchwartzFn.indicator(deep_5_2, depth=1))

        # Assert
        assert transformed(Fraction(1, 5)) == Fraction(1, 5)
        assert transformed(Fraction(3)) == Fraction(1, 5)
        assert transformed(Fraction(1, 25)) == 0

    def test_fourier_involution(self, deep_5_2):
        """Test the double transform is phi(-x)."""
        # Setup
        rng = random.Random(3)
        phi = random_schwartz(deep_5_2, rng, terms=4)
        twice = fourier(fourier(phi))

        # Assert
        for point in sample_points(5, rng, 30):
            assert twice(point) == phi(-point)

    def test_normalize_preserves_values(self, deep_5_2):
        """Test the refined step function agrees pointwise."""
        # Setup
        rng = random.Random(11)
        phi = random_schwartz(deep_5_2, rng)
        flat = normalize(phi)

        # Assert
        depth, _ = step_values(phi)
        assert all(term.depth == depth for term in flat.terms)
        for point in sample_points(5, rng, 30):
            assert flat(point) == phi(point)

    def test_difference_cancels(self, deep_5_2):
        """Test phi - phi normalizes to no terms."""
        # Setup
        phi = SchwartzFn.indicator(deep_5_2, center=2, depth=1)

        # Execute / Assert
        assert normalize(phi - phi).terms == ()

    def test_rejects_extension_field(self, ctx_3_2_2):
        """Test f = 2."""
        # Execute / Assert
        with pytest.raises(SchwartzError):
            SchwartzFn.indicator(ctx_3_2_2)

    def test_random_needs_depth(self, ctx_5_2):
        """Test random functions need 25th roots of unity."""
        # Execute / Assert
        with pytest.raises(SchwartzError):
            random_schwartz(ctx_5_2, random.Random(0))


class TestZetaIntegrals:
    """Tests for Tate zeta integrals and their functional equations."""

    def test_zeta_of_unit_ball(self, deep_5_2):
        """Test zeta(s, 1, 1_{Z_p}) = (1 - 1/p) / (1 - X)."""
        # Setup
        field = deep_5_2.field
        expected = RatFun.from_polys(field, [Fraction(4, 5)], [1, -1])

        # Execute / Assert
        assert zeta(deep_5_2, SchwartzFn.indicator(deep_5_2), MultChar.trivial(deep_5_2)) == expected

    def test_zeta_of_ramified_character(self, deep_5_2):
        """Test a ramified chi integrates to zero over Z_p."""
        # Execute
        value = zeta(deep_5_2, SchwartzFn.indicator(deep_5_2), MultChar.make(deep_5_2, 1))

        # Assert
        assert value.is_zero

    def test_zeta_of_unit_coset(self, deep_5_2):
        """Test the integral over 1 + 5 Z_5 is the constant 1/5."""
        # Execute
        value = zeta(deep_5_2, SchwartzFn.indicator(deep_5_2, center=1, depth=1), MultChar.make(deep_5_2, 1, 7))

        # Assert
        assert value == Fraction(1, 5)

    @pytest.mark.parametrize("unit_exp, varpi_exp", [(0, 0), (0, 25), (1, 0), (2, 50)])
    def test_tate_functional_equation(self, deep_5_2, unit_exp, varpi_exp):
        """Test zeta(1 - s, chi^-1, phi-hat) = gamma(s, chi, psi) zeta(s, chi, phi)."""
        # Setup
        rng = random.Random(unit_exp * 100 + varpi_exp)
        chi = MultChar.make(deep_5_2, unit_exp, varpi_exp)
        functions = [SchwartzFn.indicator(deep_5_2), SchwartzFn.indicator(deep_5_2, center=1, depth=1)]
        functions += [random_schwartz(deep_5_2, rng) for _ in range(3)]

        # Assert
        for phi in functions:
            assert tate_functional_equation(deep_5_2, phi, chi)

    def test_partial_functional_equation_single_class(self, deep_5_2):
        """Test the partial equation when d = 1."""
        # Setup
        rng = random.Random(5)
        decomposition = standard_decomposition(deep_5_2)
        phi = random_schwartz(deep_5_2, rng)

        # Assert
        for chi in (MultChar.trivial(deep_5_2), MultChar.make(deep_5_2, 1, 25)):
            assert partial_functional_equation(deep_5_2, decomposition, phi, chi, deep_5_2.tame.one_class)

    @pytest.mark.slow
    def test_partial_functional_equation_cubic(self):
        """Test the partial equation for n = 3 over Q_7 with 49th roots of unity."""
        # Setup
        ctx = make_context(7, 1, 3, depth=2)
        rng = random.Random(1)
        decomposition = standard_decomposition(ctx)
        phi = random_schwartz(ctx, rng, terms=2)

        # Assert
        for chi in (MultChar.trivial(ctx), MultChar.make(ctx, 1, ctx.order // 3), MultChar.make(ctx, 3)):
            for k0 in decomposition.kbar:
                assert partial_functional_equation(ctx, decomposition, phi, chi, k0)
