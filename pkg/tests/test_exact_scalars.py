from fractions import Fraction

import pytest
from sympy import cyclotomic_poly
from sympy.abc import x

from exact_scalars import (ContextError, CyclotomicField, OrderMismatchError, RootScalar, ScalarError,
                           ZeroInversionError, cyclotomic_polynomial, make_order, sqrt_q)


@pytest.fixture(scope="module")
def field_24():
    """Q(zeta_24) with p = 3, the field of F_9."""
    return CyclotomicField(24, prime=3)


@pytest.fixture(scope="module")
def field_168():
    """Q(zeta_168) with p = 7."""
    return CyclotomicField(168, prime=7)


class TestMakeOrder:
    """Tests for the cyclotomic order of a context."""

    @pytest.mark.parametrize("p, f, n, depth, expected", [
        (7, 1, 3, 1, 168),
        (5, 1, 2, 1, 40),
        (3, 2, 2, 1, 24),
        (7, 1, 3, 2, 1176),
        (13, 1, 3, 1, 312),
    ])
    def test_order(self, p, f, n, depth, expected):
        """Test N = lcm(8, p^depth, q - 1)."""
        # Execute / Assert
        assert make_order(p, f, n, depth) == expected

    @pytest.mark.parametrize("p, f, n", [(2, 1, 1), (9, 1, 1), (7, 1, 5), (5, 1, 4), (13, 1, 12)])
    def test_rejects_non_tame(self, p, f, n):
        """Test even or composite p, n not dividing q - 1, and 4 | n."""
        # Execute / Assert
        with pytest.raises(ContextError):
            make_order(p, f, n)


class TestCyclotomicPolynomial:
    """Tests for the integer cyclotomic polynomials."""

    def test_small_cases(self):
        """Test a few polynomials by hand."""
        # Assert
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(6) == (1, -1, 1)
        assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)

    @pytest.mark.parametrize("order", [9, 24, 40, 105, 168])
    def test_matches_sympy(self, order):
        """Test against sympy.cyclotomic_poly."""
        # Setup
        reference = [int(c) for c in cyclotomic_poly(order, x, polys=True).all_coeffs()]

        # Execute / Assert
        assert cyclotomic_polynomial(order) == tuple(reversed(reference))


class TestCycNumber:
    """Tests for exact arithmetic in Q(zeta_N)."""

    def test_roots_of_unity(self, field_24):
        """Test root arithmetic and the vanishing sum of cube roots."""
        # Assert
        assert field_24.root(12) == -1
        assert field_24.root(6) * field_24.root(6) == field_24.root(12)
        assert field_24.root(5) * field_24.root(-5) == 1
        assert field_24.root(0) + field_24.root(8) + field_24.root(16) == 0

    def test_canonical_equality(self, field_24):
        """Test that different expressions of one number compare equal."""
        # Setup
        left = field_24.root(1) + field_24.root(13)

        # Assert
        assert left == 0
        assert left.is_zero

    def test_inverse(self, field_24):
        """Test a non-monomial inverse."""
        # Setup
        value = field_24.one + field_24.root(1) + field_24.rational(Fraction(1, 3))

        # Execute
        inverse = value.inverse()

        # Assert
        assert value * inverse == 1

    def test_zero_inverse(self, field_24):
        """Test inverting zero."""
        # Execute / Assert
        with pytest.raises(ZeroInversionError):
            field_24.zero.inverse()
        with pytest.raises(ZeroInversionError):
            field_24.one / 0

    def test_conjugation(self, field_24):
        """Test complex conjugation of a root and of a modulus."""
        # Setup
        value = field_24.rational(2) + field_24.root(6)

        # Assert
        assert field_24.root(1).conj() == field_24.root(-1)
        assert value * value.conj() == 5

    def test_galois_rejects_non_unit(self, field_24):
        """Test the automorphism index must be a unit mod N."""
        # Execute / Assert
        with pytest.raises(ScalarError):
            field_24.root(1).galois(3)

    def test_mixing_fields(self, field_24):
        """Test numbers from different fields do not combine."""
        # Setup
        other = CyclotomicField(40)

        # Execute / Assert
        with pytest.raises(OrderMismatchError):
            field_24.one + other.one

    def test_root_of_order(self, field_24):
        """Test zeta_m^k lookup and its order check."""
        # Assert
        assert field_24.root_of_order(4, 1) == field_24.root(6)
        with pytest.raises(OrderMismatchError):
            field_24.root_of_order(5, 1)

    def test_sqrt_prime(self, field_168):
        """Test sqrt(p) from the quadratic Gauss sum, for p = 3 mod 4."""
        # Execute
        root = field_168.sqrt_prime

        # Assert
        assert root * root == 7
        assert root.approx().real > 0
        assert abs(root.approx().imag) < 1e-9

    def test_sqrt_prime_one_mod_four(self):
        """Test sqrt(p) for p = 1 mod 4."""
        # Setup
        field = CyclotomicField(40, prime=5)

        # Execute
        root = field.sqrt_prime

        # Assert
        assert root * root == 5
        assert root.approx().real > 0

    def test_field_without_sqrt(self):
        """Test a field that cannot hold sqrt(p)."""
        # Execute / Assert
        with pytest.raises(ContextError):
            CyclotomicField(14, prime=7)

    def test_encode_decode(self, field_24):
        """Test the canonical text form and its inverse."""
        # Setup
        value = field_24.root(5).scale(Fraction(2, 3)) - field_24.root(7)

        # Execute
        text = value.encode()

        # Assert
        assert text.startswith("24:[")
        assert field_24.decode(text) == value

    def test_decode_errors(self, field_24):
        """Test malformed and mismatched encodings."""
        # Execute / Assert
        with pytest.raises(ScalarError):
            field_24.decode("24:1,2")
        with pytest.raises(OrderMismatchError):
            field_24.decode("40:[1/1]")
        with pytest.raises(ScalarError):
            field_24.decode("24:[1/1,0/1]")

    def test_approx(self, field_24):
        """Test the floating point display value."""
        # Execute
        value = field_24.root(6).approx()

        # Assert
        assert abs(value - 1j) < 1e-12


class TestRootScalar:
    """Tests for the scalars ratio * zeta^k * sqrt(p)^h."""

    def test_normalization(self, field_168):
        """Test that sqrt(p)^2 folds into the ratio and signs into the root."""
        # Assert
        assert RootScalar(field_168, 1, 0, 2) == RootScalar(field_168, 7)
        assert RootScalar(field_168, -1).value == -1
        assert RootScalar(field_168, 1, 0, 1) ** 2 == RootScalar(field_168, 7)

    def test_group_operations(self, field_168):
        """Test inverse and powers."""
        # Setup
        scalar = RootScalar(field_168, Fraction(3, 2), 11, 1)

        # Assert
        assert (scalar * scalar.inverse()).key == (1, 0, 0)
        assert scalar ** -2 == (scalar ** 2).inverse()

    def test_value_matches_scale(self, field_168):
        """Test the field value of a scalar with a square root."""
        # Setup
        scalar = RootScalar(field_168, 2, 0, 1)

        # Execute
        value = scalar.value

        # Assert
        assert value * value == 28

    def test_nth_root(self, field_168):
        """Test square and cube roots."""
        # Assert
        assert RootScalar(field_168, 4).nth_root(2) ** 2 == RootScalar(field_168, 4)
        assert RootScalar(field_168, 7).nth_root(2) == RootScalar(field_168, 1, 0, 1)
        assert RootScalar(field_168, 2).nth_root(2) is None
        assert RootScalar(field_168, 8, 3).nth_root(3) ** 3 == RootScalar(field_168, 8, 3)

    def test_zero_ratio(self, field_168):
        """Test that zero is not a RootScalar."""
        # Execute / Assert
        with pytest.raises(ZeroInversionError):
            RootScalar(field_168, 0)

    def test_sqrt_q(self, field_24):
        """Test sqrt(9) = 3 inside Q(zeta_24)."""
        # Execute / Assert
        assert sqrt_q(field_24, 2) == 3
        assert sqrt_q(field_24, 1) * sqrt_q(field_24, 1) == 3
