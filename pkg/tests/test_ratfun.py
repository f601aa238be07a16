from fractions import Fraction

import pytest

from exact_scalars import CyclotomicField, RootScalar
from ratfun import PoleError, RatFun, RatFunError, ZeroFunctionError, split_binomial


@pytest.fixture(scope="module")
def field():
    """Q(zeta_40) with p = 5."""
    return CyclotomicField(40, prime=5)


@pytest.fixture
def one_minus_x(field):
    return RatFun.binomial(field, RootScalar(field, 1))


@pytest.fixture
def x(field):
    return RatFun.monomial(field, 1, 1)


class TestConstruction:
    """Tests for the constructors and canonical form."""

    def test_binomial_numerator(self, one_minus_x):
        """Test 1 - X expands lowest degree first."""
        # Assert
        assert one_minus_x.numerator == (1, -1)
        assert len(one_minus_x.denominator) == 1

    def test_from_polys_makes_denominator_monic(self, field):
        """Test 1 / (2 + 4X) is stored as (1/4) / (1/2 + X)."""
        # Execute
        value = RatFun.from_polys(field, [1], [2, 4])

        # Assert
        assert value.denominator[-1] == 1
        assert value.numerator == (Fraction(1, 4),)

    def test_from_polys_cancels_common_factor(self, field):
        """Test (1 - X^2) / (1 - X) reduces to 1 + X."""
        # Execute
        value = RatFun.from_polys(field, [1, 0, -1], [1, -1])

        # Assert
        assert value.numerator == (1, 1)
        assert value.denominator == (1,)

    def test_negative_monomial(self, field):
        """Test X^-2 keeps its power in the denominator."""
        # Execute
        value = RatFun.monomial(field, 3, -2)

        # Assert
        assert value.numerator == (3,)
        assert value.denominator == (0, 0, 1)

    def test_constants_and_monomials_expand(self, field):
        """Test one, constant and monomial expose their numerators and compare equal."""
        # Setup
        one = RatFun.one(field)
        cube = RatFun.monomial(field, 2, 3)

        # Assert
        assert one.numerator == (1,)
        assert one == 1
        assert RatFun.constant(field, Fraction(1, 5)) == Fraction(1, 5)
        assert cube.numerator == (0, 0, 0, 2)
        assert cube == RatFun.monomial(field, 2, 3)
        assert cube != RatFun.monomial(field, 2, 2)
        assert cube.reciprocal() * cube == 1

    def test_zero_denominator(self, field):
        """Test the zero polynomial cannot be a denominator."""
        # Execute / Assert
        with pytest.raises(ZeroFunctionError):
            RatFun.from_polys(field, [1], [0])


class TestArithmetic:
    """Tests for field operations on rational functions."""

    def test_sum_with_common_denominator(self, field, one_minus_x, x):
        """Test 1/(1 - X) - X/(1 - X) = 1."""
        # Setup
        one = RatFun.one(field)

        # Execute
        value = one / one_minus_x - x / one_minus_x

        # Assert
        assert value == 1
        assert value.is_constant

    def test_product_cancels_atoms(self, one_minus_x):
        """Test a function times its reciprocal."""
        # Execute
        value = one_minus_x * one_minus_x.reciprocal()

        # Assert
        assert value == 1

    def test_negative_power(self, field, one_minus_x):
        """Test (1/(1 - X))^-2 = (1 - X)^2."""
        # Setup
        expected = RatFun.from_polys(field, [1, -2, 1])

        # Execute
        value = (RatFun.one(field) / one_minus_x) ** -2

        # Assert
        assert value == expected

    def test_scaling_by_root_scalar(self, field, one_minus_x):
        """Test multiplying by sqrt(5) twice multiplies by 5."""
        # Setup
        root = RootScalar(field, 1, 0, 1)

        # Execute
        value = one_minus_x * root * root

        # Assert
        assert value == one_minus_x * 5

    def test_reciprocal_of_zero(self, field):
        """Test the zero function has no reciprocal."""
        # Execute / Assert
        with pytest.raises(ZeroFunctionError):
            RatFun.zero(field).reciprocal()

    def test_division_by_zero(self, one_minus_x):
        """Test dividing by the integer zero."""
        # Execute / Assert
        with pytest.raises(ZeroFunctionError):
            one_minus_x / 0


class TestSubstitution:
    """Tests for X -> c X^e."""

    def test_doubling(self, field, one_minus_x):
        """Test 1/(1 - X) becomes 1/(1 - X^2)."""
        # Setup
        expected = RatFun.from_polys(field, [1], [1, 0, -1])

        # Execute
        value = (RatFun.one(field) / one_minus_x).substitute(1, 2)

        # Assert
        assert value == expected

    def test_inversion(self, field, one_minus_x):
        """Test 1/(1 - X) becomes X/(X - 1) under X -> 1/X."""
        # Setup
        expected = RatFun.from_polys(field, [0, 1], [-1, 1])

        # Execute
        value = (RatFun.one(field) / one_minus_x).substitute(1, -1)

        # Assert
        assert value == expected

    def test_scaling(self, field, one_minus_x):
        """Test X -> X/5."""
        # Setup
        expected = RatFun.from_polys(field, [1], [1, Fraction(-1, 5)])

        # Execute
        value = (RatFun.one(field) / one_minus_x).substitute(Fraction(1, 5), 1)

        # Assert
        assert value == expected

    def test_expanded_numerator(self, field):
        """Test substitution of a function held with an expanded numerator."""
        # Setup
        value = RatFun.from_polys(field, [1, 2], [1, -1])
        expected = RatFun.from_polys(field, [1, 0, 2], [1, 0, -1])

        # Execute / Assert
        assert value.substitute(1, 2) == expected

    def test_zero_exponent(self, one_minus_x):
        """Test e = 0 is rejected."""
        # Execute / Assert
        with pytest.raises(RatFunError):
            one_minus_x.substitute(1, 0)

    def test_constant_must_be_monomial(self, field, one_minus_x):
        """Test a constant that is not a root times a rational."""
        # Execute / Assert
        with pytest.raises(RatFunError):
            one_minus_x.substitute(field.one + field.root(1), 1)


class TestEvaluation:
    """Tests for exact evaluation and orders."""

    def test_evaluate(self, field):
        """Test (1 + X)/(1 - X) at X = 2."""
        # Setup
        value = RatFun.from_polys(field, [1, 1], [1, -1])

        # Execute / Assert
        assert value.evaluate(2) == -3

    def test_evaluate_at_root_of_unity(self, field, one_minus_x):
        """Test 1 - X at X = -1 given as zeta^20."""
        # Execute / Assert
        assert one_minus_x.evaluate(field.root(20)) == 2

    def test_pole(self, field, one_minus_x):
        """Test evaluating at a pole."""
        # Setup
        value = RatFun.one(field) / one_minus_x

        # Execute / Assert
        with pytest.raises(PoleError):
            value.evaluate(1)

    def test_removable_point(self, field):
        """Test a common zero and pole of equal order."""
        # Setup
        value = RatFun.from_polys(field, [1, 0, -1], [1, -1])

        # Execute / Assert
        assert value.evaluate(1) == 2

    def test_order_at(self, field):
        """Test orders of (1 - X)^2 / X."""
        # Setup
        value = RatFun.from_polys(field, [1, -2, 1], [0, 1])

        # Assert
        assert value.order_at(1) == 2
        assert value.order_at(0) == -1
        assert value.order_at(3) == 0

    def test_order_of_zero(self, field):
        """Test the zero function has no order."""
        # Execute / Assert
        with pytest.raises(ZeroFunctionError):
            RatFun.zero(field).order_at(1)

    def test_approx_at(self, field, one_minus_x):
        """Test the floating point value of 1/(1 - X) at 1/2."""
        # Execute
        value = (RatFun.one(field) / one_minus_x).approx_at(0.5)

        # Assert
        assert abs(value - 2) < 1e-12


class TestSplitBinomial:
    """Tests for factoring X^e - gamma into atoms."""

    def test_splits_square(self, field):
        """Test X^2 - 1 = (X - 1)(X + 1)."""
        # Execute
        atoms = split_binomial(2, RootScalar(field, 1))

        # Assert
        assert len(atoms) == 2
        assert all(atom.degree == 1 for atom in atoms)

    def test_keeps_irreducible(self, field):
        """Test X^2 - 2 has no RootScalar roots."""
        # Execute
        atoms = split_binomial(2, RootScalar(field, 2))

        # Assert
        assert len(atoms) == 1
        assert atoms[0].degree == 2

    def test_square_root_of_p(self, field):
        """Test X^2 - 5 splits over sqrt(5)."""
        # Execute
        atoms = split_binomial(2, RootScalar(field, 5))

        # Assert
        assert len(atoms) == 2


class TestCodec:
    """Tests for the text encoding."""

    def test_decode_inverts_encode(self, field):
        """Test a function with irrational coefficients survives the text form."""
        # Setup
        value = RatFun.from_polys(field, [field.root(3), 2], [1, field.root(7)])

        # Execute
        text = value.encode()

        # Assert
        assert text.startswith("([")
        assert RatFun.decode(field, text) == value

    def test_malformed(self, field):
        """Test text without the quotient shape."""
        # Execute / Assert
        with pytest.raises(RatFunError):
            RatFun.decode(field, "[1]/[2]")

    def test_bad_coefficient(self, field):
        """Test an encoding from another field."""
        # Execute / Assert
        with pytest.raises(RatFunError):
            RatFun.decode(field, "([24:[1/1]])/([24:[1/1]])")
