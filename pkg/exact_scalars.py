"""
Exact Scalars

Every scalar of a local-factor computation lives in one cyclotomic field
Q(zeta_N), with N fixed when the computation context is created.

Elements are stored sparsely over the tensor basis that Q(zeta_N) inherits from
the prime-power factorization N = prod l^e, i.e. Q(zeta_N) = (x) Q(zeta_{l^e}).
In that basis the reduction of an arbitrary power of zeta is a short signed sum
that is memoized per field, so multiplication never performs polynomial division.
The power basis of Q[x]/Phi_N(x) is used for the canonical text encoding.
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import factorint, integer_nthroot, isprime, legendre_symbol, totient

from logger_config import setup_logger

logger = setup_logger(__name__)

Rational = Union[int, Fraction]


class ScalarError(Exception):
    """Base class for exact scalar failures."""


class ZeroInversionError(ScalarError, ZeroDivisionError):
    """Raised when the zero element is inverted."""


class OrderMismatchError(ScalarError, ValueError):
    """Raised when elements of different cyclotomic fields are combined."""


class ContextError(ValueError):
    """Raised when (p, f, n) does not describe a supported tame context."""


def make_order(p: int, f: int, n: int, depth: int = 1) -> int:
    """
    Cyclotomic order N = lcm(8, p^depth, q - 1) of a tame context.

    Args:
        p: Residue characteristic (odd prime)
        f: Residue degree, q = p^f
        n: Cover degree, must divide q - 1 and not be divisible by 4
        depth: Power of p whose roots of unity are needed (the Schwartz and
            shell oracles use depth > 1)

    Returns:
        The order N

    Raises:
        ContextError: If the parameters leave the tame model
    """
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise ContextError(f"p must be an odd prime, got {p}")
    if not isinstance(f, int) or f < 1:
        raise ContextError(f"f must be a positive integer, got {f}")
    q = p ** f
    if not isinstance(n, int) or n < 1 or (q - 1) % n:
        raise ContextError(f"cover degree n={n} must divide q - 1 = {q - 1}")
    if n % 4 == 0:
        raise ContextError(f"cover degree n={n} is divisible by 4")
    if depth < 1:
        raise ContextError(f"depth must be at least 1, got {depth}")
    return math.lcm(8, p ** depth, q - 1)


def _divide_monic(dividend: List[int], divisor: Sequence[int]) -> List[int]:
    """Exact quotient of integer polynomials (low degree first) by a monic divisor."""
    remainder = list(dividend)
    shift = len(remainder) - len(divisor)
    quotient = [0] * (shift + 1)
    for position in range(shift, -1, -1):
        lead = remainder[position + len(divisor) - 1]
        quotient[position] = lead
        if lead:
            for index, coefficient in enumerate(divisor):
                remainder[position + index] -= lead * coefficient
    if any(remainder):
        raise ArithmeticError("cyclotomic division left a remainder")
    return quotient


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> Tuple[int, ...]:
    """
    Integer coefficients of Phi_N, lowest degree first.

    Computed by dividing x^N - 1 by Phi_m for every proper divisor m of N.
    """
    if order < 1:
        raise ValueError(f"cyclotomic order must be positive, got {order}")
    poly = [-1] + [0] * (order - 1) + [1]
    for divisor in range(1, order):
        if order % divisor == 0:
            poly = _divide_monic(poly, cyclotomic_polynomial(divisor))
    return tuple(poly)


class _Component(NamedTuple):
    ell: int
    modulus: int      # l^e
    phi: int          # (l - 1) l^(e-1)
    step: int         # l^(e-1)
    idempotent: int   # E = 1 mod l^e, 0 mod N / l^e


class CyclotomicField:
    """
    The field Q(zeta_N) together with its reduction tables.

    Args:
        order: N
        prime: The residue characteristic p, required for sqrt(p) and sqrt(q)
    """

    def __init__(self, order: int, prime: Optional[int] = None):
        if order < 1:
            raise ValueError(f"cyclotomic order must be positive, got {order}")
        if prime is not None and (order % prime or order % 4):
            raise ContextError(f"Q(zeta_{order}) does not contain sqrt({prime})")
        self.order = order
        self.prime = prime
        self.degree = int(totient(order))
        self._components: List[_Component] = []
        for ell, exponent in sorted(factorint(order).items()):
            modulus = ell ** exponent
            rest = order // modulus
            idempotent = (rest * pow(rest, -1, modulus)) % order if rest > 1 else 1
            self._components.append(_Component(
                ell, modulus, (ell - 1) * ell ** (exponent - 1), ell ** (exponent - 1), idempotent))
        self._expansions: Dict[int, Tuple[Tuple[int, int], ...]] = {}
        self._power_rows: List[Tuple[int, ...]] = []
        self._sqrt_prime: Optional["CycNumber"] = None
        self.zero = CycNumber(self, {}, 1)
        self.one = CycNumber(self, {0: 1}, 1)
        logger.debug(f"Built Q(zeta_{order}) of degree {self.degree}")

    def __repr__(self) -> str:
        return f"CyclotomicField(order={self.order}, prime={self.prime})"

    # -- reduction -----------------------------------------------------------------

    def _expand(self, exponent: int) -> Tuple[Tuple[int, int], ...]:
        """zeta^exponent as a signed sum of tensor-basis exponents."""
        cached = self._expansions.get(exponent)
        if cached is not None:
            return cached
        for comp in self._components:
            residue = exponent % comp.modulus
            if residue >= comp.phi:
                # Phi_{l^e}(w) = sum_{j<l} w^{j l^(e-1)} = 0
                base = residue - comp.phi
                collected: Dict[int, int] = {}
                for j in range(comp.ell - 1):
                    shifted = (exponent + (base + j * comp.step - residue) * comp.idempotent) % self.order
                    for target, sign in self._expand(shifted):
                        collected[target] = collected.get(target, 0) - sign
                result = tuple((target, sign) for target, sign in collected.items() if sign)
                break
        else:
            result = ((exponent, 1),)
        self._expansions[exponent] = result
        return result

    def _reduce(self, accumulator: Mapping[int, int]) -> Dict[int, int]:
        reduced: Dict[int, int] = {}
        for exponent, coefficient in accumulator.items():
            if not coefficient:
                continue
            for target, sign in self._expand(exponent % self.order):
                reduced[target] = reduced.get(target, 0) + sign * coefficient
        return reduced

    def is_basis_exponent(self, exponent: int) -> bool:
        return all(exponent % comp.modulus < comp.phi for comp in self._components)

    # -- constructors ----------------------------------------------------------------

    def rational(self, value: Rational) -> "CycNumber":
        value = Fraction(value)
        return CycNumber(self, {0: value.numerator}, value.denominator)

    def root(self, exponent: int) -> "CycNumber":
        """zeta_N^exponent."""
        return CycNumber(self, self._reduce({exponent % self.order: 1}), 1)

    def root_of_order(self, m: int, k: int) -> "CycNumber":
        """zeta_m^k for m dividing N."""
        if self.order % m:
            raise OrderMismatchError(f"zeta_{m} is not in Q(zeta_{self.order})")
        return self.root(k * (self.order // m))

    def from_exponents(self, counts: Mapping[int, Rational]) -> "CycNumber":
        """sum of c * zeta_N^k over a mapping k -> c (exponents taken mod N)."""
        den = 1
        for coefficient in counts.values():
            den = math.lcm(den, Fraction(coefficient).denominator)
        accumulator: Dict[int, int] = {}
        for exponent, coefficient in counts.items():
            scaled = Fraction(coefficient) * den
            key = exponent % self.order
            accumulator[key] = accumulator.get(key, 0) + scaled.numerator
        return CycNumber(self, self._reduce(accumulator), den)

    @property
    def sqrt_prime(self) -> "CycNumber":
        """
        The positive square root of p under zeta_N -> exp(2 pi i / N).

        The quadratic Gauss sum G = sum (t|p) zeta_p^t equals sqrt(p) when
        p = 1 mod 4 and i sqrt(p) when p = 3 mod 4.
        """
        if self.prime is None:
            raise ScalarError("field was created without a residue characteristic")
        if self._sqrt_prime is None:
            p = self.prime
            step = self.order // p
            gauss = self.from_exponents({t * step: int(legendre_symbol(t, p)) for t in range(1, p)})
            if p % 4 == 3:
                gauss = -(gauss * self.root(self.order // 4))
            self._sqrt_prime = gauss
        return self._sqrt_prime

    def sqrt_q(self, f: int) -> "RootScalar":
        """sqrt(q) for q = p^f as an exact scalar."""
        return RootScalar(self, 1, 0, f)

    # -- power basis codec -----------------------------------------------------------------

    def _power_row(self, exponent: int) -> Tuple[int, ...]:
        """Coordinates of x^exponent modulo Phi_N in the power basis."""
        phi = cyclotomic_polynomial(self.order)
        if not self._power_rows:
            self._power_rows.append(tuple([1] + [0] * (self.degree - 1)))
        while len(self._power_rows) <= exponent:
            previous = self._power_rows[-1]
            lead = previous[-1]
            row = [0] + list(previous[:-1])
            if lead:
                for index in range(self.degree):
                    row[index] -= lead * phi[index]
            self._power_rows.append(tuple(row))
        return self._power_rows[exponent]

    def decode(self, text: str) -> "CycNumber":
        """Inverse of CycNumber.encode."""
        try:
            head, body = text.strip().split(":", 1)
            order = int(head)
            body = body.strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise ValueError("missing brackets")
            entries = [Fraction(item) for item in body[1:-1].split(",") if item.strip()]
        except ValueError as exc:
            raise ScalarError(f"malformed cyclotomic encoding {text!r}: {exc}") from exc
        if order != self.order:
            raise OrderMismatchError(f"encoding is for Q(zeta_{order}), field is Q(zeta_{self.order})")
        if len(entries) != self.degree:
            raise ScalarError(f"expected {self.degree} coordinates, got {len(entries)}")
        return self.from_exponents({k: c for k, c in enumerate(entries) if c})


class CycNumber:
    """
    An exact element of Q(zeta_N).

    Stored as integer numerators on tensor-basis exponents over one positive
    common denominator; the representation is canonical, so equality is a
    comparison of the stored data.
    """

    __slots__ = ("field", "_terms", "_den")

    def __init__(self, field: CyclotomicField, terms: Mapping[int, int], den: int = 1):
        cleaned = {k: c for k, c in terms.items() if c}
        if not cleaned:
            den = 1
        else:
            if den < 0:
                cleaned = {k: -c for k, c in cleaned.items()}
                den = -den
            common = den
            for c in cleaned.values():
                common = math.gcd(common, c)
                if common == 1:
                    break
            if common > 1:
                cleaned = {k: c // common for k, c in cleaned.items()}
                den //= common
        self.field = field
        self._terms = cleaned
        self._den = den

    # -- coercion -----------------------------------------------------------------

    def _coerce(self, other) -> "CycNumber":
        if isinstance(other, CycNumber):
            if other.field is not self.field and other.field.order != self.field.order:
                raise OrderMismatchError(
                    f"cannot combine Q(zeta_{self.field.order}) with Q(zeta_{other.field.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    # -- inspection -------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def term_count(self) -> int:
        return len(self._terms)

    def rational_value(self) -> Optional[Fraction]:
        """The value as a Fraction when the element is rational, else None."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and 0 in self._terms:
            return Fraction(self._terms[0], self._den)
        return None

    def root_exponent(self) -> Optional[Tuple[Fraction, int]]:
        """(c, k) when the element is c * zeta^k for a basis exponent k."""
        if len(self._terms) != 1:
            return None
        (exponent, coefficient), = self._terms.items()
        return Fraction(coefficient, self._den), exponent

    # -- arithmetic ---------------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        den = math.lcm(self._den, other._den)
        left, right = den // self._den, den // other._den
        terms = {k: c * left for k, c in self._terms.items()}
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0) + c * right
        return CycNumber(self.field, terms, den)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.field, {k: -c for k, c in self._terms.items()}, self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, value: Rational) -> "CycNumber":
        value = Fraction(value)
        if not value:
            return self.field.zero
        return CycNumber(self.field, {k: c * value.numerator for k, c in self._terms.items()},
                         self._den * value.denominator)

    def shift(self, exponent: int) -> "CycNumber":
        """Multiply by zeta_N^exponent."""
        if not exponent % self.field.order:
            return self
        accumulator: Dict[int, int] = {}
        order = self.field.order
        for k, c in self._terms.items():
            target = (k + exponent) % order
            accumulator[target] = accumulator.get(target, 0) + c
        return CycNumber(self.field, self.field._reduce(accumulator), self._den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return self.field.zero
        if len(other._terms) == 1:
            (k, c), = other._terms.items()
            return self.shift(k).scale(Fraction(c, other._den))
        if len(self._terms) == 1:
            (k, c), = self._terms.items()
            return other.shift(k).scale(Fraction(c, self._den))
        order = self.field.order
        accumulator: Dict[int, int] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                target = (k1 + k2) % order
                accumulator[target] = accumulator.get(target, 0) + c1 * c2
        return CycNumber(self.field, self.field._reduce(accumulator), self._den * other._den)

    __rmul__ = __mul__

    def galois(self, t: int) -> "CycNumber":
        """Apply the automorphism zeta -> zeta^t (t a unit mod N)."""
        order = self.field.order
        if math.gcd(t, order) != 1:
            raise ScalarError(f"{t} is not a unit modulo {order}")
        accumulator: Dict[int, int] = {}
        for k, c in self._terms.items():
            target = (k * t) % order
            accumulator[target] = accumulator.get(target, 0) + c
        return CycNumber(self.field, self.field._reduce(accumulator), self._den)

    def conj(self) -> "CycNumber":
        """Complex conjugation zeta -> zeta^-1."""
        return self.galois(-1)

    def inverse(self) -> "CycNumber":
        """
        Multiplicative inverse.

        The norm is taken one prime-power factor at a time: multiplying by the
        conjugates over Q(zeta_{N / l^e}) pushes the element into that subfield,
        and after the last factor it is rational.
        """
        if self.is_zero:
            raise ZeroInversionError("inversion of zero in Q(zeta_N)")
        single = self.root_exponent()
        if single is not None:
            coefficient, exponent = single
            return self.field.root(-exponent).scale(1 / coefficient)
        order = self.field.order
        cofactor = self.field.one
        current = self
        for comp in self.field._components:
            if all(k % comp.modulus == 0 for k in current._terms):
                continue
            conjugates = self.field.one
            for unit in range(2, comp.modulus):
                if unit % comp.ell == 0:
                    continue
                t = (unit * comp.idempotent + (1 - comp.idempotent)) % order
                conjugates = conjugates * current.galois(t)
            current = current * conjugates
            cofactor = cofactor * conjugates
        norm = current.rational_value()
        if norm is None or norm == 0:
            raise ScalarError("norm computation did not reach Q")
        return cofactor.scale(1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroInversionError("division by zero")
            return self.scale(1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "CycNumber":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- comparison -------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            value = self.rational_value()
            return value is not None and value == other
        if not isinstance(other, CycNumber):
            return NotImplemented
        return (self.field.order == other.field.order and self._den == other._den
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.field.order, self._den, frozenset(self._terms.items())))

    # -- output ---------------------------------------------------------------------

    def power_basis(self) -> List[Fraction]:
        """Coordinates in 1, zeta, ..., zeta^(phi(N)-1) modulo Phi_N."""
        coordinates = [0] * self.field.degree
        for exponent, coefficient in self._terms.items():
            for index, value in enumerate(self.field._power_row(exponent)):
                if value:
                    coordinates[index] += coefficient * value
        return [Fraction(c, self._den) for c in coordinates]

    def encode(self) -> str:
        """Canonical text form "N:[c0,c1,...]" with every c written as num/den."""
        body = ",".join(f"{c.numerator}/{c.denominator}" for c in self.power_basis())
        return f"{self.field.order}:[{body}]"

    def approx(self) -> complex:
        """Floating-point value under zeta_N -> exp(2 pi i / N); display only."""
        total = 0j
        for exponent, coefficient in self._terms.items():
            angle = 2 * math.pi * exponent / self.field.order
            total += coefficient * complex(math.cos(angle), math.sin(angle))
        return total / self._den

    def pretty(self) -> str:
        value = self.rational_value()
        if value is not None:
            return str(value)
        parts = []
        for exponent in sorted(self._terms):
            coefficient = Fraction(self._terms[exponent], self._den)
            parts.append(f"{coefficient}*z^{exponent}")
        return "(" + " + ".join(parts) + ")"

    def __repr__(self) -> str:
        return f"CycNumber(N={self.field.order}, {self.pretty()})"


def _rational_root(value: Fraction, degree: int) -> Optional[Fraction]:
    if value <= 0:
        return None
    numerator, exact_num = integer_nthroot(value.numerator, degree)
    denominator, exact_den = integer_nthroot(value.denominator, degree)
    if exact_num and exact_den:
        return Fraction(int(numerator), int(denominator))
    return None


class RootScalar:
    """
    The scalar ratio * zeta_N^exponent * sqrt(p)^half with ratio > 0 rational.

    These form a multiplicative group whose inverses and roots are computed
    without touching the field; every root of an L-factor binomial is one.
    """

    __slots__ = ("field", "ratio", "exponent", "half", "_value")

    def __init__(self, field: CyclotomicField, ratio: Rational = 1, exponent: int = 0, half: int = 0):
        ratio = Fraction(ratio)
        if ratio == 0:
            raise ZeroInversionError("a RootScalar cannot be zero")
        if ratio < 0:
            ratio = -ratio
            exponent += field.order // 2
        if half:
            if field.prime is None:
                raise ScalarError("sqrt(p) needs a field created with a prime")
            ratio *= Fraction(field.prime) ** (half // 2)
            half %= 2
        self.field = field
        self.ratio = ratio
        self.exponent = exponent % field.order
        self.half = half
        self._value: Optional[CycNumber] = None

    @property
    def key(self) -> Tuple[Fraction, int, int]:
        return (self.ratio, self.exponent, self.half)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootScalar):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other: "RootScalar") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        root = f"*sqrt({self.field.prime})" if self.half else ""
        return f"RootScalar({self.ratio}*z^{self.exponent}{root})"

    @property
    def value(self) -> CycNumber:
        if self._value is None:
            self._value = self.scale(self.field.one)
        return self._value

    def scale(self, number: CycNumber) -> CycNumber:
        """number * self."""
        result = number.shift(self.exponent).scale(self.ratio)
        if self.half:
            result = result * self.field.sqrt_prime
        return result

    def __mul__(self, other: "RootScalar") -> "RootScalar":
        return RootScalar(self.field, self.ratio * other.ratio, self.exponent + other.exponent,
                          self.half + other.half)

    def __neg__(self) -> "RootScalar":
        return RootScalar(self.field, self.ratio, self.exponent + self.field.order // 2, self.half)

    def inverse(self) -> "RootScalar":
        return RootScalar(self.field, 1 / self.ratio, -self.exponent, -self.half)

    def __pow__(self, power: int) -> "RootScalar":
        if power < 0:
            return self.inverse() ** (-power)
        return RootScalar(self.field, self.ratio ** power, self.exponent * power, self.half * power)

    def nth_root(self, ell: int) -> Optional["RootScalar"]:
        """Some RootScalar whose ell-th power is self (ell prime), if one exists."""
        order = self.field.order
        common = math.gcd(ell, order)
        if self.exponent % common:
            return None
        reduced_order = order // common
        root_exponent = ((self.exponent // common) * pow(ell // common, -1, reduced_order)) % reduced_order
        if ell == 2:
            if self.half:
                return None
            plain = _rational_root(self.ratio, 2)
            if plain is not None:
                return RootScalar(self.field, plain, root_exponent, 0)
            if self.field.prime is not None:
                shifted = _rational_root(self.ratio / self.field.prime, 2)
                if shifted is not None:
                    return RootScalar(self.field, shifted, root_exponent, 1)
            return None
        base = self.ratio / Fraction(self.field.prime) ** ((ell - 1) // 2) if self.half else self.ratio
        rational = _rational_root(base, ell)
        if rational is None:
            return None
        return RootScalar(self.field, rational, root_exponent, self.half)


def root_of_unity(field: CyclotomicField, k: int) -> CycNumber:
    """zeta_N^(k mod N)."""
    return field.root(k)


def sqrt_q(field: CyclotomicField, f: int) -> CycNumber:
    """
    The positive square root of q = p^f inside Q(zeta_N).

    For f even this is the integer p^(f/2); for f odd it is p^((f-1)/2) sqrt(p).
    """
    return field.sqrt_q(f).value
