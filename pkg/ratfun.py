"""
Rational Functions in X = q^-s

RatFun is the value type of every local factor. A value is held as

    numerator / (X^k * prod(X^e - gamma) * R(X))

where each binomial factor is an "atom" whose root gamma is a RootScalar, split
into factors as far as gamma has RootScalar roots, and R is a monic remainder
polynomial (usually 1). The numerator is either kept factored the same way
(scalar * X^j * prod of atoms) or as an expanded polynomial. Atoms make the
common denominators of sums and the cancellations after products a multiset
computation; the monic Euclidean gcd is only needed when R is non-trivial.

Numerator and denominator are coprime and the denominator is monic, so the
expanded pair is canonical.
"""

import re
from collections import Counter
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import primefactors

from exact_scalars import CycNumber, CyclotomicField, RootScalar, ScalarError
from logger_config import setup_logger

logger = setup_logger(__name__)

Poly = Tuple[CycNumber, ...]
Scalar = Union[int, Fraction, CycNumber, RootScalar]

_CYC_PATTERN = re.compile(r"\d+:\[[^\]]*\]")


class RatFunError(Exception):
    """Base class for rational function failures."""


class PoleError(RatFunError, ZeroDivisionError):
    """Raised when a rational function is evaluated at one of its poles."""


class ZeroFunctionError(RatFunError, ZeroDivisionError):
    """Raised when the zero function is inverted or has no order."""


class Atom(NamedTuple):
    """The monic binomial X^degree - root."""

    degree: int
    root: RootScalar

    def sort_key(self):
        return (self.degree, self.root.key)


# -- polynomial helpers (coefficients lowest degree first, no trailing zeros) ---------


def _trim(coefficients: Iterable[CycNumber]) -> Poly:
    items = list(coefficients)
    while items and items[-1].is_zero:
        items.pop()
    return tuple(items)


def poly_add(left: Poly, right: Poly) -> Poly:
    if len(left) < len(right):
        left, right = right, left
    return _trim([c + right[i] if i < len(right) else c for i, c in enumerate(left)])


def poly_scale(poly: Poly, scalar: Scalar) -> Poly:
    if isinstance(scalar, RootScalar):
        return tuple(scalar.scale(c) for c in poly)
    return _trim(c * scalar for c in poly)


def poly_mul(left: Poly, right: Poly) -> Poly:
    if not left or not right:
        return ()
    field = left[0].field
    result = [field.zero] * (len(left) + len(right) - 1)
    for i, a in enumerate(left):
        if a.is_zero:
            continue
        for j, b in enumerate(right):
            if not b.is_zero:
                result[i + j] = result[i + j] + a * b
    return _trim(result)


def poly_shift(poly: Poly, power: int) -> Poly:
    """Multiply by X^power."""
    if not poly or power == 0:
        return poly
    return tuple([poly[0].field.zero] * power) + poly


def times_binomial(poly: Poly, atom: Atom) -> Poly:
    """poly * (X^e - gamma)."""
    if not poly:
        return poly
    shifted = list(poly_shift(poly, atom.degree))
    for index, coefficient in enumerate(poly):
        shifted[index] = shifted[index] - atom.root.scale(coefficient)
    return _trim(shifted)


def divide_binomial(poly: Poly, atom: Atom) -> Optional[Poly]:
    """Exact quotient poly / (X^e - gamma), or None when it leaves a remainder."""
    degree = atom.degree
    if not poly:
        return poly
    if len(poly) <= degree:
        return None
    work = list(poly)
    quotient = [work[0].field.zero] * (len(work) - degree)
    for top in range(len(work) - 1, degree - 1, -1):
        lead = work[top]
        if lead.is_zero:
            continue
        quotient[top - degree] = lead
        work[top - degree] = work[top - degree] + atom.root.scale(lead)
        work[top] = lead.field.zero
    if any(not c.is_zero for c in work[:degree]):
        return None
    return _trim(quotient)


def poly_divmod(dividend: Poly, divisor: Poly) -> Tuple[Poly, Poly]:
    if not divisor:
        raise ZeroFunctionError("polynomial division by zero")
    if len(dividend) < len(divisor):
        return (), dividend
    field = divisor[0].field
    lead_inverse = divisor[-1].inverse() if divisor[-1] != 1 else field.one
    work = list(dividend)
    quotient = [field.zero] * (len(work) - len(divisor) + 1)
    for top in range(len(work) - 1, len(divisor) - 2, -1):
        if work[top].is_zero:
            continue
        factor = work[top] * lead_inverse
        position = top - len(divisor) + 1
        quotient[position] = factor
        for index, coefficient in enumerate(divisor):
            work[position + index] = work[position + index] - factor * coefficient
    return _trim(quotient), _trim(work[:len(divisor) - 1])


def poly_monic(poly: Poly) -> Tuple[Poly, CycNumber]:
    """(monic poly, leading coefficient)."""
    lead = poly[-1]
    if lead == 1:
        return poly, lead
    inverse = lead.inverse()
    return tuple(c * inverse for c in poly[:-1]) + (lead.field.one,), lead


def poly_gcd(left: Poly, right: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm over Q(zeta_N)."""
    if not left:
        return poly_monic(right)[0] if right else ()
    a, b = poly_monic(left)[0], right
    while b:
        b = poly_monic(b)[0]
        a, b = b, poly_divmod(a, b)[1]
    return a


def poly_eval(poly: Poly, point: CycNumber) -> CycNumber:
    if not poly:
        return point.field.zero
    value = poly[-1]
    for coefficient in reversed(poly[:-1]):
        value = value * point + coefficient
    return value


def poly_root_multiplicity(poly: Poly, point: CycNumber) -> Tuple[int, Poly]:
    """Multiplicity of the root point, and the poly with those roots removed."""
    count = 0
    while poly:
        quotient = [poly[0].field.zero] * (len(poly) - 1)
        carry = poly[-1]
        for index in range(len(poly) - 2, -1, -1):
            quotient[index] = carry
            carry = poly[index] + carry * point
        if not carry.is_zero:
            break
        poly = _trim(quotient)
        count += 1
    return count, poly


# -- atoms ----------------------------------------------------------------------------


def split_binomial(degree: int, root: RootScalar) -> List[Atom]:
    """
    Factor X^degree - root into binomials.

    For a prime l dividing degree and N, X^(e) - delta^l is the product of the
    X^(e/l) - zeta_l^i delta, i < l.
    """
    field = root.field
    for ell in primefactors(degree):
        if field.order % ell:
            continue
        delta = root.nth_root(ell)
        if delta is None:
            continue
        step = field.order // ell
        atoms: List[Atom] = []
        for i in range(ell):
            atoms.extend(split_binomial(degree // ell, RootScalar(field, delta.ratio, delta.exponent + i * step,
                                                                   delta.half)))
        return atoms
    return [Atom(degree, root)]


def _as_root_scalar(field: CyclotomicField, value) -> RootScalar:
    if isinstance(value, RootScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return RootScalar(field, Fraction(value))
    if isinstance(value, CycNumber):
        single = value.root_exponent()
        if single is not None:
            coefficient, exponent = single
            return RootScalar(field, coefficient, exponent)
    raise RatFunError(f"substitution constant {value!r} is not a root of unity times a power of sqrt(p)")


def _substitute_atom(atom: Atom, c: RootScalar, e: int) -> Tuple[RootScalar, int, List[Atom]]:
    """Rewrite (cX^e)^E - gamma as factor * X^shift * prod(atoms)."""
    if e > 0:
        power = c ** atom.degree
        return power, 0, split_binomial(e * atom.degree, atom.root * power.inverse())
    m = -e
    return -atom.root, -m * atom.degree, split_binomial(m * atom.degree, (c ** atom.degree) * atom.root.inverse())


def _substitute_poly(poly: Poly, c: RootScalar, e: int) -> Tuple[Poly, int]:
    """P(cX^e) as X^shift * poly."""
    if not poly:
        return poly, 0
    field = poly[0].field
    top = len(poly) - 1
    width = abs(e) * top + 1
    result = [field.zero] * width
    power = RootScalar(field)
    for k, coefficient in enumerate(poly):
        position = e * k if e > 0 else -e * (top - k)
        result[position] = power.scale(coefficient)
        power = power * c
    return _trim(result), (0 if e > 0 else e * top)


# -- rational functions ----------------------------------------------------------------


class RatFun:
    """
    An exact rational function of X = q^-s over Q(zeta_N).

    Use the class constructors (constant, monomial, binomial, from_polys) rather
    than __init__, which trusts its arguments to be reduced.
    """

    __slots__ = ("field", "_factored", "_num", "_dx", "_atoms", "_rest", "_den")

    def __init__(self, field: CyclotomicField,
                 factored: Optional[Tuple[CycNumber, int, Dict[Atom, int]]] = None,
                 num: Optional[Poly] = None, dx: int = 0,
                 atoms: Optional[Dict[Atom, int]] = None, rest: Poly = ()):
        self.field = field
        if factored is not None and factored[0].is_zero:
            factored, num = None, ()
        if factored is not None:
            scalar, power, top = factored
            factored = (scalar, power, Counter({a: m for a, m in top.items() if m > 0}))
        self._factored = factored
        self._num = num
        self._dx = dx
        self._atoms = Counter({a: m for a, m in (atoms or {}).items() if m > 0})
        self._rest = rest if len(rest) > 1 else ()
        self._den: Optional[Poly] = None
        if self._factored is None and self._num is None:
            self._num = ()
        if self.is_zero:
            self._dx, self._atoms, self._rest = 0, Counter(), ()

    # -- constructors ---------------------------------------------------------------------

    @classmethod
    def constant(cls, field: CyclotomicField, value: Scalar) -> "RatFun":
        return cls.monomial(field, value, 0)

    @classmethod
    def zero(cls, field: CyclotomicField) -> "RatFun":
        return cls(field, num=())

    @classmethod
    def one(cls, field: CyclotomicField) -> "RatFun":
        return cls(field, factored=(field.one, 0, {}))

    @classmethod
    def monomial(cls, field: CyclotomicField, value: Scalar, power: int) -> "RatFun":
        """value * X^power for any integer power."""
        scalar = _to_number(field, value)
        if power >= 0:
            return cls(field, factored=(scalar, power, {}))
        return cls(field, factored=(scalar, 0, {}), dx=-power)

    @classmethod
    def binomial(cls, field: CyclotomicField, beta: RootScalar, degree: int = 1) -> "RatFun":
        """1 - beta X^degree."""
        atoms = Counter(split_binomial(degree, beta.inverse()))
        return cls(field, factored=((-beta).value, 0, atoms))

    @classmethod
    def from_polys(cls, field: CyclotomicField, numerator: Sequence[Scalar],
                   denominator: Sequence[Scalar] = (1,)) -> "RatFun":
        """Reduce numerator/denominator given as coefficient lists (lowest degree first)."""
        num = _trim(_to_number(field, c) for c in numerator)
        den = _trim(_to_number(field, c) for c in denominator)
        if not den:
            raise ZeroFunctionError("denominator is the zero polynomial")
        if not num:
            return cls.zero(field)
        shift = 0
        while den[shift].is_zero:
            shift += 1
        den = den[shift:]
        den, lead = poly_monic(den)
        if lead != 1:
            num = poly_scale(num, lead.inverse())
        return cls._reduced(field, num, shift, Counter(), den)

    @classmethod
    def _reduced(cls, field: CyclotomicField, num: Poly, dx: int, atoms: Counter, rest: Poly) -> "RatFun":
        """Cancel every common factor of num against X^dx * atoms * rest."""
        num = _trim(num)
        if not num:
            return cls.zero(field)
        while dx and num[0].is_zero:
            num, dx = num[1:], dx - 1
        atoms = Counter(atoms)
        for atom in list(atoms):
            while atoms[atom] > 0:
                quotient = divide_binomial(num, atom)
                if quotient is None:
                    break
                num = quotient
                atoms[atom] -= 1
        if len(rest) > 1:
            common = poly_gcd(num, rest)
            if len(common) > 1:
                num = poly_divmod(num, common)[0]
                rest = poly_divmod(rest, common)[0]
        return cls(field, num=num, dx=dx, atoms=atoms, rest=rest)

    # -- structure --------------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self._factored is None and not self._num

    @property
    def numerator(self) -> Poly:
        if self._num is None:
            scalar, power, atoms = self._factored
            poly: Poly = (scalar,)
            for atom in sorted(atoms.elements(), key=Atom.sort_key):
                poly = times_binomial(poly, atom)
            self._num = poly_shift(poly, power)
        return self._num

    @property
    def denominator(self) -> Poly:
        if self._den is None:
            poly: Poly = self._rest or (self.field.one,)
            for atom in sorted(self._atoms.elements(), key=Atom.sort_key):
                poly = times_binomial(poly, atom)
            self._den = poly_shift(poly, self._dx)
        return self._den

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            if other.field.order != self.field.order:
                raise RatFunError(f"cannot combine Q(zeta_{self.field.order}) and Q(zeta_{other.field.order})")
            return other
        if isinstance(other, (int, Fraction, CycNumber, RootScalar)):
            return RatFun.constant(self.field, other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------------------------

    def scale(self, value: Scalar) -> "RatFun":
        if isinstance(value, RootScalar):
            if self._factored is not None:
                scalar, power, atoms = self._factored
                return RatFun(self.field, factored=(value.scale(scalar), power, atoms),
                              dx=self._dx, atoms=self._atoms, rest=self._rest)
            return RatFun(self.field, num=poly_scale(self.numerator, value), dx=self._dx,
                          atoms=self._atoms, rest=self._rest)
        value = _to_number(self.field, value)
        if value.is_zero:
            return RatFun.zero(self.field)
        if self._factored is not None:
            scalar, power, atoms = self._factored
            return RatFun(self.field, factored=(scalar * value, power, atoms),
                          dx=self._dx, atoms=self._atoms, rest=self._rest)
        return RatFun(self.field, num=poly_scale(self.numerator, value), dx=self._dx,
                      atoms=self._atoms, rest=self._rest)

    def __neg__(self) -> "RatFun":
        return self.scale(-1)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        dx = max(self._dx, other._dx)
        atoms = self._atoms | other._atoms
        if self._rest and other._rest and self._rest != other._rest:
            common = poly_gcd(self._rest, other._rest)
            rest = poly_mul(self._rest, poly_divmod(other._rest, common)[0])
        else:
            rest = self._rest or other._rest
        total: Poly = ()
        for term in (self, other):
            part = poly_shift(term.numerator, dx - term._dx)
            for atom, count in (atoms - term._atoms).items():
                for _ in range(count):
                    part = times_binomial(part, atom)
            if rest and rest != term._rest:
                cofactor = poly_divmod(rest, term._rest)[0] if term._rest else rest
                part = poly_mul(part, cofactor)
            total = poly_add(total, part)
        return RatFun._reduced(self.field, total, dx, atoms, rest)

    __radd__ = __add__

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

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber, RootScalar)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return RatFun.zero(self.field)
        dx = self._dx + other._dx
        atoms = self._atoms + other._atoms
        if self._rest and other._rest:
            rest = poly_mul(self._rest, other._rest)
        else:
            rest = self._rest or other._rest
        if self._factored is None or other._factored is None:
            return RatFun._reduced(self.field, poly_mul(self.numerator, other.numerator), dx, atoms, rest)
        scalar = self._factored[0] * other._factored[0]
        power = self._factored[1] + other._factored[1]
        top = Counter(self._factored[2]) + Counter(other._factored[2])
        shared = min(power, dx)
        power, dx = power - shared, dx - shared
        common = top & atoms
        top, atoms = top - common, atoms - common
        if rest:
            for atom in list(top):
                while top[atom] > 0:
                    quotient = divide_binomial(rest, atom)
                    if quotient is None:
                        break
                    rest = quotient
                    top[atom] -= 1
        return RatFun(self.field, factored=(scalar, power, +top), dx=dx, atoms=atoms, rest=rest)

    __rmul__ = __mul__

    def reciprocal(self) -> "RatFun":
        if self.is_zero:
            raise ZeroFunctionError("the zero function has no reciprocal")
        if self._factored is not None:
            scalar, power, atoms = self._factored
            inverse = scalar.inverse()
            if not self._rest:
                return RatFun(self.field, factored=(inverse, self._dx, self._atoms), dx=power, atoms=atoms)
            return RatFun(self.field, num=poly_scale(self.denominator, inverse), dx=power, atoms=atoms)
        num = self.numerator
        shift = 0
        while num[shift].is_zero:
            shift += 1
        monic, lead = poly_monic(num[shift:])
        return RatFun(self.field, num=poly_scale(self.denominator, lead.inverse()), dx=shift, rest=monic)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroFunctionError("division by zero")
            return self.scale(1 / Fraction(other))
        if isinstance(other, RootScalar):
            return self.scale(other.inverse())
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.reciprocal()

    def __pow__(self, exponent: int) -> "RatFun":
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = RatFun.one(self.field)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- substitution -------------------------------------------------------------------------

    def substitute(self, c: Scalar, e: int) -> "RatFun":
        """
        The function X -> f(c * X^e).

        Args:
            c: A root of unity times a rational times a power of sqrt(p)
            e: Nonzero integer; negative values are Laurent substitutions

        Returns:
            The substituted function in canonical form
        """
        if e == 0:
            raise RatFunError("substitution exponent must be nonzero")
        if self.is_zero:
            return self
        c = _as_root_scalar(self.field, c)
        factor = RootScalar(self.field)
        shift = 0

        # numerator
        if self._factored is not None:
            scalar, power, atoms = self._factored
            factor = factor * c ** power
            shift += e * power
            top: Counter = Counter()
            for atom, count in atoms.items():
                for _ in range(count):
                    piece, moved, parts = _substitute_atom(atom, c, e)
                    factor = factor * piece
                    shift += moved
                    top.update(parts)
            num_poly: Optional[Poly] = None
        else:
            scalar = self.field.one
            num_poly, moved = _substitute_poly(self.numerator, c, e)
            shift += moved
            top = Counter()

        # denominator
        factor = factor * (c ** self._dx).inverse()
        shift -= e * self._dx
        bottom: Counter = Counter()
        for atom, count in self._atoms.items():
            for _ in range(count):
                piece, moved, parts = _substitute_atom(atom, c, e)
                factor = factor * piece.inverse()
                shift -= moved
                bottom.update(parts)
        rest: Poly = ()
        if self._rest:
            substituted, moved = _substitute_poly(self._rest, c, e)
            shift -= moved
            rest, lead = poly_monic(substituted)
            scalar = scalar * lead.inverse()

        power, dx = (shift, 0) if shift >= 0 else (0, -shift)
        if num_poly is None:
            return RatFun(self.field, factored=(factor.scale(scalar), power, top), dx=dx, atoms=bottom, rest=rest)
        num_poly = poly_shift(poly_scale(poly_scale(num_poly, scalar), factor), power)
        return RatFun(self.field, num=num_poly, dx=dx, atoms=bottom, rest=rest)

    # -- evaluation -------------------------------------------------------------------------

    def evaluate(self, point: Scalar) -> CycNumber:
        """The exact value at X = point."""
        point = _to_number(self.field, point)
        if self.is_zero:
            return self.field.zero
        zeros, num_rest = poly_root_multiplicity(self.numerator, point)
        poles, den_rest = poly_root_multiplicity(self.denominator, point)
        if poles > zeros:
            raise PoleError(f"X = {point.pretty()} is a pole of order {poles - zeros}")
        if zeros > poles:
            return self.field.zero
        return poly_eval(num_rest, point) / poly_eval(den_rest, point)

    def order_at(self, point: Scalar) -> int:
        """Order of vanishing at X = point; poles count negatively."""
        if self.is_zero:
            raise ZeroFunctionError("the zero function has no order")
        point = _to_number(self.field, point)
        zeros, _ = poly_root_multiplicity(self.numerator, point)
        poles, _ = poly_root_multiplicity(self.denominator, point)
        return zeros - poles

    # -- comparison and output ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CycNumber, RootScalar)):
            other = RatFun.constant(self.field, other)
        if not isinstance(other, RatFun):
            return NotImplemented
        if self.numerator == other.numerator and self.denominator == other.denominator:
            return True
        return poly_mul(self.numerator, other.denominator) == poly_mul(other.numerator, self.denominator)

    __hash__ = None

    @property
    def is_constant(self) -> bool:
        return len(self.numerator) <= 1 and len(self.denominator) == 1

    def constant_value(self) -> Optional[CycNumber]:
        if self.is_zero:
            return self.field.zero
        return self.numerator[0] if self.is_constant else None

    def encode(self) -> str:
        """Text form "([c0,...])/([d0,...])" with exact coefficient encodings."""
        top = ",".join(c.encode() for c in self.numerator)
        bottom = ",".join(c.encode() for c in self.denominator)
        return f"([{top}])/([{bottom}])"

    @classmethod
    def decode(cls, field: CyclotomicField, text: str) -> "RatFun":
        """Inverse of encode."""
        parts = text.strip().split("])/([")
        if len(parts) != 2 or not parts[0].startswith("([") or not parts[1].endswith("])"):
            raise RatFunError(f"malformed rational function encoding {text[:40]!r}")
        try:
            num = [field.decode(item) for item in _CYC_PATTERN.findall(parts[0])]
            den = [field.decode(item) for item in _CYC_PATTERN.findall(parts[1])]
        except ScalarError as exc:
            raise RatFunError(f"bad coefficient in {text[:40]!r}: {exc}") from exc
        if not den:
            raise RatFunError("encoded denominator is empty")
        return cls.from_polys(field, num, den)

    def approx_at(self, x: complex) -> complex:
        """Floating-point value at a complex X; display only."""
        top = sum(c.approx() * x ** k for k, c in enumerate(self.numerator))
        bottom = sum(c.approx() * x ** k for k, c in enumerate(self.denominator))
        return top / bottom

    @staticmethod
    def _poly_text(poly: Poly) -> str:
        if not poly:
            return "0"
        terms = []
        for k, c in enumerate(poly):
            if c.is_zero:
                continue
            terms.append(c.pretty() if k == 0 else f"{c.pretty()}*X^{k}")
        return " + ".join(terms)

    def pretty(self) -> str:
        if self.denominator == (self.field.one,):
            return self._poly_text(self.numerator)
        return f"({self._poly_text(self.numerator)}) / ({self._poly_text(self.denominator)})"

    def __repr__(self) -> str:
        return f"RatFun({self.pretty()})"


def _to_number(field: CyclotomicField, value: Scalar) -> CycNumber:
    if isinstance(value, CycNumber):
        return value
    if isinstance(value, RootScalar):
        return value.value
    if isinstance(value, (int, Fraction)):
        return field.rational(value)
    raise RatFunError(f"cannot use {type(value).__name__} as a coefficient")
