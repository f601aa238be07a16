"""
Tame Field Context

Residue-field arithmetic for F_q, discrete logarithms, the classes of F* modulo
1 + P, and the tame Hilbert symbol. A LocalContext bundles the residue field with
the cover degree and is the object every computation receives.
"""

from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import GF, Poly, primefactors
from sympy.abc import y as _residue_variable

from exact_scalars import ContextError, CycNumber, CyclotomicField, RootScalar, make_order
from logger_config import setup_logger

logger = setup_logger(__name__)


class ResidueFieldError(ValueError):
    """Raised for invalid residue-field input (zero where a unit is needed, bad modulus)."""


@dataclass(frozen=True)
class FStarClass:
    """
    The class of x = varpi^val * [g]^unit_dlog in F* / (1 + P).

    unit_dlog is the discrete log of the residue of the unit part.
    """

    val: int
    unit_dlog: int
    unit_order: int

    def __post_init__(self):
        object.__setattr__(self, "unit_dlog", self.unit_dlog % self.unit_order)

    def __mul__(self, other: "FStarClass") -> "FStarClass":
        return FStarClass(self.val + other.val, self.unit_dlog + other.unit_dlog, self.unit_order)

    def inverse(self) -> "FStarClass":
        return FStarClass(-self.val, -self.unit_dlog, self.unit_order)

    def __truediv__(self, other: "FStarClass") -> "FStarClass":
        return self * other.inverse()

    def __pow__(self, power: int) -> "FStarClass":
        return FStarClass(self.val * power, self.unit_dlog * power, self.unit_order)

    @property
    def is_unit(self) -> bool:
        return self.val == 0

    def reduced(self, m: int) -> Tuple[int, int]:
        """Coordinates of the class in F* / F*^m (valid when m divides q - 1)."""
        return (self.val % m, self.unit_dlog % m)

    def __str__(self) -> str:
        return f"w^{self.val}*u^{self.unit_dlog}"


@dataclass(frozen=True)
class CoverParams:
    """Cover degree n together with d and the parity of n."""

    n: int
    d: int
    parity: str

    @classmethod
    def from_degree(cls, n: int, q: int) -> "CoverParams":
        if n < 1 or (q - 1) % n:
            raise ContextError(f"cover degree n={n} must divide q - 1 = {q - 1}")
        if n % 4 == 0:
            raise ContextError(f"cover degree n={n} is divisible by 4")
        if n % 2:
            return cls(n, n, "odd")
        return cls(n, n // 2, "even")

    @property
    def is_even(self) -> bool:
        return self.parity == "even"


def _smallest_irreducible(p: int, f: int) -> Tuple[int, ...]:
    """Monic irreducible of degree f over F_p with the smallest code (lowest degree first)."""
    domain = GF(p)
    for code in range(p ** f):
        coefficients = [(code // p ** i) % p for i in range(f)] + [1]
        if Poly(list(reversed(coefficients)), _residue_variable, domain=domain).is_irreducible:
            return tuple(coefficients)
    raise ResidueFieldError(f"no irreducible polynomial of degree {f} over F_{p}")


class TameField:
    """
    The residue field F_q of a p-adic field, with the tables needed for tame computations.

    Elements of F_q are integer codes: the base-p digits of a code are the
    coefficients (lowest first) of a polynomial modulo the defining modulus.

    Args:
        p: Odd residue characteristic
        f: Residue degree
        modulus: Monic irreducible of degree f over F_p, lowest degree first
        depth: Power of p whose roots of unity the scalar field must contain
    """

    def __init__(self, p: int, f: int = 1, modulus: Optional[Sequence[int]] = None, depth: int = 1):
        order = make_order(p, f, 1, depth)
        self.p = p
        self.f = f
        self.q = p ** f
        self.depth = depth
        self.modulus = self._check_modulus(modulus)
        self.field = CyclotomicField(order, prime=p)
        self.order = order
        self._exp: List[int] = []
        self._dlog: Dict[int, int] = {}
        self.generator = self._find_generator()
        logger.debug(f"Residue field F_{self.q}: modulus={self.modulus}, generator={self.generator}, N={order}")

    def __repr__(self) -> str:
        return f"TameField(p={self.p}, f={self.f}, depth={self.depth})"

    def _check_modulus(self, modulus: Optional[Sequence[int]]) -> Tuple[int, ...]:
        if self.f == 1:
            return (0, 1)
        if modulus is None:
            return _smallest_irreducible(self.p, self.f)
        coefficients = tuple(int(c) % self.p for c in modulus)
        if len(coefficients) != self.f + 1 or coefficients[-1] != 1:
            raise ResidueFieldError(f"modulus must be monic of degree {self.f}, got {list(modulus)}")
        if not Poly(list(reversed(coefficients)), _residue_variable, domain=GF(self.p)).is_irreducible:
            raise ResidueFieldError(f"modulus {list(modulus)} is reducible over F_{self.p}")
        return coefficients

    # -- raw code arithmetic ----------------------------------------------------------------------

    def _digits(self, code: int) -> List[int]:
        return [(code // self.p ** i) % self.p for i in range(self.f)]

    def _code(self, digits: Sequence[int]) -> int:
        return sum((d % self.p) * self.p ** i for i, d in enumerate(digits))

    def _raw_mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a * b) % self.p
        left, right = self._digits(a), self._digits(b)
        product = [0] * (2 * self.f - 1)
        for i, x in enumerate(left):
            for j, z in enumerate(right):
                product[i + j] += x * z
        for top in range(len(product) - 1, self.f - 1, -1):
            lead = product[top] % self.p
            if lead:
                for i, c in enumerate(self.modulus):
                    product[top - self.f + i] -= lead * c
        return self._code(product[:self.f])

    def _find_generator(self) -> int:
        unit_count = self.q - 1
        for candidate in range(2, self.q):
            # g generates F_q^* iff g^((q-1)/l) != 1 for every prime l | q - 1
            if any(self._raw_power(candidate, unit_count // ell) == 1 for ell in primefactors(unit_count)):
                continue
            powers = [1]
            for _ in range(unit_count - 1):
                powers.append(self._raw_mul(powers[-1], candidate))
            self._exp = powers
            self._dlog = {value: index for index, value in enumerate(powers)}
            return candidate
        raise ResidueFieldError(f"no generator found for F_{self.q}")

    def _raw_power(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._raw_mul(result, base)
            base = self._raw_mul(base, base)
            k >>= 1
        return result

    # -- field operations --------------------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def add(self, a: int, b: int) -> int:
        return self._code([x + z for x, z in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        return self._code([-x for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._dlog[a] + self._dlog[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        return self._exp[(-self.dlog(a)) % (self.q - 1)]

    def power(self, a: int, k: int) -> int:
        if a == 0:
            if k <= 0:
                raise ResidueFieldError("zero raised to a non-positive power")
            return 0
        return self._exp[(self._dlog[a] * k) % (self.q - 1)]

    def from_rational(self, value: int) -> int:
        """The image of an integer in F_p inside F_q."""
        return value % self.p

    def trace(self, a: int) -> int:
        """Absolute trace Tr_{F_q/F_p}(a) as an integer in [0, p)."""
        if a == 0:
            return 0
        total = 0
        for i in range(self.f):
            total = self.add(total, self.power(a, self.p ** i))
        if total >= self.p:
            raise ResidueFieldError(f"trace of {a} left F_{self.p}")
        return total

    def dlog(self, t: int) -> int:
        """Discrete log of t to the base of the fixed generator."""
        if t == 0:
            raise ResidueFieldError("discrete log of zero")
        try:
            return self._dlog[t]
        except KeyError:
            raise ResidueFieldError(f"{t} is not an element of F_{self.q}") from None

    def exp(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    def iota(self, t: int) -> CycNumber:
        """Teichmuller lift: zeta_{q-1}^dlog(t) in Q(zeta_N)."""
        return self.field.root(self.dlog(t) * (self.order // (self.q - 1)))

    # -- F* classes --------------------------------------------------------------------------

    def unit_class(self, t: int) -> FStarClass:
        """Class of the Teichmuller lift of t."""
        return FStarClass(0, self.dlog(t), self.q - 1)

    def make_class(self, val: int = 0, unit_dlog: int = 0) -> FStarClass:
        return FStarClass(val, unit_dlog, self.q - 1)

    @property
    def one_class(self) -> FStarClass:
        return self.make_class(0, 0)

    @property
    def uniformizer(self) -> FStarClass:
        return self.make_class(1, 0)

    @property
    def generator_class(self) -> FStarClass:
        return self.make_class(0, 1)

    @property
    def minus_one(self) -> FStarClass:
        return self.make_class(0, (self.q - 1) // 2)

    def hilbert_exponent(self, m: int, x: FStarClass, y: FStarClass) -> int:
        """
        The exponent k with (x, y)_m = zeta_m^k.

        The tame symbol is (-1)^(v(x)v(y)) xbar^v(y) ybar^(-v(x)) in F_q^*, raised
        to the power (q - 1) / m.
        """
        if (self.q - 1) % m:
            raise ResidueFieldError(f"m={m} does not divide q - 1 = {self.q - 1}")
        half = (self.q - 1) // 2
        tame_log = x.val * y.val * half + x.unit_dlog * y.val - y.unit_dlog * x.val
        return tame_log % m

    def hilbert_symbol(self, m: int, x: FStarClass, y: FStarClass) -> CycNumber:
        """(x, y)_m as an m-th root of unity in Q(zeta_N)."""
        return self.field.root(self.hilbert_exponent(m, x, y) * (self.order // m))

    def class_group(self, m: int) -> List[FStarClass]:
        """Representatives varpi^i u^j, 0 <= i, j < m, of F* / F*^m."""
        if (self.q - 1) % m:
            raise ResidueFieldError(f"m={m} does not divide q - 1 = {self.q - 1}")
        return [self.make_class(i, j) for i in range(m) for j in range(m)]


@dataclass(frozen=True, eq=False)
class LocalContext:
    """A residue field together with the cover it is used for."""

    tame: TameField
    cover: CoverParams
    cache: dict = dataclass_field(default_factory=dict, repr=False)

    @property
    def field(self) -> CyclotomicField:
        return self.tame.field

    @property
    def p(self) -> int:
        return self.tame.p

    @property
    def f(self) -> int:
        return self.tame.f

    @property
    def q(self) -> int:
        return self.tame.q

    @property
    def order(self) -> int:
        return self.tame.order

    @property
    def n(self) -> int:
        return self.cover.n

    @property
    def d(self) -> int:
        return self.cover.d

    @property
    def is_even(self) -> bool:
        return self.cover.is_even

    @cached_property
    def sqrt_q(self) -> RootScalar:
        return self.field.sqrt_q(self.f)

    def q_power(self, halves: int) -> RootScalar:
        """q^(halves / 2) as a RootScalar."""
        return RootScalar(self.field, 1, 0, self.f * halves)

    def with_cover(self, n: int) -> "LocalContext":
        """Same residue field, another cover degree."""
        return LocalContext(self.tame, CoverParams.from_degree(n, self.q))

    def describe(self) -> Dict[str, object]:
        return {"p": self.p, "f": self.f, "q": self.q, "n": self.n, "d": self.d,
                "N": self.order, "modulus": list(self.tame.modulus), "generator": self.tame.generator}


def make_context(p: int, f: int = 1, n: int = 1, modulus: Optional[Sequence[int]] = None,
                 depth: int = 1) -> LocalContext:
    """
    Build a validated tame context.

    Raises:
        ContextError: If (p, f, n) is outside the tame model
        ResidueFieldError: If the modulus is not monic irreducible of degree f
    """
    make_order(p, f, n, depth)
    tame = TameField(p, f, modulus, depth)
    return LocalContext(tame, CoverParams.from_degree(n, tame.q))
