"""
Characters

Tame multiplicative characters of F*, twisted additive characters psi_a, the
Hilbert-symbol characters eta_x, Weil indices, and the genuine-character data
(chi, psi) that stands for a genuine principal-series inducing character.

All character values are roots of unity, so characters are stored as exponents
and evaluated by exponent arithmetic modulo N.
"""

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Dict, List, Optional

from exact_scalars import CycNumber, CyclotomicField, RootScalar
from logger_config import setup_logger
from tame_field import FStarClass, LocalContext

logger = setup_logger(__name__)


class CharacterError(ValueError):
    """Raised for invalid character data."""


@dataclass(frozen=True)
class MultChar:
    """
    A tame character chi of F*.

    chi([t]) = zeta_{q-1}^(unit_exp * dlog t) on Teichmuller units and
    chi(varpi) = zeta_N^varpi_exp.
    """

    unit_exp: int
    varpi_exp: int
    unit_order: int
    varpi_order: int
    field: CyclotomicField = dataclass_field(compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "unit_exp", self.unit_exp % self.unit_order)
        object.__setattr__(self, "varpi_exp", self.varpi_exp % self.varpi_order)

    @classmethod
    def make(cls, ctx: LocalContext, unit_exp: int = 0, varpi_exp: int = 0) -> "MultChar":
        return cls(unit_exp, varpi_exp, ctx.q - 1, ctx.order, ctx.field)

    @classmethod
    def trivial(cls, ctx: LocalContext) -> "MultChar":
        return cls.make(ctx)

    @classmethod
    def from_descriptor(cls, ctx: LocalContext, unit_exp: int, varpi_num: int, varpi_den: int) -> "MultChar":
        """The character with chi(varpi) = zeta_N^(varpi_num * N / varpi_den)."""
        if varpi_den <= 0:
            raise CharacterError(f"varpi_den must be positive, got {varpi_den}")
        if (varpi_num * ctx.order) % varpi_den:
            raise CharacterError(
                f"chi(varpi) = exp(2 pi i {varpi_num}/{varpi_den}) is not an N-th root of unity (N={ctx.order})")
        return cls.make(ctx, unit_exp, varpi_num * ctx.order // varpi_den)

    # -- group structure -------------------------------------------------------------------------

    def _check(self, other: "MultChar") -> None:
        if (self.unit_order, self.varpi_order) != (other.unit_order, other.varpi_order):
            raise CharacterError("characters belong to different contexts")

    def __mul__(self, other: "MultChar") -> "MultChar":
        self._check(other)
        return MultChar(self.unit_exp + other.unit_exp, self.varpi_exp + other.varpi_exp,
                        self.unit_order, self.varpi_order, self.field)

    def inverse(self) -> "MultChar":
        return MultChar(-self.unit_exp, -self.varpi_exp, self.unit_order, self.varpi_order, self.field)

    def __truediv__(self, other: "MultChar") -> "MultChar":
        return self * other.inverse()

    def __pow__(self, power: int) -> "MultChar":
        return MultChar(self.unit_exp * power, self.varpi_exp * power, self.unit_order, self.varpi_order,
                        self.field)

    # -- values -------------------------------------------------------------------------

    @property
    def is_unramified(self) -> bool:
        return self.unit_exp == 0

    @property
    def conductor(self) -> int:
        """e(chi): 0 when unramified, 1 otherwise (the model is tame)."""
        return 0 if self.is_unramified else 1

    @property
    def is_trivial(self) -> bool:
        return self.unit_exp == 0 and self.varpi_exp == 0

    def exponent_at(self, x: FStarClass) -> int:
        """k with chi(x) = zeta_N^k."""
        return (self.varpi_exp * x.val
                + (self.varpi_order // self.unit_order) * self.unit_exp * x.unit_dlog) % self.varpi_order

    def __call__(self, x: FStarClass) -> CycNumber:
        return self.field.root(self.exponent_at(x))

    def root_at(self, x: FStarClass) -> RootScalar:
        return RootScalar(self.field, 1, self.exponent_at(x))

    @property
    def varpi_value(self) -> RootScalar:
        return RootScalar(self.field, 1, self.varpi_exp)

    def unit_value_exponent(self, dlog: int) -> int:
        return ((self.varpi_order // self.unit_order) * self.unit_exp * dlog) % self.varpi_order

    def sign(self) -> int:
        """chi(-1) as +1 or -1."""
        return -1 if self.unit_exp % 2 else 1

    def describe(self) -> Dict[str, object]:
        return {"unit_exp": self.unit_exp, "varpi_exp": self.varpi_exp, "N": self.varpi_order}

    def __str__(self) -> str:
        return f"chi(u^{self.unit_exp}, w:z^{self.varpi_exp})"


def char_eval(chi: MultChar, x: FStarClass) -> CycNumber:
    """chi(x)."""
    return chi(x)


@dataclass(frozen=True)
class AddCharTwist:
    """psi_a(x) = psi(a x) for the normalized base character psi."""

    a: FStarClass

    @classmethod
    def normalized(cls, ctx: LocalContext) -> "AddCharTwist":
        return cls(ctx.tame.one_class)

    @property
    def conductor(self) -> int:
        """e(psi_a) = -v(a)."""
        return -self.a.val

    @property
    def is_normalized_base(self) -> bool:
        return self.a.val == 0 and self.a.unit_dlog == 0

    def twist(self, b: FStarClass) -> "AddCharTwist":
        """psi_{ab}."""
        return AddCharTwist(self.a * b)

    def __str__(self) -> str:
        return f"psi_({self.a})"


def conductor(chi: MultChar) -> int:
    return chi.conductor


def conductor_psi(psi: AddCharTwist) -> int:
    return psi.conductor


def hilbert_character(ctx: LocalContext, x: FStarClass, m: int) -> MultChar:
    """The character y -> (x, y)_m for m dividing q - 1."""
    q1 = ctx.q - 1
    if q1 % m:
        raise CharacterError(f"m={m} does not divide q - 1 = {q1}")
    unit_exp = -x.val * (q1 // m)
    varpi_exp = (x.val * (q1 // 2) + x.unit_dlog) * (ctx.order // m)
    return MultChar.make(ctx, unit_exp, varpi_exp)


def eta(ctx: LocalContext, x: FStarClass) -> MultChar:
    """eta_x(y) = (x, y)_d."""
    return hilbert_character(ctx, x, ctx.d)


def eta_prime(ctx: LocalContext, x: FStarClass) -> MultChar:
    """eta'_x = eta_x^((d+1)/2), defined for n = 2 (mod 4)."""
    if not ctx.is_even:
        raise CharacterError(f"eta' is only defined for even covers, n={ctx.n}")
    return eta(ctx, x) ** ((ctx.d + 1) // 2)


@dataclass(frozen=True)
class RestrictionReport:
    trivial: bool
    order: int


def restriction_tests(ctx: LocalContext, chi: MultChar) -> RestrictionReport:
    """Whether chi is trivial on F*^d, and the order of chi'' = chi restricted to F*^d."""
    d, order, q1 = ctx.d, ctx.order, ctx.q - 1
    varpi_part = order // math.gcd(order, d * chi.varpi_exp)
    unit_part = q1 // math.gcd(q1, d * chi.unit_exp)
    restricted_order = math.lcm(varpi_part, unit_part)
    return RestrictionReport(restricted_order == 1, restricted_order)


# -- Weil index -------------------------------------------------------------------------------


@dataclass(frozen=True)
class WeilIndex:
    """
    Weil indices attached to psi_a.

    gamma_psi(x) = gamma_F(psi_{ax}) / gamma_F(psi_a) is stored through the
    exponent of gamma_psi(varpi) for the normalized psi; twisting by a
    multiplies by the quadratic Hilbert symbol (a, x)_2.
    """

    ctx: LocalContext
    psi: AddCharTwist
    varpi_exponent: int

    def _base_exponent(self, x: FStarClass) -> int:
        """Exponent of gamma_psi(x) for the normalized psi."""
        if x.val % 2 == 0:
            return 0
        return (self.varpi_exponent + (x.unit_dlog % 2) * (self.ctx.order // 2)) % self.ctx.order

    def _quadratic_exponent(self, a: FStarClass, x: FStarClass) -> int:
        return self.ctx.tame.hilbert_exponent(2, a, x) * (self.ctx.order // 2)

    def gamma_psi_exponent(self, x: FStarClass) -> int:
        return (self._base_exponent(x) + self._quadratic_exponent(self.psi.a, x)) % self.ctx.order

    def gamma_psi(self, x: FStarClass) -> CycNumber:
        """gamma_psi(x), a fourth root of unity."""
        return self.ctx.field.root(self.gamma_psi_exponent(x))

    def gamma_F_exponent(self) -> int:
        return self._base_exponent(self.psi.a)

    def gamma_F(self) -> CycNumber:
        """gamma_F(psi_a), normalized so that gamma_F(psi) = 1 for the base psi."""
        return self.ctx.field.root(self.gamma_F_exponent())

    def table(self) -> Dict[str, CycNumber]:
        """gamma_psi on representatives of F* / F*^2."""
        tame = self.ctx.tame
        return {str(x): self.gamma_psi(x) for x in tame.class_group(2)}


def quadratic_gauss_sum(ctx: LocalContext) -> CycNumber:
    """sum over t in F_q of zeta_p^Tr(t^2)."""
    tame = ctx.tame
    step = ctx.order // ctx.p
    counts: Dict[int, int] = {}
    for t in tame.elements():
        exponent = tame.trace(tame.mul(t, t)) * step
        counts[exponent] = counts.get(exponent, 0) + 1
    return ctx.field.from_exponents(counts)


def weil_indices(ctx: LocalContext, psi: Optional[AddCharTwist] = None) -> WeilIndex:
    """The WeilIndex of psi_a (the normalized psi when psi is None)."""
    cached = ctx.cache.get("weil_varpi_exponent")
    if cached is None:
        ratio = ctx.sqrt_q.inverse().scale(quadratic_gauss_sum(ctx))
        single = ratio.root_exponent()
        if single is None or abs(single[0]) != 1:
            raise CharacterError("quadratic Gauss sum over sqrt(q) is not a root of unity")
        coefficient, exponent = single
        cached = (exponent + (ctx.order // 2 if coefficient < 0 else 0)) % ctx.order
        ctx.cache["weil_varpi_exponent"] = cached
        logger.debug(f"gamma_psi(varpi) = zeta_N^{cached} (N={ctx.order})")
    return WeilIndex(ctx, psi or AddCharTwist.normalized(ctx), cached)


def weil_index_oracle(ctx: LocalContext, radius: int = 1) -> CycNumber:
    """
    gamma_F(psi_varpi) from the quadratic integral over P^-radius, for f = 1.

    The integral of psi(varpi x^2) over P^-r, with the self-dual measure of
    psi_varpi, is q^-1/2 p^(1-r) sum_{y mod p^L} zeta_{p^L}^(y^2), L = 2r - 1.
    """
    if ctx.f != 1:
        raise CharacterError("the quadratic integral oracle runs over Q_p only (f = 1)")
    depth = 2 * radius - 1
    if ctx.tame.depth < depth:
        raise CharacterError(f"radius {radius} needs p-power roots of unity of depth {depth}")
    modulus = ctx.p ** depth
    step = ctx.order // modulus
    counts: Dict[int, int] = {}
    for y in range(modulus):
        exponent = (y * y % modulus) * step
        counts[exponent] = counts.get(exponent, 0) + 1
    total = ctx.field.from_exponents(counts)
    return ctx.sqrt_q.inverse().scale(total).scale(Fraction(ctx.p) ** (1 - radius))


# -- genuine characters ------------------------------------------------------------------------------


@dataclass(frozen=True)
class GenuineCharData:
    """The pair (chi, psi_a) on a cover; determines the genuine character chi_psi."""

    ctx: LocalContext
    chi: MultChar
    psi: AddCharTwist

    def with_chi(self, chi: MultChar) -> "GenuineCharData":
        return GenuineCharData(self.ctx, chi, self.psi)

    def with_psi(self, psi: AddCharTwist) -> "GenuineCharData":
        return GenuineCharData(self.ctx, self.chi, psi)

    def dual(self) -> "GenuineCharData":
        """Data of the Weyl conjugate, chi -> chi^-1."""
        return self.with_chi(self.chi.inverse())

    def chi_psi_exponent(self, x: FStarClass) -> int:
        exponent = self.chi.exponent_at(x)
        if self.ctx.is_even:
            exponent -= weil_indices(self.ctx, self.psi).gamma_psi_exponent(x)
        return exponent % self.ctx.order

    def chi_psi(self, x: FStarClass) -> CycNumber:
        return self.ctx.field.root(self.chi_psi_exponent(x))

    def same_representation(self, other: "GenuineCharData") -> bool:
        """True when both data restrict to the same chi'' on F*^d (same psi assumed)."""
        if self.psi != other.psi:
            raise CharacterError("compare genuine data only for the same psi")
        return restriction_tests(self.ctx, self.chi / other.chi).trivial


def chi_psi_eval(data: GenuineCharData, x: FStarClass) -> CycNumber:
    """chi(x) for odd n, chi(x) gamma_psi(x)^-1 for n = 2 (mod 4)."""
    return data.chi_psi(x)


def extensions(ctx: LocalContext, chi: MultChar) -> List[MultChar]:
    """The characters chi * eta_y, y in F* / F*^d: every extension of chi''."""
    return [chi * eta(ctx, y) for y in ctx.tame.class_group(ctx.d)]
