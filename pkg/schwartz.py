"""
Schwartz Oracle

Exact Schwartz functions on Q_p built from terms c * psi(b x) * 1_{a + p^k Z_p}(x),
their Fourier transforms for the normalized psi, and Tate zeta and partial
zeta integrals as rational functions of X. Only the base field Q_p (f = 1) is
supported; p-adic numbers are Fractions whose denominators are powers of p.

psi(y) = exp(2 pi i {y}_p) and dx gives Z_p volume 1, so the transform is
self-dual and fourier(fourier(phi))(x) = phi(-x).
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

from sympy import multiplicity

from characters import MultChar
from exact_scalars import CycNumber, CyclotomicField
from factors import Slot, at_slot, partial_gamma, tate_gamma
from lagrangian import LagrangianDecomposition
from logger_config import setup_logger
from ratfun import RatFun
from tame_field import FStarClass, LocalContext

logger = setup_logger(__name__)


class SchwartzError(ValueError):
    """Raised for inputs outside the exact oracle (f > 1, missing roots of unity)."""


class SchwartzTerm(NamedTuple):
    """coefficient * psi(twist * x) on center + p^depth Z_p."""

    coefficient: CycNumber
    twist: Fraction
    center: Fraction
    depth: int


@dataclass(frozen=True)
class SchwartzFn:
    field: CyclotomicField
    p: int
    terms: Tuple[SchwartzTerm, ...]

    @classmethod
    def indicator(cls, ctx: LocalContext, center=0, depth: int = 0, coefficient=1) -> "SchwartzFn":
        """coefficient * 1_{center + p^depth Z_p}."""
        _require_base_field(ctx)
        value = coefficient if isinstance(coefficient, CycNumber) else ctx.field.rational(coefficient)
        return cls(ctx.field, ctx.p, (SchwartzTerm(value, Fraction(0), Fraction(center), depth),))

    def __add__(self, other: "SchwartzFn") -> "SchwartzFn":
        return SchwartzFn(self.field, self.p, self.terms + other.terms)

    def __sub__(self, other: "SchwartzFn") -> "SchwartzFn":
        return self + other.scale(-1)

    def scale(self, value) -> "SchwartzFn":
        return SchwartzFn(self.field, self.p,
                          tuple(term._replace(coefficient=term.coefficient * value) for term in self.terms))

    def __call__(self, x) -> CycNumber:
        return evaluate(self, x)


def _require_base_field(ctx: LocalContext) -> None:
    if ctx.f != 1:
        raise SchwartzError(f"the Schwartz oracle runs over Q_p only, got f={ctx.f}")


# -- p-adic helpers ---------------------------------------------------------------------------------


def valuation(p: int, x: Fraction) -> Optional[int]:
    """v_p(x), None for x = 0."""
    x = Fraction(x)
    if x == 0:
        return None
    return multiplicity(p, abs(x.numerator)) - multiplicity(p, x.denominator)


def reduce_mod(p: int, x: Fraction, depth: int) -> Fraction:
    """The representative of x + p^depth Z_p in [0, p^depth)."""
    step = Fraction(p) ** depth
    return x - step * math.floor(x / step)


def _in_coset(p: int, x: Fraction, center: Fraction, depth: int) -> bool:
    offset = valuation(p, Fraction(x) - center)
    return offset is None or offset >= depth


def _unit_residue(p: int, x: Fraction, val: int) -> int:
    unit = Fraction(x) / Fraction(p) ** val
    return (unit.numerator * pow(unit.denominator, -1, p)) % p


def psi_root(field: CyclotomicField, y: Fraction) -> CycNumber:
    """psi(y) = zeta^({y}_p)."""
    fractional = Fraction(y) - math.floor(Fraction(y))
    exponent = fractional * field.order
    if exponent.denominator != 1:
        raise SchwartzError(f"psi({y}) needs a root of unity of order {fractional.denominator}, "
                            f"which does not divide N={field.order}")
    return field.root(int(exponent))


# -- operations -------------------------------------------------------------------------------------


def evaluate(phi: SchwartzFn, x) -> CycNumber:
    """phi(x) at a p-adic rational x."""
    x = Fraction(x)
    total = phi.field.zero
    for term in phi.terms:
        if _in_coset(phi.p, x, term.center, term.depth):
            total = total + term.coefficient * psi_root(phi.field, term.twist * x)
    return total


def _twist_free_depth(p: int, term: SchwartzTerm) -> int:
    """Smallest depth at which psi(twist x) is constant on each coset."""
    v = valuation(p, term.twist)
    return term.depth if v is None else max(term.depth, -v)


def step_values(phi: SchwartzFn) -> Tuple[int, Dict[Fraction, CycNumber]]:
    """phi as a step function: (depth K, {coset representative mod p^K: value})."""
    p = phi.p
    if not phi.terms:
        return 0, {}
    depth = max(_twist_free_depth(p, term) for term in phi.terms)
    values: Dict[Fraction, CycNumber] = {}
    for term in phi.terms:
        if term.coefficient.is_zero:
            continue
        base = reduce_mod(p, term.center, term.depth)
        step = Fraction(p) ** term.depth
        for j in range(p ** (depth - term.depth)):
            point = reduce_mod(p, base + j * step, depth)
            value = term.coefficient * psi_root(phi.field, term.twist * point)
            values[point] = values.get(point, phi.field.zero) + value
    return depth, {point: value for point, value in sorted(values.items()) if not value.is_zero}


def normalize(phi: SchwartzFn) -> SchwartzFn:
    """Refine to a common depth, merge duplicates and drop zero terms."""
    depth, values = step_values(phi)
    terms = tuple(SchwartzTerm(value, Fraction(0), point, depth) for point, value in values.items())
    return SchwartzFn(phi.field, phi.p, terms)


def fourier(phi: SchwartzFn) -> SchwartzFn:
    """
    The psi-Fourier transform for the normalized psi.

    x -> psi(b x) 1_{a + p^k Z_p}(x) goes to y -> psi(a (y + b)) p^-k 1_{-b + p^-k Z_p}(y).
    """
    terms = []
    for term in phi.terms:
        constant = psi_root(phi.field, term.center * term.twist).scale(Fraction(phi.p) ** -term.depth)
        terms.append(SchwartzTerm(term.coefficient * constant, term.center, -term.twist, -term.depth))
    return SchwartzFn(phi.field, phi.p, tuple(terms))


def integral(phi: SchwartzFn) -> CycNumber:
    """The integral of phi over Q_p for dx with vol(Z_p) = 1."""
    depth, values = step_values(phi)
    total = phi.field.zero
    for value in values.values():
        total = total + value
    return total.scale(Fraction(phi.p) ** -depth)


def _shell_class(ctx: LocalContext, val: int, residue: int) -> FStarClass:
    return ctx.tame.make_class(val, ctx.tame.dlog(residue))


def _zeta_sum(ctx: LocalContext, phi: SchwartzFn, chi: MultChar,
              keep: Optional[Callable[[FStarClass], bool]], period: int) -> RatFun:
    _require_base_field(ctx)
    field, p = ctx.field, ctx.p
    depth, values = step_values(phi)
    laurent: Dict[int, CycNumber] = {}
    tail_value: Optional[CycNumber] = None

    for point, value in values.items():
        if point == 0:
            tail_value = value
            continue
        val = valuation(p, point)
        cls = _shell_class(ctx, val, _unit_residue(p, point, val))
        if keep is not None and not keep(cls):
            continue
        contribution = (value * chi(cls)).scale(Fraction(p) ** (val - depth))
        laurent[val] = laurent.get(val, field.zero) + contribution

    result = RatFun.zero(field)
    for power, coefficient in sorted(laurent.items()):
        result = result + RatFun.monomial(field, coefficient, power)

    if tail_value is not None:
        # shells m >= depth inside p^depth Z_p, periodic in m with the given period
        head = RatFun.zero(field)
        for shift in range(period):
            m = depth + shift
            shell = field.zero
            for t in range(1, p):
                cls = _shell_class(ctx, m, t)
                if keep is None or keep(cls):
                    shell = shell + chi(cls)
            if not shell.is_zero:
                head = head + RatFun.monomial(field, shell.scale(Fraction(1, p)), m)
        if not head.is_zero:
            tail = head / RatFun.binomial(field, chi.varpi_value ** period, period)
            result = result + tail.scale(tail_value)
    logger.debug(f"zeta over {len(values)} cosets at depth {depth}, period {period}")
    return result


def zeta(ctx: LocalContext, phi: SchwartzFn, chi: MultChar, slot: Optional[Slot] = None) -> RatFun:
    """
    zeta(s, chi, phi) = integral of phi(x) chi(x) |x|^s d*x, with d*x = dx / |x|.

    With a slot the result is re-expressed there, e.g. Slot.DUAL gives zeta(1 - s, chi, phi).
    """
    value = _zeta_sum(ctx, phi, chi, None, 1)
    return value if slot is None else at_slot(ctx, value, slot)


def partial_zeta(ctx: LocalContext, phi: SchwartzFn, chi: MultChar, k: FStarClass,
                 decomposition: LagrangianDecomposition, slot: Optional[Slot] = None) -> RatFun:
    """The zeta integral restricted to x in J k."""
    value = _zeta_sum(ctx, phi, chi, lambda cls: decomposition.contains_j(cls / k), ctx.d)
    return value if slot is None else at_slot(ctx, value, slot)


# -- functional equations -----------------------------------------------------------------------


def tate_functional_equation(ctx: LocalContext, phi: SchwartzFn, chi: MultChar) -> bool:
    """zeta(1 - s, chi^-1, phi-hat) == gamma(s, chi, psi) zeta(s, chi, phi)."""
    left = zeta(ctx, fourier(phi), chi.inverse(), Slot.DUAL)
    right = tate_gamma(ctx, chi) * zeta(ctx, phi, chi)
    return left == right


def partial_functional_equation(ctx: LocalContext, decomposition: LagrangianDecomposition,
                                phi: SchwartzFn, chi: MultChar, k0: FStarClass) -> bool:
    """zeta_J(1 - s, chi^-1, phi-hat, k0^-1) == sum_k gamma_J(s, chi, psi, k^-1 k0) zeta_J(s, chi, phi, k)."""
    left = partial_zeta(ctx, fourier(phi), chi.inverse(), k0.inverse(), decomposition, Slot.DUAL)
    right = RatFun.zero(ctx.field)
    for k in decomposition.kbar:
        weight = partial_gamma(ctx, decomposition, chi, None, k.inverse() * k0)
        right = right + weight * partial_zeta(ctx, phi, chi, k, decomposition)
    return left == right


def random_schwartz(ctx: LocalContext, rng: random.Random, terms: int = 3) -> SchwartzFn:
    """
    A pseudo-random function whose centers and twists lie in p^-1 Z.

    Its transforms only need p^2-th roots of unity, so contexts of depth 2 suffice.
    """
    _require_base_field(ctx)
    if ctx.tame.depth < 2:
        raise SchwartzError("random Schwartz functions need a context of depth >= 2")
    p, field = ctx.p, ctx.field
    chosen: List[SchwartzTerm] = []
    for _ in range(terms):
        coefficient = field.root(rng.randrange(field.order)).scale(rng.randint(1, 3))
        twist = Fraction(rng.randrange(p), p) if rng.random() < 0.5 else Fraction(0)
        center = Fraction(rng.randrange(p * p), p)
        depth = rng.choice((-1, 0, 1))
        chosen.append(SchwartzTerm(coefficient, twist, center, depth))
    return SchwartzFn(field, p, tuple(chosen))


def sample_points(p: int, rng: random.Random, count: int = 100) -> Iterable[Fraction]:
    """Points of p^-1 Z with numerators below p^3, plus 0."""
    yield Fraction(0)
    for _ in range(count - 1):
        yield Fraction(rng.randrange(-p ** 3, p ** 3), p ** rng.randint(0, 1))
