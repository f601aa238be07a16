"""
Local Factors

L-factors, Gauss sums, epsilon factors, Tate gamma factors, the metaplectic
gamma factor of even covers, and the partial gamma factors attached to a
Lagrangian decomposition. Every factor is a RatFun in X = q^-s.

Slot conventions: a factor "at 1 - s" is obtained from the factor at s with
at_slot(..., Slot.DUAL), and likewise for the other affine changes of s.
"""

from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Hashable, Optional, Tuple

from characters import (AddCharTwist, MultChar, WeilIndex, eta, weil_index_oracle, weil_indices)
from exact_scalars import CycNumber, RootScalar
from lagrangian import LagrangianDecomposition
from logger_config import setup_logger
from ratfun import RatFun, poly_mul
from tame_field import FStarClass, LocalContext

logger = setup_logger(__name__)

__all__ = [
    "FactorError", "ShellOracleError", "Slot", "at_slot", "l_factor", "gauss_sum", "epsilon",
    "tate_gamma", "tate_gamma_dual", "shell_integral_gamma", "weil_indices", "weil_index_oracle",
    "WeilIndex", "meta_gamma", "meta_gamma_dual", "partial_gamma", "partial_gamma_dual",
    "partial_meta_gamma", "partial_meta_gamma_dual", "partial_gamma_closed", "partial_meta_gamma_closed",
    "elementary_product_identities",
]


class FactorError(ValueError):
    """Raised when a factor is requested outside its hypotheses."""


class ShellOracleError(FactorError):
    """Raised when the shell integral cannot be evaluated or does not stabilize."""


class Slot(Enum):
    """Affine changes of s, realized as substitutions X -> c X^e."""

    DUAL = "1-s"
    NEGATE = "-s"
    SCALE = "ns"
    HALF_SHIFT = "s+1/2"
    DOUBLE = "2s"
    SHIFT = "1+s"


def at_slot(ctx: LocalContext, value: RatFun, slot: Slot, n: int = 1) -> RatFun:
    """Evaluate a factor given at s in the slot 1-s, -s, ns, s+1/2, 2s or 1+s."""
    if slot is Slot.DUAL:
        return value.substitute(ctx.q_power(-2), -1)
    if slot is Slot.NEGATE:
        return value.substitute(1, -1)
    if slot is Slot.SCALE:
        return value.substitute(1, n)
    if slot is Slot.HALF_SHIFT:
        return value.substitute(ctx.q_power(-1), 1)
    if slot is Slot.DOUBLE:
        return value.substitute(1, 2)
    if slot is Slot.SHIFT:
        return value.substitute(ctx.q_power(-2), 1)
    raise FactorError(f"unknown slot {slot}")


def _memo(ctx: LocalContext, key: Hashable, build: Callable[[], object]):
    cached = ctx.cache.get(key)
    if cached is None:
        cached = build()
        ctx.cache[key] = cached
    return cached


def _psi(ctx: LocalContext, psi: Optional[AddCharTwist]) -> AddCharTwist:
    return psi if psi is not None else AddCharTwist.normalized(ctx)


# -- L, Gauss sums, epsilon -------------------------------------------------------------------


def l_factor(ctx: LocalContext, chi: MultChar) -> RatFun:
    """L(s, chi) = 1 / (1 - chi(varpi) X) for unramified chi, else 1."""
    if not chi.is_unramified:
        return RatFun.one(ctx.field)
    return RatFun.binomial(ctx.field, chi.varpi_value).reciprocal()


def gauss_sum(ctx: LocalContext, chi: MultChar, c: int = 1) -> CycNumber:
    """
    sum over t in F_q^* of chi(t)^-1 zeta_p^Tr(c t), with c a residue-field code.

    Args:
        ctx: Computation context
        chi: Only its restriction to units is used
        c: Residue twist of the additive character
    """

    def build() -> CycNumber:
        tame = ctx.tame
        step = ctx.order // ctx.p
        counts: Dict[int, int] = {}
        for t in tame.units():
            exponent = -chi.unit_value_exponent(tame.dlog(t)) + tame.trace(tame.mul(c, t)) * step
            counts[exponent % ctx.order] = counts.get(exponent % ctx.order, 0) + 1
        return ctx.field.from_exponents(counts)

    return _memo(ctx, ("gauss", chi.unit_exp, c), build)


def epsilon(ctx: LocalContext, chi: MultChar, psi: Optional[AddCharTwist] = None) -> RatFun:
    """
    epsilon(s, chi, psi_a) = constant * X^(e(chi) - e(psi_a)).

    For psi normalized it is 1 (chi unramified) or chi(varpi) g X with g the
    Gauss sum of chi; psi_a is reached by multiplying with chi(a)|a|^(s-1/2).
    """
    psi = _psi(ctx, psi)

    def build() -> RatFun:
        base = ctx.field.one if chi.is_unramified else chi.varpi_value.scale(gauss_sum(ctx, chi))
        twist = chi.root_at(psi.a) * ctx.sqrt_q ** psi.a.val
        return RatFun.monomial(ctx.field, twist.scale(base), chi.conductor + psi.a.val)

    return _memo(ctx, ("epsilon", chi, psi), build)


# -- Tate gamma ----------------------------------------------------------------------------------


def tate_gamma(ctx: LocalContext, chi: MultChar, psi: Optional[AddCharTwist] = None) -> RatFun:
    """gamma(s, chi, psi) = epsilon(s, chi, psi) L(1 - s, chi^-1) / L(s, chi)."""
    psi = _psi(ctx, psi)

    def build() -> RatFun:
        dual_l = at_slot(ctx, l_factor(ctx, chi.inverse()), Slot.DUAL)
        return epsilon(ctx, chi, psi) * dual_l / l_factor(ctx, chi)

    return _memo(ctx, ("tate", chi, psi), build)


def tate_gamma_dual(ctx: LocalContext, chi: MultChar, psi: Optional[AddCharTwist] = None) -> RatFun:
    """gamma(1 - s, chi^-1, psi)."""
    psi = _psi(ctx, psi)
    return _memo(ctx, ("tate_dual", chi, psi),
                 lambda: at_slot(ctx, tate_gamma(ctx, chi.inverse(), psi), Slot.DUAL))


def _teichmuller_lift(p: int, residue: int, depth: int) -> int:
    modulus = p ** depth
    return pow(residue, p ** (depth - 1), modulus)


def shell_integral_gamma(ctx: LocalContext, chi: MultChar, psi: Optional[AddCharTwist] = None,
                         radius: Optional[int] = None) -> RatFun:
    """
    gamma(1 - s, chi^-1, psi_a) from the Tate integral of chi(x)|x|^s psi_a(x) d*x.

    Shells varpi^m O* with m + v(a) >= 0 form a geometric tail, the shell
    m + v(a) = -1 is a finite Gauss-type sum, and the shells down to depth
    radius are exact sums over (Z/p^L)^* which must vanish. Only f = 1.

    Raises:
        ShellOracleError: For f > 1, radius beyond the field depth, or a non-vanishing deep shell
    """
    psi = _psi(ctx, psi)
    if ctx.f != 1:
        raise ShellOracleError(f"the shell oracle runs over Q_p only, got f={ctx.f}")
    if abs(psi.a.val) > 1:
        raise ShellOracleError(f"shell oracle supports |v(a)| <= 1, got v(a)={psi.a.val}")
    radius = ctx.tame.depth if radius is None else radius
    if radius > ctx.tame.depth:
        raise ShellOracleError(f"radius {radius} needs roots of unity of order p^{radius}; depth is "
                               f"{ctx.tame.depth}")

    tame, field, p = ctx.tame, ctx.field, ctx.p
    v = psi.a.val
    residue = tame.exp(psi.a.unit_dlog)
    c = chi.varpi_value
    total = RatFun.zero(field)

    # tail: m >= -v
    if chi.is_unramified:
        head = (c ** -v).scale(field.rational(1 - Fraction(1, ctx.q)))
        total = total + RatFun.monomial(field, head, -v) * l_factor(ctx, chi)

    # shell m = -v - 1
    shell_sum = gauss_sum(ctx, chi.inverse(), residue)
    m = -v - 1
    total = total + RatFun.monomial(field, (c ** m).scale(shell_sum) / ctx.q, m)

    # deeper shells vanish for tame chi
    for depth in range(2, radius + 1):
        modulus = p ** depth
        lift = _teichmuller_lift(p, residue, depth)
        step = ctx.order // modulus
        counts: Dict[int, int] = {}
        for u in range(1, modulus):
            if u % p == 0:
                continue
            exponent = (chi.unit_value_exponent(tame.dlog(u % p)) + ((lift * u) % modulus) * step) % ctx.order
            counts[exponent] = counts.get(exponent, 0) + 1
        if not field.from_exponents(counts).is_zero:
            raise ShellOracleError(f"shell of depth {depth} does not vanish for {chi}")
    logger.debug(f"shell oracle for {chi}, {psi}: checked {max(radius - 1, 0)} deep shells")
    return total.scale(ctx.sqrt_q ** -v)


# -- metaplectic gamma -----------------------------------------------------------------------------


def _two_class(ctx: LocalContext) -> FStarClass:
    return ctx.tame.unit_class(ctx.tame.from_rational(2))


def meta_gamma_dual(ctx: LocalContext, chi: MultChar, psi: Optional[AddCharTwist] = None) -> RatFun:
    """
    The metaplectic factor at 1 - s: gamma~(1 - s, chi^-1, psi_a).

    gamma_psi(-a)^-1 chi(-1) gamma(s + 1/2, chi, psi_a) / gamma(2s, chi^2, psi_2a).
    """
    psi = _psi(ctx, psi)

    def build() -> RatFun:
        weil = weil_indices(ctx)
        prefactor = RootScalar(ctx.field, chi.sign(),
                               -weil.gamma_psi_exponent(ctx.tame.minus_one * psi.a))
        top = at_slot(ctx, tate_gamma(ctx, chi, psi), Slot.HALF_SHIFT)
        bottom = at_slot(ctx, tate_gamma(ctx, chi ** 2, psi.twist(_two_class(ctx))), Slot.DOUBLE)
        return (top / bottom).scale(prefactor)

    return _memo(ctx, ("meta_dual", chi, psi), build)


def meta_gamma(ctx: LocalContext, chi: MultChar, psi: Optional[AddCharTwist] = None) -> RatFun:
    """gamma~(s, chi, psi_a)."""
    psi = _psi(ctx, psi)
    return _memo(ctx, ("meta", chi, psi),
                 lambda: at_slot(ctx, meta_gamma_dual(ctx, chi.inverse(), psi), Slot.DUAL))


# -- partial factors ----------------------------------------------------------------------------


def _fourier_average(ctx: LocalContext, decomposition: LagrangianDecomposition, chi: MultChar,
                     k: FStarClass, gamma: Callable[[MultChar], RatFun]) -> RatFun:
    if decomposition.k_index(k) is None:
        raise FactorError(f"{k} is not in K-bar of the {decomposition.name} decomposition")
    total = RatFun.zero(ctx.field)
    for j in decomposition.jbar:
        eta_j = eta(ctx, j)
        total = total + gamma(chi * eta_j).scale(eta_j.root_at(k.inverse()))
    return total / len(decomposition.jbar)


def partial_gamma(ctx: LocalContext, decomposition: LagrangianDecomposition, chi: MultChar,
                  psi: Optional[AddCharTwist], k: FStarClass) -> RatFun:
    """gamma_J(s, chi, psi, k) = (1/#J) sum_j gamma(s, chi eta_j, psi) eta_j(k^-1)."""
    psi = _psi(ctx, psi)
    return _fourier_average(ctx, decomposition, chi, k, lambda lam: tate_gamma(ctx, lam, psi))


def partial_gamma_dual(ctx: LocalContext, decomposition: LagrangianDecomposition, chi: MultChar,
                       psi: Optional[AddCharTwist], k: FStarClass) -> RatFun:
    """gamma_J(1 - s, chi^-1, psi, k)."""
    psi = _psi(ctx, psi)
    key = ("partial_dual", decomposition.name, chi, psi, k.reduced(ctx.d))
    return _memo(ctx, key, lambda: at_slot(
        ctx, partial_gamma(ctx, decomposition, chi.inverse(), psi, k), Slot.DUAL))


def partial_meta_gamma(ctx: LocalContext, decomposition: LagrangianDecomposition, chi: MultChar,
                       psi: Optional[AddCharTwist], k: FStarClass) -> RatFun:
    """gamma~_J(s, chi, psi, k), the Fourier average of metaplectic factors."""
    psi = _psi(ctx, psi)
    return _fourier_average(ctx, decomposition, chi, k, lambda lam: meta_gamma(ctx, lam, psi))


def partial_meta_gamma_dual(ctx: LocalContext, decomposition: LagrangianDecomposition, chi: MultChar,
                            psi: Optional[AddCharTwist], k: FStarClass) -> RatFun:
    """gamma~_J(1 - s, chi^-1, psi, k)."""
    psi = _psi(ctx, psi)
    key = ("partial_meta_dual", decomposition.name, chi, psi, k.reduced(ctx.d))
    return _memo(ctx, key, lambda: at_slot(
        ctx, partial_meta_gamma(ctx, decomposition, chi.inverse(), psi, k), Slot.DUAL))


def _closed_setup(ctx: LocalContext, decomposition: LagrangianDecomposition,
                  psi: Optional[AddCharTwist], k: FStarClass) -> int:
    if decomposition.name != "standard":
        raise FactorError("closed forms are stated for the standard decomposition")
    if psi is not None and not psi.is_normalized_base:
        raise FactorError("closed forms are stated for the normalized psi")
    if decomposition.k_index(k) is None:
        raise FactorError(f"{k} is not in K-bar")
    return (-k.val) % ctx.d


def _geometric(ctx: LocalContext, chi: MultChar, shift: int, period: int, head: RootScalar) -> RatFun:
    """head * y^shift / (1 - y^period), y = chi(varpi) X."""
    c = chi.varpi_value
    top = RatFun.monomial(ctx.field, (c ** shift * head).value, shift)
    return top / RatFun.binomial(ctx.field, c ** period, period)


def partial_gamma_closed(ctx: LocalContext, decomposition: LagrangianDecomposition, chi: MultChar,
                         psi: Optional[AddCharTwist], k: FStarClass) -> RatFun:
    """
    Closed form of gamma_J(1 - s, chi^-1, psi, k), k = varpi^i, t = -i mod d.

    Ramified chi: epsilon(1 - s, chi^-1, psi) when t = d - 1, else 0.
    Unramified chi: y^t (1 - q^-1) L(ds, chi^d) for t <= d - 2 and
    y^(d-1) gamma(1 - ds, chi^-d, psi) at t = d - 1, with y = chi(varpi) X.
    """
    t = _closed_setup(ctx, decomposition, psi, k)
    d = ctx.d
    if not chi.is_unramified:
        return tate_gamma_dual(ctx, chi) if t == d - 1 else RatFun.zero(ctx.field)
    if t < d - 1:
        return _geometric(ctx, chi, t, d, RootScalar(ctx.field, 1 - Fraction(1, ctx.q)))
    c = chi.varpi_value
    lead = RatFun.monomial(ctx.field, (c ** (d - 1)).value, d - 1)
    return lead * at_slot(ctx, tate_gamma_dual(ctx, chi ** d), Slot.SCALE, d)


def _half_shifted_epsilon_ratio(ctx: LocalContext, chi: MultChar) -> RatFun:
    """chi(-1) epsilon(s + 1/2, chi, psi) for the normalized psi."""
    return at_slot(ctx, epsilon(ctx, chi), Slot.HALF_SHIFT).scale(chi.sign())


def partial_meta_gamma_closed(ctx: LocalContext, decomposition: LagrangianDecomposition, chi: MultChar,
                              psi: Optional[AddCharTwist], k: FStarClass) -> RatFun:
    """
    Closed form of gamma~_J(1 - s, chi^-1, psi, k) in its three cases.

    With y = chi(varpi) X and t = -i mod d (d odd):
      chi unramified: y^m (1 - q^-1) / (1 - y^2d), m the even one of t, t + d;
      chi^2 unramified, chi ramified: y^(m-1) (1 - q^-1) chi(-1) epsilon(s + 1/2, chi) / (1 - y^2d),
          m the odd one of t, t + d;
      at t = d - 1 both become y^(d-1) gamma~(1 - ds, chi^-d);
      chi^2 ramified: gamma~(1 - s, chi^-1) when t = d - 1, else 0.
    """
    t = _closed_setup(ctx, decomposition, psi, k)
    d = ctx.d
    square = chi ** 2
    if not square.is_unramified:
        return meta_gamma_dual(ctx, chi) if t == d - 1 else RatFun.zero(ctx.field)
    if t == d - 1:
        c = chi.varpi_value
        lead = RatFun.monomial(ctx.field, (c ** (d - 1)).value, d - 1)
        return lead * at_slot(ctx, meta_gamma_dual(ctx, chi ** d), Slot.SCALE, d)
    head = RootScalar(ctx.field, 1 - Fraction(1, ctx.q))
    if chi.is_unramified:
        m = t if t % 2 == 0 else t + d
        return _geometric(ctx, chi, m, 2 * d, head)
    m = t if t % 2 == 1 else t + d
    return _geometric(ctx, chi, m - 1, 2 * d, head) * _half_shifted_epsilon_ratio(ctx, chi)


# -- elementary identities ----------------------------------------------------------------------------


def elementary_product_identities(ctx: LocalContext) -> Dict[str, bool]:
    """
    Check, for xi a primitive d-th root of unity, the polynomial identities
    prod_m (1 - x xi^-m) = 1 - x^d and prod_{m != l} (1 - x xi^-m) = sum_m x^m xi^-lm.
    """
    field, d = ctx.field, ctx.d
    step = ctx.order // d

    def factor(m: int) -> Tuple[CycNumber, ...]:
        return (field.one, -field.root(-m * step))

    full = (field.one,)
    for m in range(d):
        full = poly_mul(full, factor(m))
    expected_full = (field.one,) + (field.zero,) * (d - 1) + (-field.one,)
    results = {"full_product": full == expected_full}

    leave_one_out = True
    for l in range(d):
        partial = (field.one,)
        for m in range(d):
            if m != l:
                partial = poly_mul(partial, factor(m))
        expected = tuple(field.root(-l * m * step) for m in range(d))
        leave_one_out = leave_one_out and partial == expected
    results["leave_one_out"] = leave_one_out
    return results
