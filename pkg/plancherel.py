"""
Plancherel Measures

Every route to mu_n(sigma, s)^-1 for a genuine principal series of the n-fold
cover: the plan-and-sum formula over one Slcm row, the average over the d^2
twists, the closed L-quotient with its constant c(sigma), and the trace
Fourier sum. Also the related representations on smaller covers, the
reducibility classifier and the conductor identity.
"""

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Dict, List, Optional

from characters import AddCharTwist, GenuineCharData, MultChar, eta, restriction_tests, weil_indices
from exact_scalars import CycNumber, RootScalar
from factors import Slot, at_slot, l_factor, meta_gamma, meta_gamma_dual, tate_gamma, tate_gamma_dual
from lagrangian import LagrangianDecomposition, standard_decomposition
from logger_config import setup_logger
from ratfun import RatFun
from slcm import SlcmError, bareiss_determinant, assemble_slcm, matrix_trace, slcm_entry
from tame_field import LocalContext

logger = setup_logger(__name__)


@dataclass
class PlancherelReport:
    mu_inverse: RatFun
    paths: Dict[str, RatFun]
    c_sigma: CycNumber
    reducible: bool
    pole_order_at_s0: int
    notes: List[str] = dataclass_field(default_factory=list)

    @property
    def paths_agree(self) -> bool:
        return all(value == self.mu_inverse for value in self.paths.values())


def central_sign(data: GenuineCharData) -> CycNumber:
    """(-1, -1)_n chi_psi(-1), the central value chi_sigma(-I2) entering every path."""
    ctx = data.ctx
    minus_one = ctx.tame.minus_one
    return ctx.tame.hilbert_symbol(ctx.n, minus_one, minus_one) * data.chi_psi(minus_one)


def _resolve(data: GenuineCharData, decomposition: Optional[LagrangianDecomposition]) -> LagrangianDecomposition:
    return decomposition if decomposition is not None else standard_decomposition(data.ctx)


# -- the four paths ------------------------------------------------------------------------------------


def plancherel_plan_and_sum(data: GenuineCharData,
                            decomposition: Optional[LagrangianDecomposition] = None) -> RatFun:
    """(-1, -1)_n chi_psi(-1) sum_k tau(1, k, chi, s) tau(k^-1, 1, chi^-1, -s)."""
    ctx = data.ctx
    decomposition = _resolve(data, decomposition)
    one = ctx.tame.one_class
    dual = data.dual()
    total = RatFun.zero(ctx.field)
    for k in decomposition.kbar:
        forward = slcm_entry(decomposition, data, one, k)
        if forward.is_zero:
            continue
        backward = at_slot(ctx, slcm_entry(decomposition, dual, k.inverse(), one), Slot.NEGATE)
        total = total + forward * backward
    return total.scale(central_sign(data))


def mu_inverse_rank_one(ctx: LocalContext, chi: MultChar, psi: AddCharTwist) -> RatFun:
    """
    mu^-1 on the linear (n = 1) or double (n = 2) cover, from the gamma factors:
    chi(-1) gamma(1 - s, chi^-1) gamma(1 + s, chi), resp. chi_psi(-1) with gamma~.
    """
    if ctx.is_even:
        minus_one = ctx.tame.minus_one
        sign = ctx.field.root(chi.exponent_at(minus_one)
                              - weil_indices(ctx, psi).gamma_psi_exponent(minus_one))
        product = meta_gamma_dual(ctx, chi, psi) * at_slot(ctx, meta_gamma(ctx, chi, psi), Slot.SHIFT)
        return product.scale(sign)
    product = tate_gamma_dual(ctx, chi, psi) * at_slot(ctx, tate_gamma(ctx, chi, psi), Slot.SHIFT)
    return product.scale(chi.sign())


def plancherel_average(data: GenuineCharData) -> RatFun:
    """d^-2 sum over the d^2 twists chi eta of the rank-one mu^-1."""
    ctx = data.ctx
    classes = ctx.tame.class_group(ctx.d)
    total = RatFun.zero(ctx.field)
    for x in classes:
        total = total + mu_inverse_rank_one(ctx, data.chi * eta(ctx, x), data.psi)
    logger.debug(f"averaged {len(classes)} rank-one Plancherel measures")
    return total / len(classes)


def c_sigma(data: GenuineCharData) -> Fraction:
    """
    q^e(psi_(n/d)) times the mean of q^-e(chi^(n/d) eta^(n/d)) over the d^2 eta
    when chi^n is ramified, and q^e(psi_(n/d)) otherwise.
    """
    ctx = data.ctx
    base = Fraction(ctx.q) ** data.psi.conductor
    if (data.chi ** ctx.n).is_unramified:
        return base
    step = ctx.n // ctx.d
    classes = ctx.tame.class_group(ctx.d)
    total = Fraction(0)
    for x in classes:
        total += Fraction(ctx.q) ** -((data.chi * eta(ctx, x)) ** step).conductor
    return base * total / len(classes)


def l_quotient(ctx: LocalContext, chi: MultChar, n: int) -> RatFun:
    """L(ns, chi^n) L(-ns, chi^-n) / (L(1 - ns, chi^-n) L(1 + ns, chi^n))."""
    power = chi ** n
    inverse = power.inverse()
    top = at_slot(ctx, l_factor(ctx, power), Slot.SCALE, n) * at_slot(
        ctx, at_slot(ctx, l_factor(ctx, inverse), Slot.NEGATE), Slot.SCALE, n)
    bottom = at_slot(ctx, at_slot(ctx, l_factor(ctx, inverse), Slot.DUAL), Slot.SCALE, n) * at_slot(
        ctx, at_slot(ctx, l_factor(ctx, power), Slot.SHIFT), Slot.SCALE, n)
    return top / bottom


def plancherel_closed(data: GenuineCharData) -> RatFun:
    """c(sigma) times the L-quotient of chi^n."""
    ctx = data.ctx
    return l_quotient(ctx, data.chi, ctx.n).scale(c_sigma(data))


def trace_plancherel_sum(data: GenuineCharData,
                         decomposition: Optional[LagrangianDecomposition] = None) -> RatFun:
    """
    d^-2 sum over a in F*/F*^d of |a|^-1 T(sigma, s, psi_a) T(sigma^w, -s, psi_a),
    with the quadratic symbol (a, -1)_2 inserted for even covers.
    """
    ctx = data.ctx
    decomposition = _resolve(data, decomposition)
    classes = ctx.tame.class_group(ctx.d)
    total = RatFun.zero(ctx.field)
    for a in classes:
        twisted = data.with_psi(data.psi.twist(a))
        forward = matrix_trace(assemble_slcm(decomposition, twisted).entries)
        backward = matrix_trace(assemble_slcm(decomposition, twisted.dual()).entries)
        term = forward * at_slot(ctx, backward, Slot.NEGATE)
        weight = RootScalar(ctx.field, Fraction(ctx.q) ** a.val)
        if ctx.is_even:
            weight = weight * RootScalar(ctx.field, 1, ctx.tame.hilbert_exponent(2, a, ctx.tame.minus_one)
                                         * (ctx.order // 2))
        total = total + term.scale(weight)
    return total / len(classes)


# -- consequences --------------------------------------------------------------------------------------


def pole_order_at_s0(mu_inverse: RatFun) -> int:
    """Pole order of mu^-1 at s = 0 (X = 1); negative values are zeros."""
    return -mu_inverse.order_at(1)


@dataclass(frozen=True)
class ReducibilityReport:
    reducible: bool
    restricted_order: int
    weyl_invariant: bool
    pole_order: int
    consistent: bool


def reducibility(data: GenuineCharData, mu_inverse: Optional[RatFun] = None) -> ReducibilityReport:
    """
    Reducible iff n is odd and chi'' = chi restricted to F*^d is a nontrivial
    quadratic character; cross-checked against sigma = sigma^w (chi''^2 = 1)
    together with mu^-1 being analytic and nonzero at s = 0.
    """
    ctx = data.ctx
    order = restriction_tests(ctx, data.chi).order
    verdict = (not ctx.is_even) and order == 2
    weyl_invariant = order <= 2
    mu_inverse = plancherel_average(data) if mu_inverse is None else mu_inverse
    pole = pole_order_at_s0(mu_inverse)
    consistent = verdict == (weyl_invariant and pole == 0)
    if not consistent:
        logger.warning(f"reducibility verdict {verdict} disagrees with pole order {pole} for {data.chi}")
    return ReducibilityReport(verdict, order, weyl_invariant, pole, consistent)


def determinant_relation(data: GenuineCharData, decomposition: Optional[LagrangianDecomposition] = None,
                         mu_inverse: Optional[RatFun] = None) -> bool:
    """D(sigma, s) D(sigma^w, -s) chi_sigma(-I2)^d == (mu^-1)^d."""
    ctx = data.ctx
    decomposition = _resolve(data, decomposition)
    forward = bareiss_determinant(assemble_slcm(decomposition, data).entries)
    backward = bareiss_determinant(assemble_slcm(decomposition, data.dual()).entries)
    mu_inverse = plancherel_average(data) if mu_inverse is None else mu_inverse
    left = (forward * at_slot(ctx, backward, Slot.NEGATE)).scale(central_sign(data) ** ctx.d)
    return left == mu_inverse ** ctx.d


def related_reps(data: GenuineCharData, m: int) -> List[GenuineCharData]:
    """
    E_m(sigma): genuine data on the m-fold cover whose Plancherel measures average to mu_n(sigma).

    The twists chi eta, eta in the dual of F*/F*^d, are taken up to the dual of F*/F*^c
    with c = m (odd) or m/2 (even).

    Raises:
        SlcmError: If m does not divide n, changes parity, or c does not divide d
    """
    ctx = data.ctx
    if m < 1 or ctx.n % m or m % 2 != ctx.n % 2:
        raise SlcmError(f"m={m} must divide n={ctx.n} with the same parity")
    smaller = ctx.with_cover(m)
    if ctx.d % smaller.d:
        raise SlcmError(f"c={smaller.d} does not divide d={ctx.d}")
    chosen: List[GenuineCharData] = []
    for x in ctx.tame.class_group(ctx.d):
        candidate = GenuineCharData(smaller, data.chi * eta(ctx, x), data.psi)
        if not any(candidate.same_representation(other) for other in chosen):
            chosen.append(candidate)
    logger.debug(f"E_{m} has {len(chosen)} members for n={ctx.n}")
    return chosen


def plancherel_harmonic_mean(data: GenuineCharData, m: int) -> RatFun:
    """Mean of mu_m(pi, s)^-1 over pi in E_m(sigma)."""
    related = related_reps(data, m)
    total = RatFun.zero(data.ctx.field)
    for member in related:
        total = total + plancherel_average(member)
    return total / len(related)


@dataclass(frozen=True)
class ConductorIdentity:
    total: Fraction
    expected: Fraction

    @property
    def passed(self) -> bool:
        return self.total == self.expected


def conductor_identity_check(ctx: LocalContext) -> ConductorIdentity:
    """sum over eta with eta^n = 1 of q^-e(eta) against n(n - 1)/q + n (odd n)."""
    n, q = ctx.n, ctx.q
    if ctx.is_even:
        raise SlcmError("the conductor identity is stated for odd n")
    total = Fraction(0)
    for unit_step in range(n):
        for varpi_step in range(n):
            character = MultChar.make(ctx, unit_step * (q - 1) // n, varpi_step * ctx.order // n)
            total += Fraction(q) ** -character.conductor
    return ConductorIdentity(total, Fraction(n * (n - 1), q) + n)


def plancherel_report(data: GenuineCharData,
                      decomposition: Optional[LagrangianDecomposition] = None) -> PlancherelReport:
    """All paths side by side, with c(sigma), the pole order at s = 0 and the reducibility verdict."""
    mu_inverse = plancherel_average(data)
    trace_sum = trace_plancherel_sum(data, decomposition)
    paths = {
        "plan_and_sum": plancherel_plan_and_sum(data, decomposition),
        "average": mu_inverse,
        "closed": plancherel_closed(data),
        "trace_sum": trace_sum / central_sign(data),
    }
    verdict = reducibility(data, mu_inverse)
    report = PlancherelReport(mu_inverse, paths, data.ctx.field.rational(c_sigma(data)), verdict.reducible,
                              verdict.pole_order)
    for name, value in paths.items():
        if value != mu_inverse:
            report.notes.append(f"path {name} differs from the average")
    return report
