"""
Identity Suites

Every identity the engine relies on, by name, checked as an exact equality on a
context. Suites are grouped by topic and run over a grid of (p, f, n) contexts,
optionally in a process pool.
"""

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import cyclotomic_poly
from sympy.abc import x as _poly_variable

from characters import AddCharTwist, GenuineCharData, MultChar, eta, weil_index_oracle, weil_indices
from exact_scalars import RootScalar, cyclotomic_polynomial
from factors import (FactorError, Slot, at_slot, elementary_product_identities, epsilon, gauss_sum, meta_gamma,
                     meta_gamma_dual, partial_gamma, partial_gamma_closed, partial_gamma_dual,
                     partial_meta_gamma_closed, partial_meta_gamma_dual, shell_integral_gamma, tate_gamma,
                     tate_gamma_dual)
from lagrangian import (coset_indicator, dual_group, dual_group_prime, standard_decomposition,
                        swapped_decomposition, verify_lagrangian)
from logger_config import setup_logger
from plancherel import (conductor_identity_check, determinant_relation, l_quotient, plancherel_average,
                        plancherel_harmonic_mean, plancherel_plan_and_sum, plancherel_report, reducibility)
from ratfun import RatFun
from schwartz import (SchwartzFn, evaluate, fourier, normalize, partial_functional_equation, random_schwartz,
                      sample_points, tate_functional_equation)
from slcm import assemble_slcm, assemble_slcm_closed, charpoly, matrix_trace, trace_T_formula
from tame_field import LocalContext, make_context

logger = setup_logger(__name__)

DEFAULT_GRID: Tuple[Tuple[int, int, int], ...] = (
    (7, 1, 1), (5, 1, 2), (7, 1, 3), (7, 1, 6), (11, 1, 5), (3, 2, 2), (13, 1, 3),
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    context: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteOptions:
    schwartz_functions: int = 20
    seed: int = 0
    max_characters: Optional[int] = None


@dataclass
class VerificationReport:
    results: List[CheckResult] = dataclass_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]

    def summary(self) -> Dict[str, Dict[str, int]]:
        table: Dict[str, Dict[str, int]] = {}
        for result in self.results:
            row = table.setdefault(result.suite, {"passed": 0, "failed": 0})
            row["passed" if result.passed else "failed"] += 1
        return table


class _Recorder:
    """Collects named checks for one suite on one context."""

    def __init__(self, suite: str, ctx: LocalContext):
        self.suite = suite
        self.label = f"p={ctx.p},f={ctx.f},n={ctx.n}"
        self.results: List[CheckResult] = []
        self._failed: Dict[str, str] = {}
        self._seen: List[str] = []

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        if name not in self._seen:
            self._seen.append(name)
        if not passed and name not in self._failed:
            self._failed[name] = detail

    def finish(self) -> List[CheckResult]:
        return [CheckResult(self.suite, name, self.label, name not in self._failed, self._failed.get(name, ""))
                for name in self._seen]


def sample_characters(ctx: LocalContext, limit: Optional[int] = None) -> List[MultChar]:
    """A character sample covering every ramification case of chi, chi^2 and chi^n."""
    q1, order = ctx.q - 1, ctx.order
    unit_exps = sorted({u % q1 for u in (0, 1, q1 // 2, q1 // ctx.n)})
    varpi_exps = sorted({v % order for v in (0, order // 8, order // ctx.d)})
    characters = [MultChar.make(ctx, u, v) for u in unit_exps for v in varpi_exps]
    return characters if limit is None else characters[:limit]


def varpi_torsion(ctx: LocalContext) -> int:
    """Order of the roots of unity used as values at varpi: 2d, or at least six of them."""
    if 2 * ctx.d >= 6:
        return 2 * ctx.d
    return 6 if ctx.order % 6 == 0 else 8


def torsion_characters(ctx: LocalContext, limit: Optional[int] = None) -> List[MultChar]:
    """Every unit exponent mod q - 1 against every varpi value of order dividing varpi_torsion."""
    width = varpi_torsion(ctx)
    step = ctx.order // width
    characters = [MultChar.make(ctx, u, j * step) for u in range(ctx.q - 1) for j in range(width)]
    return characters if limit is None else characters[:limit]


def _is_monomial(value: RatFun) -> bool:
    return (sum(1 for c in value.numerator if not c.is_zero) == 1
            and sum(1 for c in value.denominator if not c.is_zero) == 1)


def _residue_classes(ctx: LocalContext) -> List:
    """Representatives of F*/F*^2 with valuations -1, 0, 1."""
    tame = ctx.tame
    return [tame.make_class(v, j) for v in (-1, 0, 1) for j in (0, 1)]


# -- suites ------------------------------------------------------------------------------------------


def suite_scalars(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("scalars", ctx)
    reference = cyclotomic_poly(ctx.order, _poly_variable, polys=True).all_coeffs()
    record.check("cyclotomic_polynomial", tuple(reversed([int(c) for c in reference]))
                 == cyclotomic_polynomial(ctx.order))
    record.check("sqrt_q_square", ctx.sqrt_q.value * ctx.sqrt_q.value == ctx.q)
    field = ctx.field
    record.check("root_multiplicative", field.root(3) * field.root(ctx.order - 1) == field.root(2))
    for t in ctx.tame.units():
        for s in ctx.tame.units():
            same = ctx.tame.iota(ctx.tame.mul(s, t)) == ctx.tame.iota(s) * ctx.tame.iota(t)
            record.check("iota_multiplicative", same, f"s={s}, t={t}")
    return record.finish()


def suite_weil(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("weil", ctx)
    tame = ctx.tame
    weil = weil_indices(ctx)
    minus_one = tame.minus_one
    classes = tame.class_group(2)
    record.check("weil_trivial", weil.gamma_psi(tame.one_class) == 1)
    for a in classes:
        value = weil.gamma_psi(a)
        record.check("weil_square", value * value == tame.hilbert_symbol(2, a, minus_one), str(a))
        for b in classes:
            expected = weil.gamma_psi(a) * weil.gamma_psi(b) * tame.hilbert_symbol(2, a, b)
            record.check("weil_multiplicative", weil.gamma_psi(a * b) == expected, f"{a}, {b}")
            twisted = weil_indices(ctx, AddCharTwist(b))
            record.check("weil_change_psi",
                         twisted.gamma_psi(a) == weil.gamma_psi(a) * tame.hilbert_symbol(2, a, b), f"{a}, {b}")
    flipped = weil_indices(ctx, AddCharTwist(minus_one))
    last = flipped.gamma_F() ** -2 * weil.gamma_psi(minus_one).inverse()
    record.check("weil_last_twist", last == tame.hilbert_symbol(2, minus_one, minus_one))
    if ctx.f == 1:
        oracle = weil_index_oracle(ctx, 1)
        record.check("weil_oracle", oracle == weil_indices(ctx, AddCharTwist(tame.uniformizer)).gamma_F())
    return record.finish()


def suite_epsilon(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("epsilon", ctx)
    field = ctx.field
    record.check("gauss_sum_trivial", gauss_sum(ctx, MultChar.trivial(ctx)) == -1)
    for unit_exp in range(1, ctx.q - 1):
        chi = MultChar.make(ctx, unit_exp)
        value = gauss_sum(ctx, chi)
        record.check("gauss_sum_modulus", value * value.conj() == ctx.q, str(chi))
        record.check("gauss_sum_pair", value * gauss_sum(ctx, chi.inverse()) == chi.sign() * ctx.q, str(chi))
    unramified = MultChar.make(ctx, 0, ctx.order // ctx.d)
    for chi in sample_characters(ctx, options.max_characters):
        record.check("epsilon_unramified_normalized",
                     not chi.is_unramified or epsilon(ctx, chi) == RatFun.one(field), str(chi))
        for a in _residue_classes(ctx):
            psi = AddCharTwist(a)
            base = epsilon(ctx, chi, psi)
            twisted = epsilon(ctx, chi * unramified, psi)
            factor = unramified.varpi_value ** (chi.conductor - psi.conductor)
            record.check("epsilon_unramified_twist", twisted == base.scale(factor), f"{chi}, {psi}")

            product = (at_slot(ctx, epsilon(ctx, chi.inverse(), psi), Slot.DUAL)
                       * at_slot(ctx, epsilon(ctx, chi, psi), Slot.SHIFT))
            expected = RootScalar(field, Fraction(ctx.q) ** (psi.conductor - chi.conductor))
            record.check("epsilon_twist_inverse", product == RatFun.constant(field, expected.scale(
                field.rational(chi.sign()))), f"{chi}, {psi}")

            functional = at_slot(ctx, epsilon(ctx, chi.inverse(), psi), Slot.DUAL) * base
            record.check("epsilon_functional", functional == RatFun.constant(field, chi.sign()), f"{chi}, {psi}")

            drift = psi.conductor - chi.conductor
            for slot, halves in ((Slot.HALF_SHIFT, 1), (Slot.SHIFT, 2)):
                moved = at_slot(ctx, base, slot)
                record.check("epsilon_shift", moved == base.scale(ctx.q_power(drift * halves)), f"{chi}, {slot}")
    return record.finish()


def suite_gamma(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("gamma", ctx)
    field = ctx.field
    trivial = MultChar.trivial(ctx)
    expected = RatFun.from_polys(field, [-Fraction(1, ctx.q), 1], [0, 1, -1])
    record.check("gamma_trivial", tate_gamma_dual(ctx, trivial) == expected)
    weil = weil_indices(ctx)
    for chi in torsion_characters(ctx, options.max_characters):
        base = tate_gamma(ctx, chi)
        meta = meta_gamma(ctx, chi)
        for a in _residue_classes(ctx):
            psi = AddCharTwist(a)
            twist = chi.root_at(a) * ctx.sqrt_q ** a.val
            record.check("gamma_change_psi",
                         tate_gamma(ctx, chi, psi) == base * RatFun.monomial(field, twist.value, a.val),
                         f"{chi}, {psi}")
            meta_twist = RootScalar(field, 1, weil.gamma_psi_exponent(a)) * twist
            record.check("meta_change_psi",
                         meta_gamma(ctx, chi, psi) == meta * RatFun.monomial(field, meta_twist.value, a.val),
                         f"{chi}, {psi}")
        if chi.is_unramified:
            c = chi.varpi_value
            top = RatFun.from_polys(field, [(c.inverse() * ctx.q_power(-1)).value,
                                            field.rational(1 - Fraction(1, ctx.q)),
                                            (-(c * ctx.q_power(-1))).value])
            closed = top / RatFun.monomial(field, 1, 1) / RatFun.binomial(field, c ** 2, 2)
            record.check("meta_gamma_unramified", meta_gamma_dual(ctx, chi) == closed, str(chi))
        elif not (chi ** 2).is_unramified:
            monomial = meta_gamma_dual(ctx, chi)
            record.check("meta_gamma_ramified_monomial", _is_monomial(monomial), str(chi))
    return record.finish()


def suite_shell(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("shell", ctx)
    if ctx.f != 1:
        return record.finish()
    deep = make_context(ctx.p, 1, ctx.n, depth=2)
    for chi in sample_characters(deep, options.max_characters):
        for a in (deep.tame.one_class, deep.tame.uniformizer, deep.tame.uniformizer.inverse(),
                  deep.tame.generator_class):
            psi = AddCharTwist(a)
            record.check("shell_oracle", shell_integral_gamma(deep, chi, psi) == tate_gamma_dual(deep, chi, psi),
                         f"{chi}, {psi}")
    return record.finish()


def suite_partial(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("partial", ctx)
    standard = standard_decomposition(ctx)
    for chi in torsion_characters(ctx, options.max_characters):
        for j in standard.jbar:
            eta_j = eta(ctx, j)
            recovered = RatFun.zero(ctx.field)
            for k in standard.kbar:
                recovered = recovered + partial_gamma(ctx, standard, chi, None, k).scale(eta_j.root_at(k))
            record.check("partial_inversion", recovered == tate_gamma(ctx, chi * eta_j), f"{chi}, {j}")
        for k in standard.kbar:
            record.check("partial_closed",
                         partial_gamma_dual(ctx, standard, chi, None, k)
                         == partial_gamma_closed(ctx, standard, chi, None, k), f"{chi}, {k}")
            if ctx.is_even:
                record.check("partial_meta_closed",
                             partial_meta_gamma_dual(ctx, standard, chi, None, k)
                             == partial_meta_gamma_closed(ctx, standard, chi, None, k), f"{chi}, {k}")
    try:
        partial_gamma(ctx, standard, MultChar.trivial(ctx), None, ctx.tame.generator_class)
        record.check("partial_rejects_j", ctx.d == 1)
    except FactorError:
        record.check("partial_rejects_j", ctx.d > 1)
    return record.finish()


def suite_lagrangian(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("lagrangian", ctx)
    tame, d = ctx.tame, ctx.d
    for decomposition in (standard_decomposition(ctx), swapped_decomposition(ctx)):
        outcome = verify_lagrangian(ctx, decomposition)
        record.check(f"lagrangian_{decomposition.name}", outcome.passed, outcome.reason)
        for x in tame.class_group(d):
            for k in decomposition.kbar:
                expected = 1 if decomposition.contains_j(x / k) else 0
                record.check("indicator", coset_indicator(ctx, decomposition, x, k) == expected, f"{x}, {k}")
    grid = tame.class_group(d)
    characters = dual_group(ctx)
    signatures = {tuple(character.exponent_at(y) for y in grid) for character in characters}
    record.check("dual_group", len(signatures) == d * d)
    for y in grid:
        total = ctx.field.zero
        for character in characters:
            total = total + character(y)
        expected = d * d if y.reduced(d) == (0, 0) else 0
        record.check("dual_orthogonality", total == expected, str(y))
    if ctx.is_even:
        primes = {tuple(character.exponent_at(y) for y in grid) for character in dual_group_prime(ctx)}
        record.check("eta_prime_permutes", primes == signatures)
    return record.finish()


def suite_schwartz(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("schwartz", ctx)
    if ctx.f != 1:
        return record.finish()
    deep = make_context(ctx.p, 1, ctx.n, depth=2)
    rng = random.Random(options.seed)
    standard = standard_decomposition(deep)
    for chi in torsion_characters(deep, options.max_characters):
        for _ in range(options.schwartz_functions):
            phi = random_schwartz(deep, rng)
            record.check("tate_functional_equation", tate_functional_equation(deep, phi, chi), str(chi))
    phi = random_schwartz(deep, rng)
    for chi in sample_characters(deep, options.max_characters):
        for k0 in standard.kbar:
            record.check("partial_functional_equation",
                         partial_functional_equation(deep, standard, phi, chi, k0), f"{chi}, {k0}")
    twice = fourier(fourier(phi))
    flat = normalize(phi)
    for point in sample_points(deep.p, rng, 40):
        record.check("fourier_involution", evaluate(twice, point) == evaluate(phi, -point), str(point))
        record.check("normalize_pointwise", evaluate(flat, point) == evaluate(phi, point), str(point))
    unit = SchwartzFn.indicator(deep)
    record.check("fourier_self_dual", normalize(fourier(unit)) == normalize(unit))
    return record.finish()


def suite_elementary(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("elementary", ctx)
    for name, passed in elementary_product_identities(ctx).items():
        record.check(f"elementary_{name}", passed)
    return record.finish()


def _genuine(ctx: LocalContext, chi: MultChar, psi: Optional[AddCharTwist] = None) -> GenuineCharData:
    return GenuineCharData(ctx, chi, psi or AddCharTwist.normalized(ctx))


def suite_slcm(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("slcm", ctx)
    standard = standard_decomposition(ctx)
    for chi in sample_characters(ctx, options.max_characters):
        data = _genuine(ctx, chi)
        matrix = assemble_slcm(standard, data)
        closed = assemble_slcm_closed(data)
        record.check("slcm_closed", matrix.entries == closed.entries, str(chi))
        trace = matrix_trace(matrix.entries)
        record.check("trace_formula", trace == trace_T_formula(data), str(chi))
        if ctx.d <= 5:
            coefficients = charpoly(data)
            record.check("charpoly_trace", coefficients[ctx.d - 1] == -trace, str(chi))
        if not (chi ** ctx.n).is_unramified:
            support = matrix.support()
            pattern = all(support[i][j] == ((i - j) % ctx.d == 1 % ctx.d)
                          for i in range(ctx.d) for j in range(ctx.d))
            record.check("ramified_sparsity", pattern, str(chi))
    return record.finish()


def suite_invariance(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("invariance", ctx)
    if ctx.d > 3:
        return record.finish()
    swapped = swapped_decomposition(ctx)
    for chi in sample_characters(ctx, options.max_characters):
        data = _genuine(ctx, chi)
        reference = charpoly(data)
        average = plancherel_average(data)
        record.check("invariance_decomposition", charpoly(data, swapped) == reference, str(chi))
        record.check("plancherel_decomposition", plancherel_plan_and_sum(data, swapped) == average, str(chi))
        for x in ctx.tame.class_group(ctx.d):
            twisted = data.with_chi(chi * eta(ctx, x))
            record.check("invariance_twist", charpoly(twisted) == reference, f"{chi}, {x}")
            record.check("plancherel_average_twist", plancherel_average(twisted) == average, f"{chi}, {x}")
    return record.finish()


def suite_plancherel(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("plancherel", ctx)
    for chi in sample_characters(ctx, options.max_characters):
        data = _genuine(ctx, chi)
        report = plancherel_report(data)
        record.check("plancherel_paths", report.paths_agree, "; ".join(report.notes))
        if chi.is_unramified:
            record.check("plancherel_unramified", report.mu_inverse == l_quotient(ctx, chi, ctx.n), str(chi))
    return record.finish()


def suite_determinant(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("determinant", ctx)
    for chi in sample_characters(ctx, options.max_characters):
        record.check("determinant_relation", determinant_relation(_genuine(ctx, chi)), str(chi))
    return record.finish()


def suite_reducibility(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("reducibility", ctx)
    for chi in torsion_characters(ctx, options.max_characters):
        outcome = reducibility(_genuine(ctx, chi))
        record.check("reducibility", outcome.consistent, f"{chi}: pole order {outcome.pole_order}")
        if ctx.is_even:
            record.check("even_irreducible", not outcome.reducible, str(chi))
    return record.finish()


def suite_conductor(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("conductor", ctx)
    if not ctx.is_even:
        outcome = conductor_identity_check(ctx)
        record.check("conductor_identity", outcome.passed, f"{outcome.total} != {outcome.expected}")
    return record.finish()


def suite_harmonic(ctx: LocalContext, options: SuiteOptions) -> List[CheckResult]:
    record = _Recorder("harmonic", ctx)
    smallest = 2 if ctx.is_even else 1
    for chi in sample_characters(ctx, options.max_characters):
        data = _genuine(ctx, chi)
        record.check("harmonic_mean", plancherel_harmonic_mean(data, smallest) == plancherel_average(data),
                     str(chi))
    return record.finish()


SUITES: Dict[str, Callable[[LocalContext, SuiteOptions], List[CheckResult]]] = {
    "scalars": suite_scalars,
    "weil": suite_weil,
    "epsilon": suite_epsilon,
    "gamma": suite_gamma,
    "shell": suite_shell,
    "partial": suite_partial,
    "lagrangian": suite_lagrangian,
    "schwartz": suite_schwartz,
    "elementary": suite_elementary,
    "slcm": suite_slcm,
    "invariance": suite_invariance,
    "plancherel": suite_plancherel,
    "determinant": suite_determinant,
    "reducibility": suite_reducibility,
    "conductor": suite_conductor,
    "harmonic": suite_harmonic,
}


def select_suites(only: Optional[Iterable[str]] = None) -> List[str]:
    """
    Raises:
        ValueError: If a requested suite does not exist
    """
    if not only:
        return list(SUITES)
    names = list(only)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites {unknown}; available: {', '.join(SUITES)}")
    return names


def run_context(ctx: LocalContext, suites: Sequence[str], options: Optional[SuiteOptions] = None) -> List[CheckResult]:
    options = options or SuiteOptions()
    results: List[CheckResult] = []
    for name in suites:
        outcome = SUITES[name](ctx, options)
        failed = [result for result in outcome if not result.passed]
        if failed:
            logger.warning(f"suite {name} on {ctx.describe()}: {len(failed)} failing identities "
                           f"({', '.join(result.name for result in failed)})")
        else:
            logger.info(f"suite {name} on p={ctx.p}, f={ctx.f}, n={ctx.n}: {len(outcome)} identities pass")
        results.extend(outcome)
    return results


def _run_grid_point(job: Tuple[Tuple[int, int, int], Tuple[str, ...], SuiteOptions]) -> List[CheckResult]:
    (p, f, n), suites, options = job
    return run_context(make_context(p, f, n), suites, options)


def run_grid(grid: Sequence[Tuple[int, int, int]] = DEFAULT_GRID, only: Optional[Iterable[str]] = None,
             jobs: int = 1, options: Optional[SuiteOptions] = None,
             extra: Sequence[LocalContext] = ()) -> VerificationReport:
    """
    Run the selected suites over every grid context plus any extra contexts.

    Args:
        grid: (p, f, n) triples
        only: Suite names to run; all suites when empty
        jobs: Worker processes for the grid; 1 runs inline
        options: Sample sizes and seed
        extra: Already-built contexts, run inline after the grid
    """
    suites = tuple(select_suites(only))
    options = options or SuiteOptions()
    report = VerificationReport()
    work = [(point, suites, options) for point in grid]
    logger.info(f"verifying {len(suites)} suites on {len(work)} grid contexts with {jobs} job(s)")
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            for outcome in executor.map(_run_grid_point, work):
                report.results.extend(outcome)
    else:
        for job in work:
            report.results.extend(_run_grid_point(job))
    for ctx in extra:
        report.results.extend(run_context(ctx, suites, options))
    logger.info(f"verification finished: {len(report.results)} identities, {len(report.failures)} failing")
    return report
