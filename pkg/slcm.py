"""
Shahidi Local Coefficient Matrices

Assembly of the d x d Slcm of a genuine principal series from partial gamma
factors, the closed forms for the standard decomposition, and the conjugation
invariants: trace, determinant and characteristic polynomial.

Rows and columns are indexed by K-bar in the order the decomposition lists it.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from characters import GenuineCharData, MultChar, eta, eta_prime
from exact_scalars import RootScalar
from factors import (Slot, at_slot, epsilon, meta_gamma_dual, partial_gamma_dual, partial_meta_gamma_dual,
                     tate_gamma_dual)
from lagrangian import LagrangianDecomposition, standard_decomposition
from logger_config import setup_logger
from ratfun import RatFun
from tame_field import FStarClass, LocalContext

logger = setup_logger(__name__)


class SlcmError(ValueError):
    """Raised for Slcm or Plancherel requests outside the supported covers."""


@dataclass(frozen=True)
class SlcmMatrix:
    decomposition: LagrangianDecomposition
    data: GenuineCharData
    entries: Tuple[Tuple[RatFun, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, row: int, column: int) -> RatFun:
        return self.entries[row][column]

    def support(self) -> List[List[bool]]:
        """True where the entry is nonzero."""
        return [[not value.is_zero for value in row] for row in self.entries]

    def encode(self) -> List[List[str]]:
        return [[value.encode() for value in row] for row in self.entries]

    def pretty(self) -> str:
        rows = []
        for index, row in enumerate(self.entries):
            cells = " | ".join(value.pretty() for value in row)
            rows.append(f"[{self.decomposition.kbar[index]}] {cells}")
        return "\n".join(rows)


def _twist_character(ctx: LocalContext, x: FStarClass) -> MultChar:
    """eta_x for odd covers, eta'_x for n = 2 (mod 4)."""
    return eta_prime(ctx, x) if ctx.is_even else eta(ctx, x)


def slcm_entry(decomposition: LagrangianDecomposition, data: GenuineCharData,
               a: FStarClass, b: FStarClass) -> RatFun:
    """
    tau(a, b) = gamma_J(1 - s, chi^-1 eta_ab, psi, a b^-1) for odd n, and the
    metaplectic gamma~_J with eta'_ab for n = 2 (mod 4).
    """
    ctx = data.ctx
    twisted = data.chi / _twist_character(ctx, a * b)
    if ctx.is_even:
        return partial_meta_gamma_dual(ctx, decomposition, twisted, data.psi, a / b)
    return partial_gamma_dual(ctx, decomposition, twisted, data.psi, a / b)


def assemble_slcm(decomposition: LagrangianDecomposition, data: GenuineCharData) -> SlcmMatrix:
    """The Slcm of (chi, psi) from the definitional partial factors."""
    kbar = decomposition.kbar
    entries = tuple(tuple(slcm_entry(decomposition, data, a, b) for b in kbar) for a in kbar)
    logger.debug(f"assembled {len(kbar)}x{len(kbar)} Slcm for {data.chi} ({decomposition.name})")
    return SlcmMatrix(decomposition, data, entries)


# -- closed forms ------------------------------------------------------------------------------------


def _power_series_head(ctx: LocalContext, chi: MultChar, power: int, period: int) -> RatFun:
    """(1 - q^-1) y^power / (1 - y^period) with y = chi(varpi) X."""
    c = chi.varpi_value
    head = RootScalar(ctx.field, 1 - Fraction(1, ctx.q)) * c ** power
    return RatFun.monomial(ctx.field, head.value, power) / RatFun.binomial(ctx.field, c ** period, period)


def _scaled_top(ctx: LocalContext, chi: MultChar, value: RatFun) -> RatFun:
    """y^(d-1) * value(X^d)."""
    d = ctx.d
    lead = RatFun.monomial(ctx.field, (chi.varpi_value ** (d - 1)).value, d - 1)
    return lead * at_slot(ctx, value, Slot.SCALE, d)


def _closed_odd(ctx: LocalContext, twisted: MultChar, i: int, j: int, shift: int) -> RatFun:
    d = ctx.d
    if not twisted.is_unramified:
        return tate_gamma_dual(ctx, twisted) if (i - j) % d == 1 % d else RatFun.zero(ctx.field)
    alpha = 0 if shift <= (d - 1) // 2 else d
    power = 2 * shift - alpha
    if power == d - 1:
        return _scaled_top(ctx, twisted, tate_gamma_dual(ctx, twisted ** d))
    return _power_series_head(ctx, twisted, power, d)


def _closed_even(ctx: LocalContext, twisted: MultChar, i: int, j: int, shift: int) -> RatFun:
    d = ctx.d
    if not (twisted ** 2).is_unramified:
        return meta_gamma_dual(ctx, twisted) if (i - j) % d == 1 % d else RatFun.zero(ctx.field)
    if shift == (d - 1) // 2:
        return _scaled_top(ctx, twisted, meta_gamma_dual(ctx, twisted ** d))
    if twisted.is_unramified:
        return _power_series_head(ctx, twisted, 2 * shift, 2 * d)
    beta = d if shift <= (d - 3) // 2 else -d
    half_shifted = at_slot(ctx, epsilon(ctx, twisted), Slot.HALF_SHIFT).scale(twisted.sign())
    return _power_series_head(ctx, twisted, 2 * shift - 1 + beta, 2 * d) * half_shifted


def assemble_slcm_closed(data: GenuineCharData) -> SlcmMatrix:
    """
    The Slcm for the standard decomposition and normalized psi from the
    piecewise closed forms.

    With a = varpi^i, b = varpi^j and i' = (j - i)(d + 1)/2 mod d, the entries
    are geometric heads y^e (1 - q^-1) / (1 - y^d) (resp. 1 - y^2d) whose
    exponent e is 2i' - alpha for odd n and 2i' or 2i' - 1 + beta for even n,
    except at i' = (d - 1)/2 where a scaled gamma appears.

    Raises:
        SlcmError: For a non-normalized psi
    """
    ctx = data.ctx
    if not data.psi.is_normalized_base:
        raise SlcmError("closed Slcm forms need the normalized psi")
    decomposition = standard_decomposition(ctx)
    d = ctx.d
    rows = []
    for i, a in enumerate(decomposition.kbar):
        row = []
        for j, b in enumerate(decomposition.kbar):
            shift = ((j - i) * (d + 1) // 2) % d
            twisted = data.chi / _twist_character(ctx, a * b)
            closed = _closed_even if ctx.is_even else _closed_odd
            row.append(closed(ctx, twisted, i, j, shift))
        rows.append(tuple(row))
    return SlcmMatrix(decomposition, data, tuple(rows))


# -- invariants ------------------------------------------------------------------------------------


def _resolve(data: GenuineCharData, decomposition: Optional[LagrangianDecomposition]) -> LagrangianDecomposition:
    return decomposition if decomposition is not None else standard_decomposition(data.ctx)


def matrix_trace(entries: Sequence[Sequence[RatFun]]) -> RatFun:
    total = RatFun.zero(entries[0][0].field)
    for index in range(len(entries)):
        total = total + entries[index][index]
    return total


def trace_T(data: GenuineCharData, decomposition: Optional[LagrangianDecomposition] = None) -> RatFun:
    """T(sigma, s, psi), the trace of the Slcm."""
    return matrix_trace(assemble_slcm(_resolve(data, decomposition), data).entries)


def trace_T_formula(data: GenuineCharData) -> RatFun:
    """d^-1 sum over the d^2 characters eta of gamma(1 - s, chi^-1 eta, psi) (gamma~ for even n)."""
    ctx = data.ctx
    gamma = meta_gamma_dual if ctx.is_even else tate_gamma_dual
    total = RatFun.zero(ctx.field)
    for x in ctx.tame.class_group(ctx.d):
        total = total + gamma(ctx, data.chi * eta(ctx, x), data.psi)
    return total / ctx.d


def bareiss_determinant(entries: Sequence[Sequence[RatFun]]) -> RatFun:
    """
    Fraction-free elimination with exact division by the previous pivot.

    Rows are swapped when a pivot vanishes; a column without a pivot gives 0.
    """
    size = len(entries)
    field = entries[0][0].field
    work = [list(row) for row in entries]
    sign = 1
    previous = RatFun.one(field)
    for k in range(size - 1):
        if work[k][k].is_zero:
            swap = next((r for r in range(k + 1, size) if not work[r][k].is_zero), None)
            if swap is None:
                return RatFun.zero(field)
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        pivot = work[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                work[i][j] = (pivot * work[i][j] - work[i][k] * work[k][j]) / previous
        previous = pivot
    determinant = work[size - 1][size - 1]
    return -determinant if sign < 0 else determinant


def det_D(data: GenuineCharData, decomposition: Optional[LagrangianDecomposition] = None) -> RatFun:
    """D(sigma, s, psi), the determinant of the Slcm."""
    return bareiss_determinant(assemble_slcm(_resolve(data, decomposition), data).entries)


def _mat_mul(left: Sequence[Sequence[RatFun]], right: Sequence[Sequence[RatFun]]) -> List[List[RatFun]]:
    size = len(left)
    field = left[0][0].field
    product = []
    for i in range(size):
        row = []
        for j in range(size):
            total = RatFun.zero(field)
            for k in range(size):
                if not left[i][k].is_zero and not right[k][j].is_zero:
                    total = total + left[i][k] * right[k][j]
            row.append(total)
        product.append(row)
    return product


def characteristic_polynomial(entries: Sequence[Sequence[RatFun]]) -> List[RatFun]:
    """
    Coefficients c_0, ..., c_d of det(t I - A), lowest first (Faddeev-LeVerrier).
    """
    size = len(entries)
    field = entries[0][0].field
    coefficients: List[RatFun] = [RatFun.zero(field)] * (size + 1)
    coefficients[size] = RatFun.one(field)
    running = [[RatFun.zero(field)] * size for _ in range(size)]
    for k in range(1, size + 1):
        for index in range(size):
            running[index][index] = running[index][index] + coefficients[size - k + 1]
        product = _mat_mul(entries, running)
        coefficients[size - k] = -matrix_trace(product) / k
        running = product
    return coefficients


def charpoly(data: GenuineCharData, decomposition: Optional[LagrangianDecomposition] = None) -> List[RatFun]:
    """Characteristic polynomial of the Slcm, lowest coefficient first."""
    if data.ctx.d > 5:
        raise SlcmError(f"characteristic polynomials are computed for d <= 5, got d={data.ctx.d}")
    return characteristic_polynomial(assemble_slcm(_resolve(data, decomposition), data).entries)
