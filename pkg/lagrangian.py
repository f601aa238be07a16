"""
Lagrangian Decompositions

Splittings of F* / F*^d into two maximal isotropic subgroups for the Hilbert
pairing (., .)_d, and the dual group of F* / F*^d realized by the characters eta_x.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from characters import MultChar, eta, eta_prime
from exact_scalars import CycNumber
from logger_config import setup_logger
from tame_field import FStarClass, LocalContext

logger = setup_logger(__name__)


@dataclass(frozen=True)
class LagrangianDecomposition:
    """
    J-bar and K-bar as representative lists; K-bar is ordered, and that order
    indexes the rows and columns of every Slcm.
    """

    name: str
    d: int
    jbar: Tuple[FStarClass, ...]
    kbar: Tuple[FStarClass, ...]

    def k_index(self, k: FStarClass) -> Optional[int]:
        """Position of the class of k in K-bar, or None when k is not in K-bar."""
        key = k.reduced(self.d)
        for index, candidate in enumerate(self.kbar):
            if candidate.reduced(self.d) == key:
                return index
        return None

    def contains_j(self, x: FStarClass) -> bool:
        key = x.reduced(self.d)
        return any(j.reduced(self.d) == key for j in self.jbar)

    def contains_k(self, x: FStarClass) -> bool:
        return self.k_index(x) is not None


def standard_decomposition(ctx: LocalContext) -> LagrangianDecomposition:
    """J-bar = unit classes, K-bar = classes of varpi^0, ..., varpi^(d-1)."""
    tame, d = ctx.tame, ctx.d
    jbar = tuple(tame.make_class(0, j) for j in range(d))
    kbar = tuple(tame.make_class(i, 0) for i in range(d))
    return LagrangianDecomposition("standard", d, jbar, kbar)


def swapped_decomposition(ctx: LocalContext) -> LagrangianDecomposition:
    """J-bar = varpi classes, K-bar = unit classes u^0, ..., u^(d-1)."""
    standard = standard_decomposition(ctx)
    return LagrangianDecomposition("swapped", standard.d, standard.kbar, standard.jbar)


def decomposition_by_name(ctx: LocalContext, name: str) -> LagrangianDecomposition:
    if name == "standard":
        return standard_decomposition(ctx)
    if name == "swapped":
        return swapped_decomposition(ctx)
    raise ValueError(f"unknown decomposition {name!r} (expected 'standard' or 'swapped')")


@dataclass(frozen=True)
class LagrangianCheck:
    passed: bool
    reason: str = ""
    witness: Optional[Tuple[str, str]] = None


def _is_subgroup(ctx: LocalContext, members: Sequence[FStarClass]) -> Optional[Tuple[FStarClass, FStarClass]]:
    keys = {x.reduced(ctx.d) for x in members}
    for x in members:
        for y in members:
            if (x * y).reduced(ctx.d) not in keys:
                return x, y
    return None


def verify_lagrangian(ctx: LocalContext, decomposition: LagrangianDecomposition) -> LagrangianCheck:
    """
    Check closure, isotropy, direct product, maximality and perfect duality.

    Returns:
        LagrangianCheck with passed=False, a reason and a witness pair on the first failure
    """
    tame, d = ctx.tame, ctx.d
    jbar, kbar = decomposition.jbar, decomposition.kbar

    for label, members in (("J", jbar), ("K", kbar)):
        if len({x.reduced(d) for x in members}) != len(members):
            return LagrangianCheck(False, f"{label}-bar lists a class twice")
        broken = _is_subgroup(ctx, members)
        if broken is not None:
            return LagrangianCheck(False, f"{label}-bar is not closed", (str(broken[0]), str(broken[1])))
        for x in members:
            for y in members:
                if tame.hilbert_exponent(d, x, y):
                    return LagrangianCheck(False, f"{label}-bar is not isotropic", (str(x), str(y)))

    products = {(j * k).reduced(d) for j in jbar for k in kbar}
    if len(products) != d * d or len(jbar) * len(kbar) != d * d:
        return LagrangianCheck(False, "J-bar x K-bar is not all of F*/F*^d",
                               (str(len(jbar)), str(len(kbar))))

    everything = tame.class_group(d)
    for label, members in (("J", jbar), ("K", kbar)):
        keys = {x.reduced(d) for x in members}
        for y in everything:
            orthogonal = all(tame.hilbert_exponent(d, x, y) == 0 for x in members)
            if orthogonal and y.reduced(d) not in keys:
                return LagrangianCheck(False, f"{label}-bar is not maximal isotropic", (label, str(y)))

    pairings = set()
    for k in kbar:
        pairings.add(tuple(tame.hilbert_exponent(d, k, j) for j in jbar))
    if len(pairings) != len(kbar):
        return LagrangianCheck(False, "K-bar -> dual(J-bar) is not injective")
    return LagrangianCheck(True)


def dual_group(ctx: LocalContext) -> List[MultChar]:
    """The d^2 characters eta_x of F* / F*^d."""
    return [eta(ctx, x) for x in ctx.tame.class_group(ctx.d)]


def dual_group_prime(ctx: LocalContext) -> List[MultChar]:
    """The characters eta'_x (even covers)."""
    return [eta_prime(ctx, x) for x in ctx.tame.class_group(ctx.d)]


def coset_indicator(ctx: LocalContext, decomposition: LagrangianDecomposition,
                    x: FStarClass, k: FStarClass) -> CycNumber:
    """(1/#J-bar) sum_j eta_j(x k^-1): the indicator of x in J k."""
    total = ctx.field.zero
    for j in decomposition.jbar:
        total = total + eta(ctx, j)(x / k)
    return total / len(decomposition.jbar)
