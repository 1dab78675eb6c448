"""Closed-form invariants of numerical Northcott instances."""

import itertools
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

from .northcott import (
    MonoidPresentation,
    NorthcottExponents,
    binomials,
    monoid_presentation,
)
from .utils import prod

logger = logging.getLogger(__name__)


def _numerical_weights(
    e: NorthcottExponents, presentation: Optional[MonoidPresentation]
) -> Tuple[int, ...]:
    if presentation is None:
        presentation = monoid_presentation(e)
    return presentation.semigroup_generators


def apery_closed(
    e: NorthcottExponents, presentation: Optional[MonoidPresentation] = None
) -> Tuple[int, ...]:
    """
    Apéry set with respect to a_n from the standard monomials of the
    initial ideal: exponents below c_i, minus the multiples of the D leading term.
    """
    a = _numerical_weights(e, presentation)
    k = e.n - 1
    c = e.critical_exponents[:k]
    a_n = a[-1]
    values = []
    for u in itertools.product(*[range(ci) for ci in c]):
        if all(uj >= dj for uj, dj in zip(u, e.diag)):
            continue
        values.append(sum(ui * ai for ui, ai in zip(u, a[:k])))
    values.sort()
    if len(values) != a_n or len({v % a_n for v in values}) != a_n:
        raise RuntimeError(
            f"closed Apéry set has {len(values)} elements, "
            f"expected one per residue class mod {a_n}"
        )
    return tuple(values)


@dataclass(frozen=True)
class ClosedInvariants:
    pseudo_frobenius: Tuple[int, ...]
    frobenius: int
    type: int
    genus: int
    max_apery: int


def _long_genus(e: NorthcottExponents, a: Tuple[int, ...]) -> int:
    k = e.n - 1
    c = e.critical_exponents[:k]
    m = e.mvec
    a_n = a[-1]
    first = sum(
        (c[i] - 1) * c[i] * prod(c[j] for j in range(k) if j != i) * a[i]
        for i in range(k)
    )
    second = sum(
        ((m[i] - 1) * m[i] + 2 * e.diag[i] * m[i])
        * prod(m[j] for j in range(k) if j != i)
        * a[i]
        for i in range(k)
    )
    numerator = first - second - a_n * (a_n - 1)
    if numerator % (2 * a_n) != 0:
        raise RuntimeError(f"genus numerator {numerator} not divisible by {2 * a_n}")
    return numerator // (2 * a_n)


def invariants_closed(
    e: NorthcottExponents, presentation: Optional[MonoidPresentation] = None
) -> ClosedInvariants:
    a = _numerical_weights(e, presentation)
    k = e.n - 1
    c = e.critical_exponents[:k]
    a_n = a[-1]
    top = sum((ci - 1) * ai for ci, ai in zip(c, a[:k]))
    pf = sorted(top - mj * aj - a_n for mj, aj in zip(e.mvec, a[:k]))
    if len(set(pf)) != k:
        raise RuntimeError(f"pseudo-Frobenius numbers are not distinct: {pf}")
    genus = _long_genus(e, a)
    if e.mvec_is_ones:
        if top != sum(e.xn) * a_n:
            raise RuntimeError("largest Apéry element disagrees with sum(xn) a_n")
        short = (a_n - 1) * (sum(e.xn) - 1)
        if short % 2 != 0 or short // 2 != genus:
            raise RuntimeError(f"genus formulas disagree: {genus} vs {short / 2}")
    return ClosedInvariants(
        pseudo_frobenius=tuple(pf),
        frobenius=pf[-1],
        type=k,
        genus=genus,
        max_apery=top,
    )


@dataclass(frozen=True)
class FactorizationBounds:
    delta_min: Optional[int]
    delta_max: Optional[int]
    catenary: int
    gaps: Tuple[int, ...]


def factorization_closed(e: NorthcottExponents) -> FactorizationBounds:
    """
    Delta set bounds and catenary degree from the defining relations.

    Each relation contributes the length gap |deg lhs - deg rhs| and its
    larger degree; the semigroup is uniquely presented by them.
    """
    relations = binomials(e).relations
    gaps = tuple(abs(sum(lhs) - sum(rhs)) for lhs, rhs in relations)
    nonzero = [g for g in gaps if g]
    catenary = max(max(sum(lhs), sum(rhs)) for lhs, rhs in relations)
    if not nonzero:
        return FactorizationBounds(None, None, catenary, gaps)
    return FactorizationBounds(math.gcd(*nonzero), max(nonzero), catenary, gaps)


def wilf_margin(
    e: NorthcottExponents, presentation: Optional[MonoidPresentation] = None
) -> int:
    """e (c - g) - c with e = n, c = F + 1; nonnegative means Wilf's inequality holds."""
    inv = invariants_closed(e, presentation)
    conductor = inv.frobenius + 1
    return e.n * (conductor - inv.genus) - conductor


@dataclass(frozen=True)
class InvariantReport:
    generators: Tuple[int, ...]
    apery: Tuple[int, ...]
    frobenius: int
    pseudo_frobenius: Tuple[int, ...]
    type: int
    genus: int
    delta_min: Optional[int]
    delta_max: Optional[int]
    catenary: int
    wilf_margin: int

    def to_dict(self) -> Dict[str, Any]:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


def invariant_report(
    e: NorthcottExponents, presentation: Optional[MonoidPresentation] = None
) -> InvariantReport:
    if presentation is None:
        presentation = monoid_presentation(e)
    a = presentation.semigroup_generators
    inv = invariants_closed(e, presentation)
    fac = factorization_closed(e)
    conductor = inv.frobenius + 1
    report = InvariantReport(
        generators=a,
        apery=apery_closed(e, presentation),
        frobenius=inv.frobenius,
        pseudo_frobenius=inv.pseudo_frobenius,
        type=inv.type,
        genus=inv.genus,
        delta_min=fac.delta_min,
        delta_max=fac.delta_max,
        catenary=fac.catenary,
        wilf_margin=e.n * (conductor - inv.genus) - conductor,
    )
    logger.debug("closed invariants for %s: %s", a, report)
    return report
