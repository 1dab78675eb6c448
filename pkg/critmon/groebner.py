"""Buchberger check for pure binomial systems under a weighted monomial order."""

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .northcott import MonoidPresentation, NorthcottExponents, binomials, monoid_presentation
from .utils import format_binomial

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class WeightedOrder:
    """
    Compare by weighted degree, then a smaller power of the last variable
    is larger, then ``tiebreak`` on the remaining variables.
    """

    weight: Tuple[int, ...]
    tiebreak: str = "revlex"

    def __post_init__(self):
        if self.tiebreak not in ("revlex", "lex"):
            raise ValueError(f"unknown tiebreak {self.tiebreak!r}, use 'revlex' or 'lex'")
        if any(w <= 0 for w in self.weight):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "weight", tuple(int(w) for w in self.weight))

    def degree(self, m: Sequence[int]) -> int:
        return sum(w * k for w, k in zip(self.weight, m))


def compare(order: WeightedOrder, m1: Sequence[int], m2: Sequence[int]) -> int:
    """-1, 0 or 1 as ``m1`` is less than, equal to or greater than ``m2``."""
    if len(m1) != len(order.weight) or len(m2) != len(order.weight):
        raise ValueError("monomial length does not match the weight")
    d1, d2 = order.degree(m1), order.degree(m2)
    if d1 != d2:
        return 1 if d1 > d2 else -1
    if m1[-1] != m2[-1]:
        return 1 if m1[-1] < m2[-1] else -1
    diffs = [a - b for a, b in zip(m1[:-1], m2[:-1])]
    if order.tiebreak == "revlex":
        for diff in reversed(diffs):
            if diff:
                return 1 if diff < 0 else -1
    else:
        for diff in diffs:
            if diff:
                return 1 if diff > 0 else -1
    return 0


@dataclass(frozen=True)
class PureBinomial:
    """The binomial plus - minus; the two monomials are distinct."""

    plus: Monomial
    minus: Monomial

    def __post_init__(self):
        if len(self.plus) != len(self.minus):
            raise ValueError("monomials have different numbers of variables")
        if tuple(self.plus) == tuple(self.minus):
            raise ValueError("a pure binomial needs two distinct monomials")
        object.__setattr__(self, "plus", tuple(int(k) for k in self.plus))
        object.__setattr__(self, "minus", tuple(int(k) for k in self.minus))

    def leading(self, order: WeightedOrder) -> Monomial:
        return self.plus if compare(order, self.plus, self.minus) > 0 else self.minus

    def trailing(self, order: WeightedOrder) -> Monomial:
        return self.minus if compare(order, self.plus, self.minus) > 0 else self.plus

    def is_homogeneous(self, weight: Sequence[int]) -> bool:
        return sum(w * (a - b) for w, a, b in zip(weight, self.plus, self.minus)) == 0

    def times(self, m: Sequence[int]) -> "PureBinomial":
        return PureBinomial(
            tuple(a + k for a, k in zip(self.plus, m)),
            tuple(b + k for b, k in zip(self.minus, m)),
        )

    def __str__(self):
        return format_binomial(self.plus, self.minus)


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def s_polynomial(
    f: PureBinomial, g: PureBinomial, order: WeightedOrder
) -> Optional[PureBinomial]:
    """S-polynomial of two pure binomials; ``None`` when it vanishes."""
    lf, tf = f.leading(order), f.trailing(order)
    lg, tg = g.leading(order), g.trailing(order)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    p = tuple(l - a + t for l, a, t in zip(lcm, lf, tf))
    q = tuple(l - a + t for l, a, t in zip(lcm, lg, tg))
    if p == q:
        return None
    return PureBinomial(p, q)


def normal_form(m: Monomial, G: Sequence[PureBinomial], order: WeightedOrder) -> Monomial:
    """Rewrite ``m`` by the leading terms of ``G`` until none divides it."""
    rules = [(g.leading(order), g.trailing(order)) for g in G]
    m = tuple(m)
    while True:
        for lead, trail in rules:
            if _divides(lead, m):
                m = tuple(k - a + b for k, a, b in zip(m, lead, trail))
                break
        else:
            return m


def reduce(
    f: PureBinomial, G: Sequence[PureBinomial], order: WeightedOrder
) -> Optional[PureBinomial]:
    """Remainder of ``f`` modulo ``G``; ``None`` when it reduces to zero."""
    p = normal_form(f.plus, G, order)
    q = normal_form(f.minus, G, order)
    if p == q:
        return None
    return PureBinomial(p, q)


@dataclass(frozen=True)
class GroebnerReport:
    is_basis: bool
    initial_gens: Tuple[Monomial, ...]
    failing_pair: Optional[Tuple[int, int]]
    pairs_checked: int
    pairs_skipped: int

    def to_json(self):
        return {
            "is_basis": self.is_basis,
            "initial_gens": [list(m) for m in self.initial_gens],
            "failing_pair": list(self.failing_pair) if self.failing_pair else None,
            "pairs_checked": self.pairs_checked,
            "pairs_skipped": self.pairs_skipped,
        }


def verify_groebner(
    e: NorthcottExponents,
    presentation: Optional[MonoidPresentation] = None,
    tiebreak: str = "revlex",
) -> GroebnerReport:
    """
    Check that the defining binomials form a Gröbner basis for the order
    weighted by the semigroup generators (the free coordinates in general).
    Pairs with coprime leading terms are skipped.
    """
    if presentation is None:
        presentation = monoid_presentation(e)
    order = WeightedOrder(presentation.weight, tiebreak)
    G = [PureBinomial(lhs, rhs) for lhs, rhs in binomials(e).relations]
    for g in G:
        if not g.is_homogeneous(order.weight):
            raise RuntimeError(f"{g} is not homogeneous for weight {order.weight}")
    initial = tuple(g.leading(order) for g in G)
    checked = skipped = 0
    for i, j in itertools.combinations(range(len(G)), 2):
        if all(a == 0 or b == 0 for a, b in zip(initial[i], initial[j])):
            skipped += 1
            continue
        checked += 1
        s = s_polynomial(G[i], G[j], order)
        if s is not None and reduce(s, G, order) is not None:
            logger.warning("S-pair (%d, %d) does not reduce to zero", i, j)
            return GroebnerReport(False, initial, (i, j), checked, skipped)
    return GroebnerReport(True, initial, None, checked, skipped)


def standard_monomials(initial_gens: Sequence[Monomial], n: int) -> Tuple[Monomial, ...]:
    """
    Monomials in x_1..x_{n-1} outside the ideal generated by ``initial_gens``.

    Every variable needs a pure power among the generators, otherwise the
    set is infinite.
    """
    bounds = []
    for i in range(n - 1):
        powers = [
            m[i] for m in initial_gens if m[i] > 0 and all(k == 0 for j, k in enumerate(m) if j != i)
        ]
        if not powers:
            raise ValueError(f"no pure power of x_{i + 1} among the initial terms")
        bounds.append(min(powers))
    out = []
    for u in itertools.product(*[range(b) for b in bounds]):
        m = tuple(u) + (0,)
        if not any(_divides(g, m) for g in initial_gens):
            out.append(m)
    return tuple(out)
