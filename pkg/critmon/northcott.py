"""
Northcott-type binomial systems: exponent data, the defining relations and
the finitely generated commutative monoid they present.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy

from .linalg import SmithDecomposition, row_lattice_contains, smith_normal_form
from .utils import as_int_matrix, format_binomial, prod

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Relation = Tuple[Monomial, Monomial]


def _check_exponents(name: str, values: Sequence[int], expected: int) -> None:
    if len(values) != expected:
        raise ValueError(
            f"length mismatch: {name} has {len(values)} entries, expected {expected}"
        )
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ValueError(f"exponent must be an integer: {name}[{i}] = {v!r}")
        if v < 1:
            raise ValueError(f"exponent must be positive: {name}[{i}] = {v}")


@dataclass(frozen=True)
class NorthcottExponents:
    """
    Exponent data of a Northcott instance with ``n`` variables.

    ``diag[i]`` is the exponent of ``x_i`` in the first entry of ``D`` (u_{n,i}),
    ``xn[i]`` the exponent of ``x_n`` in the i-th entry of ``x`` (u_{i,n}) and
    ``mvec[i]`` the exponent of ``x_i`` in the cyclic vector ``m``.
    All indices are 0-based and run over the first ``n - 1`` variables.
    """

    n: int
    diag: Tuple[int, ...]
    xn: Tuple[int, ...]
    mvec: Tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 3:
            raise ValueError(f"n must be at least 3, got {self.n}")
        for name in ("diag", "xn", "mvec"):
            values = tuple(getattr(self, name))
            _check_exponents(name, values, self.n - 1)
            object.__setattr__(self, name, tuple(int(v) for v in values))
        object.__setattr__(self, "n", int(self.n))

    def successor(self, i: int) -> int:
        return (i + 1) % (self.n - 1)

    def predecessor(self, i: int) -> int:
        return (i - 1) % (self.n - 1)

    @property
    def critical_exponents(self) -> Tuple[int, ...]:
        """Exponents c_i of the pure powers: diag + mvec, then sum(xn)."""
        return tuple(d + m for d, m in zip(self.diag, self.mvec)) + (sum(self.xn),)

    @property
    def mvec_is_ones(self) -> bool:
        return all(m == 1 for m in self.mvec)

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "diag": list(self.diag),
            "xn": list(self.xn),
            "mvec": list(self.mvec),
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "NorthcottExponents":
        missing = [k for k in ("n", "diag", "xn", "mvec") if k not in data]
        if missing:
            raise ValueError(f"instance is missing keys: {', '.join(missing)}")
        return validate(data["n"], data["diag"], data["xn"], data["mvec"])


def validate(
    n: int, diag: Sequence[int], xn: Sequence[int], mvec: Sequence[int]
) -> NorthcottExponents:
    """Check raw exponent data and return the instance; ``ValueError`` on bad input."""
    for name, values in (("diag", diag), ("xn", xn), ("mvec", mvec)):
        if isinstance(values, (str, bytes)) or not isinstance(values, Sequence):
            raise ValueError(f"{name} must be a list of integers")
    return NorthcottExponents(n, tuple(diag), tuple(xn), tuple(mvec))


def family_instance(n: int) -> NorthcottExponents:
    """Member of the one-parameter family with diag = mvec = 1 and xn = (2, 1, ..., 1)."""
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    return NorthcottExponents(n, (1,) * (n - 1), (2,) + (1,) * (n - 2), (1,) * (n - 1))


@dataclass(frozen=True)
class BinomialSystem:
    """The relations f_1, ..., f_{n-1} followed by the D relation, as (lhs, rhs)."""

    n: int
    relations: Tuple[Relation, ...]

    def formatted(self) -> List[str]:
        return [format_binomial(lhs, rhs) for lhs, rhs in self.relations]

    def __str__(self):
        return "\n".join(self.formatted())


def binomials(e: NorthcottExponents) -> BinomialSystem:
    n = e.n
    relations = []
    for i in range(n - 1):
        lhs = [0] * n
        lhs[i] = e.diag[i] + e.mvec[i]
        rhs = [0] * n
        p = e.predecessor(i)
        rhs[p] = e.mvec[p]
        rhs[n - 1] = e.xn[i]
        relations.append((tuple(lhs), tuple(rhs)))
    relations.append((tuple(e.diag) + (0,), (0,) * (n - 1) + (sum(e.xn),)))
    return BinomialSystem(n, tuple(relations))


def defining_matrix(e: NorthcottExponents) -> np.ndarray:
    """
    Rows are lhs - rhs of f_1..f_{n-1}, last row rhs - lhs of the D relation,
    so that the rows sum to zero and the last column carries sum(xn) positively.
    """
    rels = binomials(e).relations
    rows = [[a - b for a, b in zip(lhs, rhs)] for lhs, rhs in rels[:-1]]
    lhs, rhs = rels[-1]
    rows.append([b - a for a, b in zip(lhs, rhs)])
    M = as_int_matrix(rows)
    if any(M[:, j].sum() != 0 for j in range(e.n)):
        raise RuntimeError("rows of the defining matrix do not sum to zero")
    return M


@dataclass(frozen=True)
class MonoidPresentation:
    """
    The monoid presented by a binomial system, as a submonoid of ``T x Z``.

    ``generators[j]`` is the image of ``x_j``: its torsion coordinates (one per
    invariant factor > 1, reduced mod that factor) followed by its free one.
    ``weight`` collects the free coordinates; it is the generator list of the
    numerical semigroup when the torsion part is trivial.
    """

    invariant_factors: Tuple[int, ...]
    torsion: Tuple[int, ...]
    generators: Tuple[Tuple[int, ...], ...]
    weight: Tuple[int, ...]
    smith: SmithDecomposition = field(repr=False, compare=False)

    @property
    def is_numerical(self) -> bool:
        return not self.torsion

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    @property
    def semigroup_generators(self) -> Tuple[int, ...]:
        if not self.is_numerical:
            raise ValueError("instance is not numerical")
        return self.weight

    def to_json(self) -> Dict[str, Any]:
        return {
            "generators": [list(g) for g in self.generators]
            if self.torsion
            else list(self.weight),
            "invariant_factors": list(self.invariant_factors),
            "torsion": list(self.torsion),
            "is_numerical": self.is_numerical,
        }


def _check_congruence(M, smith: SmithDecomposition, tors_idx, free) -> None:
    d = smith.invariant_factors
    V = smith.V
    for r in range(M.shape[0]):
        row = M[r, :]
        if sum(int(a) * b for a, b in zip(row, free)) != 0:
            raise RuntimeError(f"row {r} of the defining matrix is not weight-homogeneous")
        for k in tors_idx:
            if int(row.dot(V[:, k])) % d[k] != 0:
                raise RuntimeError(f"row {r} does not vanish in the torsion part")
    # the kernel of the quotient map is spanned by d_k V_inv[k, :], k < n - 1
    for k in range(M.shape[1] - 1):
        b = [d[k] * int(x) for x in smith.V_inv[k, :]]
        if not row_lattice_contains(M, b, smith):
            raise RuntimeError("kernel vector lies outside the row lattice")


def monoid_presentation(e: NorthcottExponents) -> MonoidPresentation:
    """
    Realize the monoid presented by the instance inside ``T x Z``.

    The free column of ``V`` (sign chosen positive) gives the weights, the
    columns for invariant factors > 1 give the torsion coordinates.
    """
    n = e.n
    M = defining_matrix(e)
    smith = smith_normal_form(M)
    d = smith.invariant_factors
    if smith.rank != n - 1 or d[n - 1] != 0:
        raise RuntimeError(f"defining matrix should have rank {n - 1}, got {smith.rank}")
    free = [int(x) for x in smith.V[:, n - 1]]
    if sum(free) < 0:
        free = [-x for x in free]
    if any(x <= 0 for x in free):
        raise RuntimeError(f"free coordinates are not all positive: {free}")
    tors_idx = [k for k in range(n - 1) if d[k] > 1]
    _check_congruence(M, smith, tors_idx, free)
    generators = tuple(
        tuple(int(smith.V[j, k]) % d[k] for k in tors_idx) + (free[j],)
        for j in range(n)
    )
    torsion = tuple(d[k] for k in tors_idx)
    logger.info("instance %s presents T=%s with weights %s", e.to_json(), torsion, free)
    return MonoidPresentation(
        invariant_factors=d,
        torsion=torsion,
        generators=generators,
        weight=tuple(free),
        smith=smith,
    )


@dataclass(frozen=True)
class NumericalTest:
    is_numerical: bool
    invariant_factors: Tuple[int, ...]
    formula_gcd: Optional[int] = None


def _cyclic_gcd(e: NorthcottExponents) -> int:
    # only for mvec = 1
    n = e.n
    first = prod(d + 1 for d in e.diag) - 1
    second = e.xn[0]
    running = 1
    for i in range(n - 2):
        running *= e.diag[i] + 1
        second += running * e.xn[i + 1]
    return math.gcd(first, second)


def numerical_test(
    e: NorthcottExponents, presentation: Optional[MonoidPresentation] = None
) -> NumericalTest:
    if presentation is None:
        presentation = monoid_presentation(e)
    d = presentation.invariant_factors
    formula = None
    if e.mvec_is_ones:
        formula = _cyclic_gcd(e)
        order = prod(x for x in d if x != 0)
        if formula != order:
            raise RuntimeError(
                f"gcd formula gives {formula} but the torsion order is {order}"
            )
    return NumericalTest(presentation.is_numerical, d, formula)


def _closed_minors(e: NorthcottExponents) -> Tuple[int, ...]:
    n = e.n
    k_count = n - 1
    out = []
    for k in range(1, n):
        total = e.xn[k % k_count]
        running = 1
        for i in range(1, n - 1):
            running *= e.diag[(i - 1 + k) % k_count] + 1
            total += running * e.xn[(i + k) % k_count]
        out.append(total)
    out.append(prod(d + 1 for d in e.diag) - 1)
    return tuple(out)


def minor_generators(e: NorthcottExponents) -> Tuple[int, ...]:
    """
    Maximal minors of the first n - 1 rows, for instances with mvec = 1.

    Computed as determinants and cross-checked against the closed forms and
    the linear recurrence linking consecutive minors.
    """
    if not e.mvec_is_ones:
        raise ValueError("minor formulas require mvec = (1, ..., 1)")
    n = e.n
    M = defining_matrix(e)
    sub = [[int(x) for x in M[r, :]] for r in range(n - 1)]
    minors = []
    for j in range(n):
        block = sympy.Matrix([[row[c] for c in range(n) if c != j] for row in sub])
        minors.append(abs(int(block.det(method="bareiss"))))
    minors = tuple(minors)
    closed = _closed_minors(e)
    if minors != closed:
        raise RuntimeError(f"minors {minors} disagree with closed forms {closed}")
    a_n = minors[-1]
    for k in range(n - 1):
        lhs = (e.diag[k] + 1) * minors[k] - minors[e.predecessor(k)]
        if lhs != e.xn[k] * a_n:
            raise RuntimeError(f"minor recurrence fails at index {k}")
    return minors


@dataclass(frozen=True)
class SaturationReport:
    index: int
    is_prime: bool


def saturation_index(
    e: NorthcottExponents, presentation: Optional[MonoidPresentation] = None
) -> SaturationReport:
    """Index of the lattice of the system in its saturation, i.e. the torsion order."""
    if presentation is None:
        presentation = monoid_presentation(e)
    index = prod(d for d in presentation.invariant_factors if d != 0)
    return SaturationReport(index, index == 1)


def betti_degrees(
    e: NorthcottExponents, presentation: Optional[MonoidPresentation] = None
) -> Tuple[int, ...]:
    """Degrees c_i a_i of the relations; these are the Betti elements when numerical."""
    if presentation is None:
        presentation = monoid_presentation(e)
    a = presentation.semigroup_generators
    return tuple(c * w for c, w in zip(e.critical_exponents, a))
