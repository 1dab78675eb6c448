"""
Numerical semigroups from generators: membership, Apéry sets, factorizations,
Betti elements and minimal presentations, gluings and criticality.

These are the brute-force checks that the closed forms are compared against.
"""

import itertools
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .utils import distance, gcd_all

logger = logging.getLogger(__name__)

Factorization = Tuple[int, ...]


@dataclass
class OracleConfig:
    # largest number of factorization choices tried when testing criticality
    critical_search_cap: int = 100000
    # initial size of membership tables
    initial_capacity: int = 1024


class _Sieve:
    """
    Incrementally filled membership table of the monoid spanned by ``gens``.

    Entries are final below ``filled``. Filling proceeds in blocks of the
    smallest generator, each block only reading finished entries.
    """

    def __init__(self, gens: Iterable[int], capacity: int = 1024):
        self.gens = tuple(sorted(set(int(g) for g in gens)))
        if not self.gens or self.gens[0] <= 0:
            raise ValueError("generators must be positive")
        self.step = self.gens[0]
        self.table = np.zeros(max(capacity, 2 * self.step) + 1, dtype=bool)
        self.table[0] = True
        self.filled = 1
        self._fill_block(self.step)

    def _grow(self, limit: int):
        size = len(self.table)
        while size <= limit + self.step:
            size *= 2
        table = np.zeros(size, dtype=bool)
        table[: len(self.table)] = self.table
        self.table = table

    def _fill_block(self, stop: int):
        start = self.filled
        block = self.table[start:stop]
        for g in self.gens:
            if stop - g <= 0:
                continue
            lo = start - g
            if lo < 0:
                block[-lo:] |= self.table[: stop - g]
            else:
                block |= self.table[lo : stop - g]
        self.filled = stop

    def extend_to(self, limit: int):
        """Make entries up to and including ``limit`` final."""
        if limit >= len(self.table) - 1:
            self._grow(limit)
        while self.filled <= limit:
            self._fill_block(min(self.filled + self.step, len(self.table)))

    def __contains__(self, s: int) -> bool:
        if s < 0:
            return False
        self.extend_to(s)
        return bool(self.table[s])

    def saturated(self) -> bool:
        """True once the last finished block is all members (so everything after is)."""
        lo = self.filled - self.step
        return lo >= 0 and bool(self.table[lo : self.filled].all())


class NumericalSemigroup:
    """
    Numerical semigroup given by generators with gcd 1.

    :param generators: positive integers, in any order and possibly redundant
    """

    def __init__(self, generators: Sequence[int], config: Optional[OracleConfig] = None):
        gens = tuple(int(g) for g in generators)
        if not gens:
            raise ValueError("at least one generator is required")
        if any(g <= 0 for g in gens):
            raise ValueError(f"generators must be positive: {gens}")
        if gcd_all(gens) != 1:
            raise ValueError(f"generators {gens} have gcd {gcd_all(gens)}, not 1")
        self.config = config or OracleConfig()
        self.generators = gens
        sieve = _Sieve(gens, self.config.initial_capacity)
        while not sieve.saturated():
            sieve.extend_to(2 * sieve.filled)
        holes = np.flatnonzero(~sieve.table[: sieve.filled])
        self.frobenius = int(holes[-1]) if len(holes) else -1
        self.conductor = self.frobenius + 1
        self._table = np.ones(self.conductor + max(gens) + 1, dtype=bool)
        self._table[: self.conductor] = sieve.table[: self.conductor]
        self._table.flags.writeable = False
        self.minimal_generators = self._minimal_generators()
        self.multiplicity = min(self.minimal_generators)
        logger.debug(
            "semigroup %s: minimal generators %s, Frobenius %d",
            gens,
            self.minimal_generators,
            self.frobenius,
        )

    def _minimal_generators(self) -> Tuple[int, ...]:
        out = []
        distinct = sorted(set(self.generators))
        for g in dict.fromkeys(self.generators):
            if all(g - h not in self for h in distinct if h < g):
                out.append(g)
        return tuple(out)

    def __contains__(self, s: int) -> bool:
        s = int(s)
        if s < 0:
            return False
        if s >= self.conductor:
            return True
        return bool(self._table[s])

    def contains(self, s: int) -> bool:
        return s in self

    def membership(self, limit: int) -> np.ndarray:
        """Boolean table of membership for 0..limit."""
        if limit < len(self._table):
            return self._table[: limit + 1]
        table = np.ones(limit + 1, dtype=bool)
        table[: len(self._table)] = self._table
        return table

    @property
    def embedding_dimension(self) -> int:
        return len(self.minimal_generators)

    def gaps(self) -> Tuple[int, ...]:
        return tuple(int(s) for s in np.flatnonzero(~self._table[: self.conductor]))

    def __repr__(self):
        return f"NumericalSemigroup({list(self.minimal_generators)})"


def from_generators(
    generators: Sequence[int], config: Optional[OracleConfig] = None
) -> NumericalSemigroup:
    return NumericalSemigroup(generators, config)


def _shifted(table: np.ndarray, shift: int) -> np.ndarray:
    """out[s] = table[s - shift], False where s - shift < 0"""
    out = np.zeros_like(table)
    if shift < len(table):
        out[shift:] = table[: len(table) - shift]
    return out


def minimal_generators(S: NumericalSemigroup) -> Tuple[int, ...]:
    return S.minimal_generators


def apery(S: NumericalSemigroup, z: int) -> Tuple[int, ...]:
    """Elements w of S with w - z not in S, for a positive integer z."""
    if z <= 0:
        raise ValueError(f"z must be positive, got {z}")
    limit = S.conductor + z - 1
    table = S.membership(limit)
    mask = table & ~_shifted(table, z)
    out = tuple(int(w) for w in np.flatnonzero(mask))
    if z in S and len(out) != z:
        raise RuntimeError(f"Apéry set with respect to {z} has {len(out)} elements")
    return out


@dataclass(frozen=True)
class BasicInvariants:
    frobenius: int
    genus: int
    pseudo_frobenius: Tuple[int, ...]
    type: int


def basic_invariants(S: NumericalSemigroup) -> BasicInvariants:
    m = S.multiplicity
    ap = apery(S, m)
    frobenius = max(ap) - m
    genus = (sum(ap) - m * (m - 1) // 2) // m
    if frobenius != S.frobenius or genus != len(S.gaps()):
        raise RuntimeError("Selmer formulas disagree with the membership table")
    # maximal elements of the Apéry set with respect to the semigroup order
    pf = sorted(w - m for w in ap if all(w + g - m in S for g in S.minimal_generators))
    return BasicInvariants(frobenius, genus, tuple(pf), len(pf))


@dataclass(frozen=True)
class FactorizationSet:
    element: int
    generators: Tuple[int, ...]
    factorizations: Tuple[Factorization, ...]

    def __len__(self):
        return len(self.factorizations)

    @property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(sorted({sum(f) for f in self.factorizations}))


def factorizations(S: NumericalSemigroup, s: int) -> FactorizationSet:
    """All expressions of ``s`` in the minimal generators (in their stored order)."""
    s = int(s)
    if s not in S:
        raise ValueError(f"{s} is not an element of the semigroup")
    gens = S.minimal_generators
    order = sorted(range(len(gens)), key=lambda i: -gens[i])
    # tails[pos]: what the generators order[pos:] can reach, up to s
    tails = []
    for pos in range(len(order)):
        sieve = _Sieve([gens[i] for i in order[pos:]], s + 1)
        sieve.extend_to(s)
        tails.append(sieve.table)
    found = []
    vec = [0] * len(gens)

    def expand(pos, rest):
        i = order[pos]
        g = gens[i]
        if pos == len(order) - 1:
            vec[i] = rest // g
            found.append(tuple(vec))
            vec[i] = 0
            return
        for k in range(rest // g, -1, -1):
            if tails[pos + 1][rest - k * g]:
                vec[i] = k
                expand(pos + 1, rest - k * g)
        vec[i] = 0

    expand(0, s)
    return FactorizationSet(s, gens, tuple(sorted(found, reverse=True)))


def _betti_scan(S: NumericalSemigroup) -> np.ndarray:
    """
    Number of connected components of the graph on the generators used in
    some factorization of s (edges between generators used together), for
    every s up to the conductor plus the two largest generators.
    """
    gens = S.minimal_generators
    e = len(gens)
    if e == 1:
        return np.zeros(1, dtype=np.int16)
    top = sorted(gens)[-2:]
    bound = S.conductor + sum(top)
    table = S.membership(bound)
    vertex = [_shifted(table, g) for g in gens]
    label = [np.where(vertex[i], i, e).astype(np.int16) for i in range(e)]
    edges = []
    for i, j in itertools.combinations(range(e), 2):
        edge = vertex[i] & vertex[j] & _shifted(table, gens[i] + gens[j])
        if edge.any():
            edges.append((i, j, edge))
    for _ in range(e):
        changed = False
        for i, j, edge in edges:
            low = np.minimum(label[i], label[j])
            moved = edge & ((label[i] != low) | (label[j] != low))
            if moved.any():
                changed = True
                np.copyto(label[i], low, where=edge)
                np.copyto(label[j], low, where=edge)
        if not changed:
            break
    count = np.zeros(len(table), dtype=np.int16)
    for i in range(e):
        count += vertex[i] & (label[i] == i)
    return count


def _classes(fs: Sequence[Factorization]) -> List[List[Factorization]]:
    """Group factorizations into classes linked by a chain of shared generators."""
    parent = list(range(len(fs)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in itertools.combinations(range(len(fs)), 2):
        if any(x and y for x, y in zip(fs[a], fs[b])):
            parent[find(a)] = find(b)
    groups: Dict[int, List[Factorization]] = {}
    for idx, f in enumerate(fs):
        groups.setdefault(find(idx), []).append(f)
    return sorted(groups.values(), key=lambda g: max(g), reverse=True)


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[int, ...]
    betti_elements: Tuple[int, ...]
    relations: Tuple[Tuple[int, Tuple[Factorization, Factorization]], ...]
    uniquely_presented: bool

    def to_json(self):
        return {
            "generators": list(self.generators),
            "betti_elements": list(self.betti_elements),
            "relations": [[list(u), list(v)] for _, (u, v) in self.relations],
            "uniquely_presented": self.uniquely_presented,
        }


def betti_elements(S: NumericalSemigroup) -> Tuple[int, ...]:
    return _betti_from_counts(_betti_scan(S))


def _betti_from_counts(counts: np.ndarray) -> Tuple[int, ...]:
    return tuple(int(b) for b in np.flatnonzero(counts >= 2))


def betti_and_presentation(S: NumericalSemigroup) -> Presentation:
    """Betti elements with a minimal presentation: relations spanning each one's classes."""
    relations = []
    unique = True
    counts = _betti_scan(S)
    betti = _betti_from_counts(counts)
    for b in betti:
        fs = factorizations(S, b).factorizations
        classes = _classes(fs)
        if len(classes) != counts[b]:
            raise RuntimeError(
                f"{b} has {len(classes)} classes of factorizations, scan found {counts[b]}"
            )
        reps = [c[0] for c in classes]
        relations.extend((b, (reps[0], r)) for r in reps[1:])
        unique = unique and len(fs) == 2 and len(classes) == 2
    return Presentation(S.minimal_generators, betti, tuple(relations), unique)


def is_uniquely_presented(S: NumericalSemigroup) -> bool:
    return betti_and_presentation(S).uniquely_presented


def _element_catenary(fs: Sequence[Factorization]) -> int:
    if len(fs) < 2:
        return 0
    parent = list(range(len(fs)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pairs = sorted(
        (distance(fs[a], fs[b]), a, b)
        for a, b in itertools.combinations(range(len(fs)), 2)
    )
    components = len(fs)
    for d, a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            components -= 1
            if components == 1:
                return d
    raise RuntimeError("factorization graph did not connect")


@dataclass(frozen=True)
class FactorizationInvariants:
    delta_min: Optional[int]
    delta_max: Optional[int]
    catenary: int


def delta_and_catenary(S: NumericalSemigroup) -> FactorizationInvariants:
    """
    Delta set bounds and catenary degree, both attained at Betti elements.

    ``delta_min`` is the gcd of the length differences found there and
    ``delta_max`` the largest of them.
    """
    steps = set()
    catenary = 0
    for b in betti_elements(S):
        fs = factorizations(S, b)
        lengths = fs.lengths
        steps.update(y - x for x, y in zip(lengths, lengths[1:]))
        catenary = max(catenary, _element_catenary(fs.factorizations))
    if not steps:
        return FactorizationInvariants(None, None, catenary)
    return FactorizationInvariants(math.gcd(*steps), max(steps), catenary)


@dataclass(frozen=True)
class Gluing:
    semigroup: NumericalSemigroup
    parts: Tuple[Tuple[int, ...], Tuple[int, ...]]
    lam: int
    mu: int
    relation: Tuple[Factorization, Factorization]


def glue(
    S1: NumericalSemigroup, S2: NumericalSemigroup, lam: int, mu: int
) -> Gluing:
    """
    The gluing lam S1 + mu S2.

    Requires lam in S2 and mu in S1, neither a minimal generator, and
    gcd(lam, mu) = 1. The gluing relation identifies mu in S1 (scaled by
    lam) with lam in S2 (scaled by mu).
    """
    if lam not in S2 or lam in S2.minimal_generators:
        raise ValueError(f"lam = {lam} must be a non-generator element of {S2}")
    if mu not in S1 or mu in S1.minimal_generators:
        raise ValueError(f"mu = {mu} must be a non-generator element of {S1}")
    if math.gcd(lam, mu) != 1:
        raise ValueError(f"gcd({lam}, {mu}) must be 1")
    A1 = tuple(lam * g for g in S1.minimal_generators)
    A2 = tuple(mu * g for g in S2.minimal_generators)
    S = NumericalSemigroup(A1 + A2, S1.config)
    u = factorizations(S1, mu).factorizations[0]
    v = factorizations(S2, lam).factorizations[0]
    return Gluing(S, (A1, A2), lam, mu, (u, v))


def detect_gluing(
    S: NumericalSemigroup,
) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Partitions (A1, A2) of the minimal generators exhibiting S as a gluing."""
    gens = S.minimal_generators
    e = len(gens)
    out = []
    for size in range(0, e - 1):
        for rest in itertools.combinations(range(1, e), size):
            idx1 = (0,) + rest
            A1 = tuple(gens[i] for i in idx1)
            A2 = tuple(gens[i] for i in range(e) if i not in idx1)
            d1, d2 = gcd_all(A1), gcd_all(A2)
            if math.gcd(d1, d2) != 1:
                continue
            B1 = tuple(g // d1 for g in A1)
            B2 = tuple(g // d2 for g in A2)
            if d1 in B2 or d2 in B1:
                continue
            if d1 in _Sieve(B2) and d2 in _Sieve(B1):
                out.append((A1, A2))
    return out


def critical_exponents(S: NumericalSemigroup) -> Tuple[int, ...]:
    """Least c_i with c_i g_i in the monoid spanned by the other minimal generators."""
    gens = S.minimal_generators
    if len(gens) == 1:
        return ()
    out = []
    for i, g in enumerate(gens):
        others = _Sieve(gens[:i] + gens[i + 1 :], S.config.initial_capacity)
        k = 1
        while k * g not in others:
            k += 1
        out.append(k)
    return tuple(out)


def is_critical(S: NumericalSemigroup) -> Optional[bool]:
    """
    Can S be minimally presented by relations c_i g_i = (factorization avoiding g_i)?

    At every Betti element b, the pure powers c_i g_i = b together with one
    chosen partner each must join all classes of factorizations of b.
    ``None`` means a search exceeded ``config.critical_search_cap`` choices
    without finding a failure.
    """
    gens = S.minimal_generators
    if len(gens) == 1:
        return False
    crit = critical_exponents(S)
    degrees = [c * g for c, g in zip(crit, gens)]
    undecided = False
    for b in betti_elements(S):
        indices = [i for i, d in enumerate(degrees) if d == b]
        if not indices:
            return False
        fs = factorizations(S, b).factorizations
        classes = _classes(fs)
        where = {f: k for k, cls in enumerate(classes) for f in cls}
        pure = []
        choices = []
        for i in indices:
            pure.append(where[tuple(crit[i] if j == i else 0 for j in range(len(gens)))])
            choices.append(sorted({where[f] for f in fs if f[i] == 0}))
        size = math.prod(len(c) for c in choices)
        if size > S.config.critical_search_cap:
            warnings.warn(
                f"criticality search at {b} needs {size} choices, above the cap; result is inconclusive"
            )
            undecided = True
            continue
        if not _some_choice_connects(len(classes), pure, choices):
            return False
    return None if undecided else True


def _some_choice_connects(k: int, pure: List[int], choices: List[List[int]]) -> bool:
    for pick in itertools.product(*choices):
        parent = list(range(k))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for p, q in zip(pure, pick):
            ra, rb = find(p), find(q)
            if ra != rb:
                parent[ra] = rb
        if len({find(x) for x in range(k)}) == 1:
            return True
    return False


def wilf_margin(S: NumericalSemigroup) -> int:
    inv = basic_invariants(S)
    return S.embedding_dimension * (S.conductor - inv.genus) - S.conductor
