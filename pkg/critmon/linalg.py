"""Exact integer linear algebra: Smith normal form and row-lattice membership."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .utils import as_int_matrix, freeze, int_identity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmithDecomposition:
    """
    ``U @ M @ V == D`` with ``U`` and ``V`` unimodular and ``D`` diagonal.

    ``V_inv`` is the inverse of ``V``, maintained alongside it so that
    lattice vectors can be moved back to the original coordinates.
    The nonzero invariant factors are positive and each divides the next.
    """

    U: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    V_inv: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)
    invariant_factors: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


def _swap_rows(A, i, j):
    if i != j:
        A[[i, j], :] = A[[j, i], :]


def _swap_cols(A, i, j):
    if i != j:
        A[:, [i, j]] = A[:, [j, i]]


def _pivot_position(S, t) -> Optional[Tuple[int, int]]:
    # smallest nonzero absolute value in the trailing block
    best = None
    rows, cols = S.shape
    for i in range(t, rows):
        for j in range(t, cols):
            v = S[i, j]
            if v != 0 and (best is None or abs(v) < abs(S[best])):
                best = (i, j)
    return best


def _nondivisible_entry(S, t) -> Optional[int]:
    p = S[t, t]
    rows, cols = S.shape
    for i in range(t + 1, rows):
        for j in range(t + 1, cols):
            if S[i, j] % p != 0:
                return i
    return None


def smith_normal_form(M) -> SmithDecomposition:
    """
    Smith normal form of an integer matrix.

    :param M: integer matrix (nested sequence or object array)
    :return: :class:`SmithDecomposition` with the transforms and invariant factors
    """
    M0 = as_int_matrix(M)
    S = as_int_matrix(M0, writeable=True)
    rows, cols = S.shape
    U = int_identity(rows)
    V = int_identity(cols)
    V_inv = int_identity(cols)

    for t in range(min(rows, cols)):
        pos = _pivot_position(S, t)
        if pos is None:
            break
        while pos is not None:
            i, j = pos
            _swap_rows(S, t, i)
            _swap_rows(U, t, i)
            _swap_cols(S, t, j)
            _swap_cols(V, t, j)
            _swap_rows(V_inv, t, j)
            p = S[t, t]
            dirty = False
            for i in range(t + 1, rows):
                q = S[i, t] // p
                if q:
                    S[i, :] -= q * S[t, :]
                    U[i, :] -= q * U[t, :]
                dirty = dirty or S[i, t] != 0
            for j in range(t + 1, cols):
                q = S[t, j] // p
                if q:
                    S[:, j] -= q * S[:, t]
                    V[:, j] -= q * V[:, t]
                    V_inv[t, :] += q * V_inv[j, :]
                dirty = dirty or S[t, j] != 0
            if dirty:
                pos = _pivot_position(S, t)
                continue
            bad = _nondivisible_entry(S, t)
            if bad is None:
                break
            # pull a row with a nondivisible entry into the pivot row
            S[t, :] += S[bad, :]
            U[t, :] += U[bad, :]
            pos = _pivot_position(S, t)
        if S[t, t] < 0:
            S[t, :] = -S[t, :]
            U[t, :] = -U[t, :]

    if not np.array_equal(U.dot(M0).dot(V), S):
        raise RuntimeError("Smith normal form does not reproduce U M V = D")
    if not np.array_equal(V.dot(V_inv), int_identity(cols)):
        raise RuntimeError("V_inv is not the inverse of V")
    factors = tuple(int(S[k, k]) for k in range(min(rows, cols)))
    logger.debug("invariant factors %s", factors)
    return SmithDecomposition(
        U=freeze(U),
        V=freeze(V),
        V_inv=freeze(V_inv),
        D=freeze(S),
        invariant_factors=factors,
    )


def row_lattice_contains(
    M, v: Sequence[int], smith: Optional[SmithDecomposition] = None
) -> bool:
    """
    Is ``v`` an integer combination of the rows of ``M``?

    ``v`` is in the row lattice iff ``y = v V`` has ``y_k`` divisible by
    ``d_k`` for every nonzero invariant factor and ``y_k = 0`` elsewhere.

    :param smith: precomputed decomposition of ``M``, if available
    """
    M = as_int_matrix(M)
    v = np.array([int(x) for x in v], dtype=object)
    if v.shape != (M.shape[1],):
        raise ValueError(
            f"vector of length {v.shape[0]} does not match {M.shape[1]} columns"
        )
    if smith is None:
        smith = smith_normal_form(M)
    y = v.dot(smith.V)
    d = smith.invariant_factors
    for k, yk in enumerate(y):
        dk = d[k] if k < len(d) else 0
        if dk == 0:
            if yk != 0:
                return False
        elif yk % dk != 0:
            return False
    return True
