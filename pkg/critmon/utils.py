import math
from typing import Iterable, Sequence, Tuple

import numpy as np


def as_int_matrix(rows, writeable: bool = False) -> np.ndarray:
    """
    Build an exact integer matrix: a 2D numpy array of python ints.

    :param rows: nested sequence (or array) of integers
    :param writeable: leave the result mutable (used internally by elimination)
    """
    A = np.array([[int(x) for x in row] for row in rows], dtype=object)
    if A.ndim != 2 or A.size == 0:
        raise ValueError("matrix must be two-dimensional with at least one entry")
    A.flags.writeable = writeable
    return A


def int_identity(n: int) -> np.ndarray:
    A = np.zeros((n, n), dtype=object)
    for i in range(n):
        A[i, i] = 1
    return A


def freeze(A: np.ndarray) -> np.ndarray:
    A.flags.writeable = False
    return A


def gcd_all(values: Iterable[int]) -> int:
    return math.gcd(*[int(v) for v in values])


def prod(values: Iterable[int]) -> int:
    return math.prod(int(v) for v in values)


def parse_int_list(s: str) -> Tuple[int, ...]:
    """Parse a comma-separated list such as ``"1,2,3"``."""
    try:
        return tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {s!r}")


def format_monomial(u: Sequence[int], var: str = "x") -> str:
    parts = []
    for i, k in enumerate(u):
        if k == 1:
            parts.append(f"{var}_{i + 1}")
        elif k > 1:
            parts.append(f"{var}_{i + 1}^{k}")
    return "".join(parts) if parts else "1"


def format_binomial(lhs: Sequence[int], rhs: Sequence[int]) -> str:
    return f"{format_monomial(lhs)}-{format_monomial(rhs)}"


def distance(u: Sequence[int], v: Sequence[int]) -> int:
    """max(|u - u^v|, |v - u^v|) with u^v the componentwise minimum"""
    common = [min(a, b) for a, b in zip(u, v)]
    return max(sum(u) - sum(common), sum(v) - sum(common))
