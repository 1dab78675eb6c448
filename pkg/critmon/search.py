import logging
import warnings
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import jax
import numpy as np

from .northcott import MonoidPresentation, NorthcottExponents, monoid_presentation

logger = logging.getLogger(__name__)


@dataclass
class SearchConfig:
    n: int = 4
    max_exp: int = 3
    count: int = 10
    numerical_only: bool = False
    # keep only instances whose last generator a_n is at most this
    max_an: Optional[int] = None
    mvec_ones: bool = False
    batch_size: int = 64
    max_draws: int = 100000


def _draw_batch(key, config: SearchConfig) -> np.ndarray:
    # rows are (diag, xn, mvec)
    shape = (config.batch_size, 3, config.n - 1)
    return np.asarray(jax.random.randint(key, shape, 1, config.max_exp + 1))


def sample_instances(
    key, config: SearchConfig
) -> Iterator[Tuple[NorthcottExponents, MonoidPresentation]]:
    """
    Generate random instances with exponents in 1..max_exp that pass the filters.

    :param key: :class:`jax.random.PRNGKey` for PRNG
    :param config: :class:`SearchConfig`
    """
    if config.n < 3:
        raise ValueError(f"n must be at least 3, got {config.n}")
    if config.max_exp < 1:
        raise ValueError(f"max_exp must be positive, got {config.max_exp}")
    draws = 0
    while draws < config.max_draws:
        key, subkey = jax.random.split(key)
        for diag, xn, mvec in _draw_batch(subkey, config).tolist():
            draws += 1
            if config.mvec_ones:
                mvec = [1] * (config.n - 1)
            e = NorthcottExponents(config.n, tuple(diag), tuple(xn), tuple(mvec))
            pres = monoid_presentation(e)
            if config.numerical_only and not pres.is_numerical:
                continue
            if config.max_an is not None and pres.weight[-1] > config.max_an:
                continue
            yield e, pres
    warnings.warn(f"stopped after {draws} draws without reaching the requested count")


def random_instances(key, config: SearchConfig) -> List[NorthcottExponents]:
    out = []
    if config.count <= 0:
        return out
    for e, _ in sample_instances(key, config):
        out.append(e)
        if len(out) >= config.count:
            break
    logger.info("sampled %d instances with n=%d", len(out), config.n)
    return out
