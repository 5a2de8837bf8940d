# coding:utf8
"""
Who is selected, and who of them trains.
"""
from typing import FrozenSet, Optional, Sequence

import numpy as np

from ccfedsim.fl.client import ClientRecord
from ccfedsim.fl.method import AD_HOC, ROUND_ROBIN

TRAIN = "train"
ESTIMATE = "estimate"


def select_clients(
    n_clients: int, ratio: float, rng: np.random.Generator, pool: Optional[Sequence[int]] = None
) -> FrozenSet[int]:
    """
        Uniform sample without replacement of round(ratio * N) clients
    Args:
        n_clients: N
        ratio: participation fraction in (0, 1]
        rng:
        pool: selectable ids, default all; a smaller pool caps the sample size

    Returns:

    """
    if not 0.0 < ratio <= 1.0:
        raise ValueError("ratio must be in (0, 1]: {}".format(ratio))
    m = max(1, int(round(ratio * n_clients)))
    pool = np.arange(n_clients) if pool is None else np.array(sorted(pool), dtype=np.int64)
    if pool.size == 0:
        return frozenset()
    chosen = rng.choice(pool, size=min(m, pool.size), replace=False)
    return frozenset(int(i) for i in chosen)


def decide_participation(client: ClientRecord, schedule: str, rng: Optional[np.random.Generator] = None) -> str:
    """
        round_robin: train iff rr_counter mod round(1/p) == 0, the counter moves on every selection
        ad_hoc: train iff U[0, 1) < p
    """
    client.selections += 1
    if schedule == ROUND_ROBIN:
        train = client.rr_counter % client.period == 0
        client.rr_counter += 1
        return TRAIN if train else ESTIMATE
    if schedule == AD_HOC:
        if rng is None:
            raise ValueError("ad_hoc schedule needs a generator")
        return TRAIN if rng.uniform() < client.p else ESTIMATE
    raise ValueError("unknown schedule: {}".format(schedule))


def synchronized_decision(t: int, W: int) -> str:
    """everyone trains on rounds t = 0 (mod W) and estimates otherwise"""
    return TRAIN if t % W == 0 else ESTIMATE
