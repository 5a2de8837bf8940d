# coding:utf8
"""
Computation budgets p_i: how often client i can afford local training.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ccfedsim.utils import rng as rngs


@dataclass(frozen=True)
class BudgetAssignment(object):
    p: Tuple[float, ...]
    beta: Optional[int] = None

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if not p:
            raise ValueError("budget vector is empty")
        for i, x in enumerate(p):
            if not (0.0 < x <= 1.0):
                raise ValueError("p[{}] must be in (0, 1]: {}".format(i, x))
        object.__setattr__(self, "p", p)

    def __len__(self):
        return len(self.p)

    @property
    def n_clients(self) -> int:
        return len(self.p)

    @property
    def r(self) -> float:
        """fraction of clients with insufficient budget"""
        return sum(1 for x in self.p if x < 1.0) / len(self.p)

    @property
    def W(self) -> Tuple[int, ...]:
        """round(1/p_i), the rounds between two trainings in expectation"""
        return tuple(int(round(1.0 / x)) for x in self.p)


def assign_budgets(n_clients: int, beta: int) -> BudgetAssignment:
    """
        p_i = (1/2) ** floor(beta * i / N), clients indexed from 0
    Args:
        n_clients: N
        beta: number of resource levels, 1 <= beta <= N

    Returns:

    """
    if n_clients < 1:
        raise ValueError("N must be >= 1: {}".format(n_clients))
    if not 1 <= beta <= n_clients:
        raise ValueError("beta must be in [1, {}]: {}".format(n_clients, beta))
    p = tuple(0.5 ** ((beta * i) // n_clients) for i in range(n_clients))
    return BudgetAssignment(p=p, beta=beta)


def two_group_budgets(n_clients: int, r: float, W: int) -> BudgetAssignment:
    """
        The last round(r * N) clients get p = 1/W, the others p = 1
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must be in [0, 1]: {}".format(r))
    if W < 1:
        raise ValueError("W must be >= 1: {}".format(W))
    n_low = int(round(r * n_clients))
    p = tuple(1.0 if i < n_clients - n_low else 1.0 / W for i in range(n_clients))
    return BudgetAssignment(p=p)


def explicit_budgets(p_list: Sequence[float]) -> BudgetAssignment:
    return BudgetAssignment(p=tuple(p_list))


def shuffle_budgets(budgets: BudgetAssignment, seed: int) -> BudgetAssignment:
    """random placement of the same budget levels over clients"""
    rng = rngs.stream(seed, rngs.BUDGET)
    p = np.array(budgets.p)[rng.permutation(len(budgets.p))]
    return BudgetAssignment(p=tuple(p.tolist()), beta=budgets.beta)


def full_budget_count(n_clients: int, beta: int) -> int:
    """ceil(N / beta) clients keep p = 1"""
    return math.ceil(n_clients / beta)
