# coding:utf8
"""
Objective: the f_i of one client.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ccfedsim.exceptions import DimensionError
from ccfedsim.params import ParamVec


@dataclass(frozen=True)
class GradSample(object):
    """One realisation of a stochastic gradient"""

    grad: ParamVec
    loss: float
    batch_ids: Tuple[int, ...] = field(default_factory=tuple)


class Objective(object):
    """
    Base class of every task. Objectives are read-only after construction;
    all randomness comes from the generator passed in.
    """

    kind = ""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("objective dim must be positive: {}".format(dim))
        self.dim = int(dim)

    def __repr__(self):
        return "<{} dim={}>".format(self.__class__.__name__, self.dim)

    def check_dim(self, x: ParamVec):
        if x.dim != self.dim:
            raise DimensionError(x.dim, self.dim)

    def init_params(self, rng: Optional[np.random.Generator] = None) -> ParamVec:
        return ParamVec.zeros(self.dim)

    def loss(self, x: ParamVec) -> float:
        return self.evaluate(x)[0]

    def full_gradient(self, x: ParamVec) -> ParamVec:
        raise NotImplementedError

    def stochastic_gradient(self, x: ParamVec, batch_size: int, rng: np.random.Generator) -> GradSample:
        raise NotImplementedError

    def evaluate(self, x: ParamVec) -> Tuple[float, Optional[float]]:
        """
        Returns:
            (loss, accuracy) accuracy is None for regression kinds
        """
        raise NotImplementedError

    @property
    def size(self) -> int:
        """number of samples behind the objective, 0 when it has no data"""
        return 0
