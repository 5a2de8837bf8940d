# coding:utf8
from typing import Optional, Tuple

import numpy as np

from ccfedsim import setting
from ccfedsim.exceptions import DivergenceError
from ccfedsim.objectives import Objective
from ccfedsim.params import ParamVec


def local_train(
    x_t: ParamVec,
    obj: Objective,
    K: int,
    eta: float,
    batch_size: int,
    rng: np.random.Generator,
    *,
    round_idx: Optional[int] = None,
    client_id: Optional[int] = None,
    limit: float = setting.divergence_limit,
) -> Tuple[ParamVec, ParamVec]:
    """
        K SGD steps from x_t: x_{k+1} = x_k - eta * g_k
    Args:
        x_t: global model, the start point
        obj: the client's objective
        K: local steps
        eta: local learning rate
        batch_size: clamped to the shard size
        rng: the client's train stream for this round
        round_idx: only used in error reports
        client_id: only used in error reports
        limit: any |parameter| above it is divergence

    Returns:
        (x_K - x_t, x_K)

    """
    if K < 1:
        raise ValueError("K must be >= 1: {}".format(K))
    if not (eta >= 0 and np.isfinite(eta)):
        raise ValueError("eta must be finite and >= 0: {}".format(eta))
    obj.check_dim(x_t)
    if obj.size:
        batch_size = min(batch_size, obj.size)

    x = x_t.to_numpy()
    for k in range(K):
        sample = obj.stochastic_gradient(ParamVec(x), batch_size, rng)
        x = x - eta * sample.grad.values
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > limit:
            raise DivergenceError(
                "local model left the finite range",
                round=round_idx,
                client=client_id,
                step=k,
            )
    final_model = ParamVec(x)
    return ParamVec(x - x_t.values), final_model
