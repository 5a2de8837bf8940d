# coding:utf8
"""
Shadow training: the counterfactual local training of a skipping client,
used only to measure how far the Strategy-2 and Strategy-3 estimates are
from the model the client would have trained. It replays the client's own
train stream and never touches protocol state.
"""
from dataclasses import dataclass
from typing import Optional

from ccfedsim import params
from ccfedsim.fl.client import HistoryEntry
from ccfedsim.fl.local import local_train
from ccfedsim.objectives import Objective
from ccfedsim.params import ParamVec
from ccfedsim.utils import rng as rngs


@dataclass(frozen=True)
class ShadowResult(object):
    e2: Optional[float] = None
    e3: Optional[float] = None
    c2: Optional[float] = None
    c3: Optional[float] = None


def _cosine_or_none(a: ParamVec, b: ParamVec) -> Optional[float]:
    try:
        return params.cosine(a, b)
    except ValueError:
        return None


def shadow_true_delta(
    x_t: ParamVec, obj: Objective, K: int, eta: float, batch_size: int, seed: int, client_id: int, t: int
) -> ParamVec:
    delta, _ = local_train(
        x_t, obj, K, eta, batch_size, rngs.stream(seed, rngs.TRAIN, client_id, t), round_idx=t, client_id=client_id
    )
    return delta


def shadow_estimation_error(history: Optional[HistoryEntry], x_t: ParamVec, true_delta: ParamVec) -> ShadowResult:
    """
        e3 = |x_t + true_delta - (x_t + Delta_{t-1})|^2
        e2 = |x_t + true_delta - x_{t-1,K}|^2
        c3 = cos(true_delta, Delta_{t-1})
        c2 = cos(true_delta, x_{t-1,K} - x_t)
    Returns:
        every field is None when no stored state exists
    """
    if history is None:
        return ShadowResult()
    true_model = x_t + true_delta
    s3_model = x_t + history.delta
    return ShadowResult(
        e2=params.l2_dist_sq(true_model, history.local_model),
        e3=params.l2_dist_sq(true_model, s3_model),
        c2=_cosine_or_none(true_delta, history.local_model - x_t),
        c3=_cosine_or_none(true_delta, history.delta),
    )
