# coding:utf8
from typing import Mapping, Optional, Tuple

from ccfedsim import params
from ccfedsim.params import ParamVec
from ccfedsim.utils import log

logger = log.get_logger(__file__)

ALL_SELECTED = "all_selected"
RECEIVED_ONLY = "received_only"


def aggregate(
    contributions: Mapping[int, ParamVec],
    mode: str = ALL_SELECTED,
    n_selected: Optional[int] = None,
    dim: Optional[int] = None,
) -> ParamVec:
    """
        Unweighted mean of the contributions, summed in ascending client id
    Args:
        contributions: client id -> update
        mode:
            all_selected: divide by n_selected (|S_t|)
            received_only: divide by the number of contributions
        n_selected: defaults to len(contributions)
        dim: needed to return a zero update when nothing was received

    Returns:

    """
    if mode not in (ALL_SELECTED, RECEIVED_ONLY):
        raise ValueError("unknown aggregation mode: {}".format(mode))
    if not contributions:
        if dim is None:
            raise ValueError("no contributions to aggregate")
        logger.warning("no contribution received this round, the global model stays put")
        return ParamVec.zeros(dim)
    ordered = [contributions[i] for i in sorted(contributions)]
    divisor = len(ordered)
    if mode == ALL_SELECTED and n_selected is not None:
        if n_selected < len(ordered):
            raise ValueError("{} contributions from {} selected clients".format(len(ordered), n_selected))
        divisor = n_selected
    return params.mean(ordered, divisor=divisor)


def normalize_update(delta: ParamVec, K_i: int, eta: float) -> ParamVec:
    """d_i = (x_t - x_{t,K_i}) / (eta * K_i)"""
    if K_i < 1:
        raise ValueError("K_i must be >= 1: {}".format(K_i))
    if eta <= 0:
        raise ValueError("eta must be > 0: {}".format(eta))
    return params.scale(delta, -1.0 / (eta * K_i))


def fednova_aggregate(normalized_updates: Mapping[int, Tuple[ParamVec, int]], eta: float) -> ParamVec:
    """
        Delta_t = -eta * tau_eff * mean_i d_i with tau_eff = mean_i K_i
    """
    if not normalized_updates:
        raise ValueError("no updates to aggregate")
    ids = sorted(normalized_updates)
    steps = [normalized_updates[i][1] for i in ids]
    if min(steps) < 1:
        raise ValueError("every K_i must be >= 1: {}".format(steps))
    tau_eff = sum(steps) / len(steps)
    d = params.mean([normalized_updates[i][0] for i in ids])
    return params.scale(d, -eta * tau_eff)
