# coding:utf8
"""
Local estimation: a skipping client's contribution without SGD.

A client that has never trained contributes a zero update, i.e. it returns x_t.
Stored updates are reused as they are, however many rounds in a row are skipped.
"""
from typing import Optional

from ccfedsim.exceptions import EstimationError
from ccfedsim.fl.client import HistoryEntry
from ccfedsim.params import ParamVec


def _cold_start(dim: int, cold_start: bool, what: str) -> ParamVec:
    if not cold_start:
        raise EstimationError("no stored {} and cold start is disabled".format(what))
    return ParamVec.zeros(dim)


def estimate_strategy3(history: Optional[HistoryEntry], dim: int, cold_start: bool = True) -> ParamVec:
    """Delta_t = Delta_{t-1}"""
    if history is None:
        return _cold_start(dim, cold_start, "update")
    return history.delta


def estimate_strategy2(history: Optional[HistoryEntry], x_t: ParamVec, cold_start: bool = True) -> ParamVec:
    """the last local model x_{t-1,K}, written as a displacement from x_t"""
    if history is None:
        return _cold_start(x_t.dim, cold_start, "local model")
    return history.local_model - x_t


def estimate_combined(
    history: Optional[HistoryEntry], x_t: ParamVec, t: int, tau: int, cold_start: bool = True
) -> ParamVec:
    """update reuse before round tau, stale model from round tau on"""
    if t < tau:
        return estimate_strategy3(history, x_t.dim, cold_start=cold_start)
    return estimate_strategy2(history, x_t, cold_start=cold_start)
