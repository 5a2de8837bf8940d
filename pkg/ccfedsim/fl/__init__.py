# coding:utf8
from ccfedsim.fl.aggregate import ALL_SELECTED, RECEIVED_ONLY, aggregate, fednova_aggregate, normalize_update
from ccfedsim.fl.client import ClientRecord, GlobalState, HistoryEntry, RoundOutcome
from ccfedsim.fl.estimate import estimate_combined, estimate_strategy2, estimate_strategy3
from ccfedsim.fl.local import local_train
from ccfedsim.fl.method import MethodSpec
from ccfedsim.fl.schedule import ESTIMATE, TRAIN, decide_participation, select_clients
from ccfedsim.fl.server import Hyper, Simulator, fedopt_sync_round, run_round

__all__ = [
    "ALL_SELECTED",
    "RECEIVED_ONLY",
    "ESTIMATE",
    "TRAIN",
    "ClientRecord",
    "GlobalState",
    "HistoryEntry",
    "Hyper",
    "MethodSpec",
    "RoundOutcome",
    "Simulator",
    "aggregate",
    "decide_participation",
    "estimate_combined",
    "estimate_strategy2",
    "estimate_strategy3",
    "fednova_aggregate",
    "fedopt_sync_round",
    "local_train",
    "normalize_update",
    "run_round",
    "select_clients",
]
