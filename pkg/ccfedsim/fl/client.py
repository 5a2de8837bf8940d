# coding:utf8
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional

from ccfedsim.params import ParamVec


@dataclass(frozen=True)
class HistoryEntry(object):
    """What a client left behind after its last real training"""

    delta: ParamVec
    local_model: ParamVec


@dataclass
class ClientRecord(object):
    id: int
    p: float
    last_delta: Optional[ParamVec] = None
    last_local_model: Optional[ParamVec] = None
    rounds_trained: int = 0
    quota: Optional[int] = None
    rr_counter: int = 0
    selections: int = 0
    history_on_server: bool = False

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError("client {} budget must be in (0, 1]: {}".format(self.id, self.p))

    @property
    def period(self) -> int:
        """round-robin period round(1/p)"""
        return int(round(1.0 / self.p))

    @property
    def exhausted(self) -> bool:
        return self.quota is not None and self.rounds_trained >= self.quota


@dataclass
class GlobalState(object):
    x: ParamVec
    t: int = 0
    # server-side backups, keyed by client id
    history: Dict[int, HistoryEntry] = field(default_factory=dict)


def lookup_history(client: ClientRecord, state: GlobalState) -> Optional[HistoryEntry]:
    if client.history_on_server:
        return state.history.get(client.id)
    if client.last_delta is None:
        return None
    return HistoryEntry(delta=client.last_delta, local_model=client.last_local_model)


def store_history(client: ClientRecord, state: GlobalState, entry: HistoryEntry):
    if client.history_on_server:
        state.history[client.id] = entry
    else:
        client.last_delta = entry.delta
        client.last_local_model = entry.local_model


@dataclass(frozen=True)
class RoundOutcome(object):
    round: int
    selected: FrozenSet[int]
    contributions: Mapping[int, ParamVec]
    trained: FrozenSet[int]
    estimated: FrozenSet[int]
    skipped_entirely: FrozenSet[int]
    delta: ParamVec
    x_start: ParamVec
    x_next: ParamVec
    sgd_steps: int = 0

    def __post_init__(self):
        parts = (self.trained, self.estimated, self.skipped_entirely)
        if frozenset().union(*parts) != self.selected or sum(len(s) for s in parts) != len(self.selected):
            raise ValueError("trained, estimated and skipped must partition the selected set")
