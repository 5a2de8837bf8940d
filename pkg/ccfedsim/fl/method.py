# coding:utf8
"""
Method labels.

    fedavg_full, fedavg_dropout, strategy1, strategy2, cc_fedavg,
    cc_fedavg_combined[:tau], fednova, fedopt_sync[:W]
"""
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional

FEDAVG_FULL = "fedavg_full"
FEDAVG_DROPOUT = "fedavg_dropout"
STRATEGY1 = "strategy1"
STRATEGY2 = "strategy2"
CC_FEDAVG = "cc_fedavg"
CC_FEDAVG_COMBINED = "cc_fedavg_combined"
FEDNOVA = "fednova"
FEDOPT_SYNC = "fedopt_sync"

METHODS = (
    FEDAVG_FULL,
    FEDAVG_DROPOUT,
    STRATEGY1,
    STRATEGY2,
    CC_FEDAVG,
    CC_FEDAVG_COMBINED,
    FEDNOVA,
    FEDOPT_SYNC,
)

# methods that reuse a stored update and therefore need a backup location
ESTIMATING_METHODS = (STRATEGY2, CC_FEDAVG, CC_FEDAVG_COMBINED, FEDOPT_SYNC)

CLIENT_BACKUP = "client_backup"
SERVER_BACKUP = "server_backup"
MIXED = "mixed"
VARIANTS = (CLIENT_BACKUP, SERVER_BACKUP, MIXED)

ROUND_ROBIN = "round_robin"
AD_HOC = "ad_hoc"
SCHEDULES = (ROUND_ROBIN, AD_HOC)


@dataclass(frozen=True)
class MethodSpec(object):
    """
    Examples:
        >>> MethodSpec.parse("cc_fedavg_combined:100").tau
        100
        >>> MethodSpec.parse("fedopt_sync:4").label
        'fedopt_sync:4'
    """

    method: str
    variant: str = CLIENT_BACKUP
    schedule: str = AD_HOC
    tau: Optional[int] = None
    W: Optional[int] = None
    # mixed variant: clients whose history is kept by the server
    backup_set: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError("unknown method: {}".format(self.method))
        if self.variant not in VARIANTS:
            raise ValueError("unknown variant: {}".format(self.variant))
        if self.schedule not in SCHEDULES:
            raise ValueError("unknown schedule: {}".format(self.schedule))
        if self.method == CC_FEDAVG_COMBINED:
            if self.tau is None or self.tau < 0:
                raise ValueError("cc_fedavg_combined needs tau >= 0, got {}".format(self.tau))
        if self.method == FEDOPT_SYNC:
            if self.W is None or self.W < 1:
                raise ValueError("fedopt_sync needs W >= 1, got {}".format(self.W))
        object.__setattr__(self, "backup_set", frozenset(int(i) for i in self.backup_set))

    @classmethod
    def parse(
        cls,
        label: str,
        *,
        variant: str = CLIENT_BACKUP,
        schedule: str = AD_HOC,
        tau: Optional[int] = None,
        W: Optional[int] = None,
        backup_set: Iterable[int] = (),
    ) -> "MethodSpec":
        """
            ``name[:arg]``; the inline argument wins over ``tau`` / ``W``
        """
        name, _, arg = label.strip().partition(":")
        if arg:
            if name == CC_FEDAVG_COMBINED:
                tau = int(arg)
            elif name == FEDOPT_SYNC:
                W = int(arg)
            else:
                raise ValueError("method {} takes no argument: {}".format(name, label))
        return cls(
            method=name,
            variant=variant,
            schedule=schedule,
            tau=tau if name == CC_FEDAVG_COMBINED else None,
            W=W if name == FEDOPT_SYNC else None,
            backup_set=frozenset(backup_set),
        )

    @property
    def label(self) -> str:
        if self.method == CC_FEDAVG_COMBINED:
            return "{}:{}".format(self.method, self.tau)
        if self.method == FEDOPT_SYNC:
            return "{}:{}".format(self.method, self.W)
        return self.method

    def history_on_server(self, client_id: int) -> bool:
        """where the stored update of a client lives"""
        if self.variant == SERVER_BACKUP:
            return True
        if self.variant == MIXED:
            return client_id in self.backup_set
        return False
