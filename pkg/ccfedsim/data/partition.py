# coding:utf8
"""
gamma-controlled label-skew partitioning.

A (1 - gamma) share of the samples is sorted by label and cut into
n_clients * classes_per_client contiguous blocks; client j receives blocks
j, j + N, j + 2N, ... so the lowest labels go to the lowest client ids and
each client sees classes_per_client labels. The gamma share is the head of
one seeded permutation of the whole dataset, dealt round-robin.
gamma=0 is totally non-IID, gamma=1 is IID.
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from ccfedsim.data.shard import DataShard
from ccfedsim.utils import log
from ccfedsim.utils import rng as rngs

logger = log.get_logger(__file__)


@dataclass(frozen=True)
class PartitionPlan(object):
    gamma: float
    n_clients: int
    classes_per_client: int = 2
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must be in [0, 1]: {}".format(self.gamma))
        if self.n_clients < 1:
            raise ValueError("n_clients must be >= 1: {}".format(self.n_clients))
        if self.classes_per_client < 1:
            raise ValueError("classes_per_client must be >= 1: {}".format(self.classes_per_client))


def partition(features: np.ndarray, labels: np.ndarray, plan: PartitionPlan) -> List[DataShard]:
    """
        Split a dataset into disjoint client shards
    Args:
        features: (n, input_dim)
        labels: (n,)
        plan:

    Returns:
        one DataShard per client, indices inside a shard keep input order

    """
    labels = np.asarray(labels)
    n = labels.size
    n_classes = np.unique(labels).size
    if plan.classes_per_client > n_classes:
        raise ValueError(
            "classes_per_client ({}) > number of classes ({})".format(plan.classes_per_client, n_classes)
        )
    if n < plan.n_clients:
        raise ValueError("{} samples cannot cover {} clients".format(n, plan.n_clients))

    rng = rngs.stream(plan.seed, rngs.PARTITION)
    perm = rng.permutation(n)
    n_iid = int(round(plan.gamma * n))
    iid_pool, skew_pool = perm[:n_iid], perm[n_iid:]

    assigned = [[] for _ in range(plan.n_clients)]

    # label-sorted blocks, random order inside each label
    if skew_pool.size:
        ordered = skew_pool[np.argsort(labels[skew_pool], kind="stable")]
        blocks = np.array_split(ordered, plan.n_clients * plan.classes_per_client)
        for j in range(plan.n_clients):
            for m in range(plan.classes_per_client):
                assigned[j].append(blocks[j + m * plan.n_clients])

    # round-robin deal of the shuffled iid share
    for j in range(plan.n_clients):
        assigned[j].append(iid_pool[j :: plan.n_clients])

    shards = []
    for j in range(plan.n_clients):
        ids = np.sort(np.concatenate(assigned[j]).astype(np.int64))
        if ids.size == 0:
            raise ValueError("client {} received no samples, use fewer clients or more data".format(j))
        shards.append(DataShard(features=features[ids], labels=labels[ids], client_id=j))

    covered = sum(len(s) for s in shards)
    if covered != n:
        raise RuntimeError("partition covers {} of {} samples".format(covered, n))
    logger.debug("partitioned {} samples over {} clients, gamma={}".format(n, plan.n_clients, plan.gamma))
    return shards


def partition_indices(labels: np.ndarray, plan: PartitionPlan) -> List[np.ndarray]:
    """same split as ``partition`` but returns the index sets"""
    ids = np.arange(np.asarray(labels).size, dtype=np.float64).reshape(-1, 1)
    return [s.features[:, 0].astype(np.int64) for s in partition(ids, labels, plan)]
