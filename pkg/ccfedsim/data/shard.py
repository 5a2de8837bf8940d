# coding:utf8
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class DataShard(object):
    """
    Local dataset of one client. ``client_id`` is -1 for the global test set.
    """

    features: np.ndarray
    labels: np.ndarray
    client_id: int = -1

    def __post_init__(self):
        features = np.array(self.features, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64).reshape(-1)
        if features.ndim != 2:
            raise ValueError("features must be a matrix, got shape {}".format(features.shape))
        if features.shape[0] != labels.size:
            raise ValueError("{} feature rows but {} labels".format(features.shape[0], labels.size))
        if labels.size < 1:
            raise ValueError("shard of client {} is empty".format(self.client_id))
        if labels.min() < 0:
            raise ValueError("negative label in shard of client {}".format(self.client_id))
        features.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.labels.size

    def __repr__(self):
        return "<DataShard client={} n={} classes={}>".format(
            self.client_id, len(self), sorted(set(self.labels.tolist()))
        )

    def label_distribution(self, n_classes: int) -> np.ndarray:
        return np.bincount(self.labels, minlength=n_classes) / len(self)
