# coding:utf8
"""
Gaussian class-conditional clusters.
"""
from typing import Tuple

import numpy as np

from ccfedsim.utils import rng as rngs


def generate_synthetic(
    n_samples: int,
    input_dim: int,
    n_classes: int,
    seed: int,
    cluster_std: float = 0.5,
) -> Tuple[np.ndarray, np.ndarray]:
    """
        Class c center ~ N(0, I), samples ~ N(center_c, cluster_std^2 I).
        Class counts are stratified exactly: n_samples // n_classes each,
        the remainder goes to the lowest classes.
    Args:
        n_samples:
        input_dim:
        n_classes:
        seed:
        cluster_std:

    Returns:
        (features, labels)
    """
    if n_classes < 2:
        raise ValueError("n_classes must be >= 2: {}".format(n_classes))
    if n_samples < 1 or input_dim < 1:
        raise ValueError("sizes must be positive: n_samples={}, input_dim={}".format(n_samples, input_dim))
    if cluster_std <= 0:
        raise ValueError("cluster_std must be positive: {}".format(cluster_std))
    rng = rngs.stream(seed, rngs.DATA)
    centers = rng.standard_normal((n_classes, input_dim))
    counts = np.full(n_classes, n_samples // n_classes)
    counts[: n_samples % n_classes] += 1
    labels = rng.permutation(np.repeat(np.arange(n_classes), counts))
    features = centers[labels] + cluster_std * rng.standard_normal((n_samples, input_dim))
    return features, labels.astype(np.int64)


def train_test_split(
    features: np.ndarray, labels: np.ndarray, test_fraction: float, seed: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
        Stratified split, round(test_fraction * count) of every class is held out
    Returns:
        (train_features, train_labels, test_features, test_labels)
    """
    if not 0 < test_fraction < 1:
        raise ValueError("test_fraction must be in (0, 1): {}".format(test_fraction))
    rng = rngs.stream(seed, rngs.DATA, 1)
    test_ids = []
    for c in np.unique(labels):
        ids = rng.permutation(np.flatnonzero(labels == c))
        test_ids.append(ids[: int(round(test_fraction * ids.size))])
    test_mask = np.zeros(labels.size, dtype=bool)
    test_mask[np.concatenate(test_ids)] = True
    return features[~test_mask], labels[~test_mask], features[test_mask], labels[test_mask]
