# coding:utf8
"""
Shared machinery of the shard-backed classifiers.
"""
from typing import Optional, Tuple

import numpy as np

from ccfedsim.objectives.base import GradSample, Objective
from ccfedsim.params import ParamVec


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Returns:
        (mean loss, d loss / d logits)
    """
    n = logits.shape[0]
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)
    log_norm = np.log(exp.sum(axis=1))
    loss = float(np.mean(log_norm - shifted[np.arange(n), labels]))
    dlogits = probs
    dlogits[np.arange(n), labels] -= 1.0
    return loss, dlogits / n


class ClassificationObjective(Objective):
    """
    Objective bound to a DataShard. Subclasses implement ``_forward`` and
    ``_loss_and_grad`` on raw arrays.
    """

    def __init__(self, dim: int, shard, n_classes: int):
        super().__init__(dim)
        if shard is None or len(shard.labels) == 0:
            raise ValueError("classification objective needs a non-empty shard")
        self.shard = shard
        self.n_classes = int(n_classes)

    @property
    def size(self) -> int:
        return len(self.shard.labels)

    def with_shard(self, shard) -> "ClassificationObjective":
        raise NotImplementedError

    def _forward(self, params: np.ndarray, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _loss_and_grad(self, params: np.ndarray, X: np.ndarray, y: np.ndarray) -> Tuple[float, np.ndarray]:
        raise NotImplementedError

    def full_gradient(self, x: ParamVec) -> ParamVec:
        self.check_dim(x)
        _, grad = self._loss_and_grad(x.values, self.shard.features, self.shard.labels)
        return ParamVec(grad)

    def stochastic_gradient(self, x: ParamVec, batch_size: int, rng: np.random.Generator) -> GradSample:
        """
            Minibatch gradient, sampled uniformly without replacement.
            Indices are sorted so the full batch reproduces full_gradient bitwise.
        """
        self.check_dim(x)
        n = self.size
        if not 1 <= batch_size <= n:
            raise ValueError("batch_size must be in [1, {}], got {}".format(n, batch_size))
        ids = np.sort(rng.choice(n, size=batch_size, replace=False))
        if batch_size == n:
            X, y = self.shard.features, self.shard.labels
        else:
            X, y = self.shard.features[ids], self.shard.labels[ids]
        loss, grad = self._loss_and_grad(x.values, X, y)
        return GradSample(grad=ParamVec(grad), loss=loss, batch_ids=tuple(int(i) for i in ids))

    def predict(self, x: ParamVec) -> np.ndarray:
        """argmax of logits, ties go to the lowest class index"""
        self.check_dim(x)
        return np.argmax(self._forward(x.values, self.shard.features), axis=1)

    def evaluate(self, x: ParamVec) -> Tuple[float, Optional[float]]:
        self.check_dim(x)
        logits = self._forward(x.values, self.shard.features)
        loss, _ = softmax_cross_entropy(logits, self.shard.labels)
        accuracy = float(np.mean(np.argmax(logits, axis=1) == self.shard.labels))
        return loss, accuracy
