# coding:utf8
"""
Multinomial logistic regression. Parameters are [W (input_dim x n_classes), b (n_classes)]
flattened row-major; two classes give ordinary (over-parameterised) logistic regression.
"""
from typing import Tuple

import numpy as np

from ccfedsim.objectives.classification import ClassificationObjective, softmax_cross_entropy


class LogisticObjective(ClassificationObjective):
    kind = "logistic"

    def __init__(self, shard, input_dim: int, n_classes: int):
        self.input_dim = int(input_dim)
        if shard is not None and shard.features.shape[1] != self.input_dim:
            raise ValueError("shard has {} features, expected {}".format(shard.features.shape[1], input_dim))
        super().__init__(self.input_dim * n_classes + n_classes, shard, n_classes)

    def with_shard(self, shard) -> "LogisticObjective":
        return LogisticObjective(shard, self.input_dim, self.n_classes)

    def _unpack(self, params: np.ndarray):
        split = self.input_dim * self.n_classes
        return params[:split].reshape(self.input_dim, self.n_classes), params[split:]

    def _forward(self, params: np.ndarray, X: np.ndarray) -> np.ndarray:
        W, b = self._unpack(params)
        return X @ W + b

    def _loss_and_grad(self, params: np.ndarray, X: np.ndarray, y: np.ndarray) -> Tuple[float, np.ndarray]:
        loss, dlogits = softmax_cross_entropy(self._forward(params, X), y)
        gW = X.T @ dlogits
        gb = dlogits.sum(axis=0)
        return loss, np.concatenate([gW.reshape(-1), gb])
