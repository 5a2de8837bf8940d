# coding:utf8
"""
One hidden layer ReLU network with softmax cross-entropy, backprop by hand.

Parameter layout: W1 (input_dim x hidden_dim), b1, W2 (hidden_dim x n_classes), b2.
"""
from typing import Optional, Tuple

import numpy as np

from ccfedsim.objectives.classification import ClassificationObjective, softmax_cross_entropy
from ccfedsim.params import ParamVec


class MLPObjective(ClassificationObjective):
    kind = "mlp"

    def __init__(self, shard, input_dim: int, hidden_dim: int, n_classes: int):
        self.input_dim = int(input_dim)
        self.hidden_dim = int(hidden_dim)
        if shard is not None and shard.features.shape[1] != self.input_dim:
            raise ValueError("shard has {} features, expected {}".format(shard.features.shape[1], input_dim))
        dim = self.input_dim * self.hidden_dim + self.hidden_dim + self.hidden_dim * n_classes + n_classes
        super().__init__(dim, shard, n_classes)

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.input_dim, self.hidden_dim, self.n_classes

    def with_shard(self, shard) -> "MLPObjective":
        return MLPObjective(shard, self.input_dim, self.hidden_dim, self.n_classes)

    def init_params(self, rng: Optional[np.random.Generator] = None) -> ParamVec:
        """uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer"""
        if rng is None:
            raise ValueError("MLP init needs a generator")
        d, h, c = self.shape
        bound1 = 1.0 / np.sqrt(d)
        bound2 = 1.0 / np.sqrt(h)
        parts = [
            rng.uniform(-bound1, bound1, size=d * h),
            rng.uniform(-bound1, bound1, size=h),
            rng.uniform(-bound2, bound2, size=h * c),
            rng.uniform(-bound2, bound2, size=c),
        ]
        return ParamVec(np.concatenate(parts))

    def _unpack(self, params: np.ndarray):
        d, h, c = self.shape
        i = 0
        W1 = params[i : i + d * h].reshape(d, h)
        i += d * h
        b1 = params[i : i + h]
        i += h
        W2 = params[i : i + h * c].reshape(h, c)
        i += h * c
        b2 = params[i : i + c]
        return W1, b1, W2, b2

    def _forward(self, params: np.ndarray, X: np.ndarray) -> np.ndarray:
        W1, b1, W2, b2 = self._unpack(params)
        hidden = np.maximum(X @ W1 + b1, 0.0)
        return hidden @ W2 + b2

    def _loss_and_grad(self, params: np.ndarray, X: np.ndarray, y: np.ndarray) -> Tuple[float, np.ndarray]:
        W1, b1, W2, b2 = self._unpack(params)
        pre = X @ W1 + b1
        hidden = np.maximum(pre, 0.0)
        logits = hidden @ W2 + b2
        loss, dlogits = softmax_cross_entropy(logits, y)
        gW2 = hidden.T @ dlogits
        gb2 = dlogits.sum(axis=0)
        dhidden = (dlogits @ W2.T) * (pre > 0)
        gW1 = X.T @ dhidden
        gb1 = dhidden.sum(axis=0)
        return loss, np.concatenate([gW1.reshape(-1), gb1, gW2.reshape(-1), gb2])
