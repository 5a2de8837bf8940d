# coding:utf8
"""
obj = create_objective("logistic", shard=shard, input_dim=20, n_classes=4)
"""
from ccfedsim.objectives.base import GradSample, Objective
from ccfedsim.objectives.classification import ClassificationObjective
from ccfedsim.objectives.logistic import LogisticObjective
from ccfedsim.objectives.mlp import MLPObjective
from ccfedsim.objectives.quadratic import QuadraticObjective, global_minimizer

KINDS = ("quadratic", "logistic", "mlp")


def create_objective(kind: str, **kwargs) -> Objective:
    """
    Objective factory

    Args:
        kind: quadratic | logistic | mlp
        **kwargs:
            quadratic: A, b, noise_sigma
            logistic: shard, input_dim, n_classes
            mlp: shard, input_dim, hidden_dim, n_classes

    Returns:

    """
    if kind == "quadratic":
        return QuadraticObjective(kwargs["A"], kwargs["b"], noise_sigma=kwargs.get("noise_sigma", 0.0))
    if kind == "logistic":
        return LogisticObjective(kwargs["shard"], kwargs["input_dim"], kwargs["n_classes"])
    if kind == "mlp":
        return MLPObjective(kwargs["shard"], kwargs["input_dim"], kwargs["hidden_dim"], kwargs["n_classes"])
    raise ValueError("unknown objective kind: {}".format(kind))


__all__ = [
    "GradSample",
    "Objective",
    "ClassificationObjective",
    "LogisticObjective",
    "MLPObjective",
    "QuadraticObjective",
    "create_objective",
    "global_minimizer",
    "KINDS",
]
