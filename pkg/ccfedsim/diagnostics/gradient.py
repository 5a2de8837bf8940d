# coding:utf8
from typing import Optional, Sequence, Tuple

from ccfedsim import params
from ccfedsim.objectives import Objective
from ccfedsim.params import ParamVec


def track_global_gradient(objectives: Sequence[Objective], x_t: ParamVec) -> float:
    """|(1/N) sum_i grad f_i(x_t)|^2 with exact gradients"""
    return params.norm_sq(params.mean([obj.full_gradient(x_t) for obj in objectives]))


def evaluate_global(objectives: Sequence[Objective], x_t: ParamVec) -> Tuple[float, Optional[float]]:
    """f(x) = (1/N) sum f_i(x); accuracy is the plain mean when every f_i reports one"""
    results = [obj.evaluate(x_t) for obj in objectives]
    loss = sum(r[0] for r in results) / len(results)
    accs = [r[1] for r in results]
    acc = None if any(a is None for a in accs) else sum(accs) / len(accs)
    return loss, acc
