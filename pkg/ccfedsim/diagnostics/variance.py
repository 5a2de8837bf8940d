# coding:utf8
"""
Second-moment probe of the global update.

At a frozen x_t every client trains K steps and the mean update Delta_t is
recorded; repeating with fresh gradient noise gives

    lhs = mean |Delta_t|^2 = |mean Delta_t|^2 + mean |Delta_t - mean Delta_t|^2
    rhs = |mean Delta_t|^2 + K eta^2 sigma_L^2 / N

and lhs <= rhs up to Monte-Carlo error (slack = 3 standard errors of lhs).
lhs is taken in its decomposed form, so without noise lhs == rhs exactly.
"""
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import tqdm

from ccfedsim import params
from ccfedsim.fl.local import local_train
from ccfedsim.objectives import QuadraticObjective
from ccfedsim.params import ParamVec
from ccfedsim.utils import log
from ccfedsim.utils import rng as rngs

logger = log.get_logger(__file__)

MIN_RESAMPLES = 100


@dataclass(frozen=True)
class VarianceProbeResult(object):
    lhs: float
    rhs: float
    slack: float
    sigma_l: float
    n_resamples: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.slack


def variance_probe(
    x_t: ParamVec,
    objectives: Sequence[QuadraticObjective],
    K: int,
    eta: float,
    n_resamples: int,
    seed: int,
    show_progress: bool = False,
) -> VarianceProbeResult:
    """
    Args:
        x_t: frozen global model
        objectives: quadratics sharing one noise_sigma (sigma_L)
        K:
        eta:
        n_resamples: >= 100
        seed:
        show_progress:

    Returns:

    """
    if n_resamples < MIN_RESAMPLES:
        raise ValueError("n_resamples must be >= {}: {}".format(MIN_RESAMPLES, n_resamples))
    if not objectives or not all(isinstance(o, QuadraticObjective) for o in objectives):
        raise ValueError("the probe needs quadratic objectives")
    sigmas = {o.noise_sigma for o in objectives}
    if len(sigmas) != 1:
        raise ValueError("objectives disagree on noise_sigma: {}".format(sorted(sigmas)))
    sigma_l = sigmas.pop()
    n = len(objectives)

    deltas = []
    for s in tqdm.tqdm(range(n_resamples), desc="variance probe", disable=not show_progress, leave=False):
        client_deltas = [
            local_train(x_t, obj, K, eta, 1, rngs.stream(seed, rngs.PROBE, s, i))[0] for i, obj in enumerate(objectives)
        ]
        deltas.append(params.mean(client_deltas).values)
    deltas = np.array(deltas)

    # centring on the first resample keeps identical resamples exact
    centred = deltas - deltas[0]
    mean_delta = deltas[0] + np.mean(centred, axis=0)
    residual = deltas - mean_delta
    mean_sq = float(np.dot(mean_delta, mean_delta))
    spread = float(np.mean(np.einsum("ij,ij->i", residual, residual)))
    lhs = mean_sq + spread
    rhs = mean_sq + K * eta**2 * sigma_l**2 / n
    sq_norms = np.einsum("ij,ij->i", deltas, deltas)
    slack = 3.0 * float(np.std(sq_norms, ddof=1)) / math.sqrt(n_resamples)
    logger.debug("variance probe: lhs={} rhs={} slack={}".format(lhs, rhs, slack))
    return VarianceProbeResult(lhs=lhs, rhs=rhs, slack=slack, sigma_l=sigma_l, n_resamples=n_resamples)
