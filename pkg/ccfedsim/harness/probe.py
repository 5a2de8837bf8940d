# coding:utf8
"""
Variance probe of the aggregated update on quadratic tasks.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence

from ccfedsim import setting, util
from ccfedsim.diagnostics.variance import VarianceProbeResult, variance_probe
from ccfedsim.diagnostics.metrics import format_csv
from ccfedsim.exceptions import ConfigError
from ccfedsim.harness.config import ExperimentConfig
from ccfedsim.harness.runner import build_task
from ccfedsim.utils import log

logger = log.get_logger(__file__)

PROBE_HEADER = ("sigma_l", "K", "eta", "n_resamples", "lhs", "rhs", "slack", "holds")


@dataclass(frozen=True)
class ProbeRow(object):
    K: int
    eta: float
    result: VarianceProbeResult

    def to_fields(self) -> List[str]:
        r = self.result
        return [
            util.format_float(r.sigma_l),
            str(self.K),
            util.format_float(self.eta),
            str(r.n_resamples),
            util.format_float(r.lhs),
            util.format_float(r.rhs),
            util.format_float(r.slack),
            "true" if r.holds else "false",
        ]


def run_variance_probe(
    config: ExperimentConfig,
    n_resamples: int = 500,
    sigma_values: Optional[Sequence[float]] = None,
    K_values: Optional[Sequence[int]] = None,
    show_progress: bool = None,
    write: bool = True,
) -> List[ProbeRow]:
    """
        E|Delta|^2 <= |E Delta|^2 + K eta^2 sigma_L^2 / N at x_0, one row per (sigma_L, K)
    Args:
        config: quadratic task
        n_resamples:
        sigma_values: default [config.noise_sigma]
        K_values: default [config.local_steps]
        show_progress:
        write: writes ``<out>.probe.csv``

    Returns:

    """
    if config.task != "quadratic":
        raise ConfigError("the probe runs on the quadratic task only", field="task")
    show_progress = setting.show_progress if show_progress is None else show_progress
    sigma_values = [config.noise_sigma] if sigma_values is None else list(sigma_values)
    K_values = [config.local_steps] if K_values is None else list(K_values)

    rows = []
    for sigma in sigma_values:
        task = build_task(config.replace(noise_sigma=float(sigma)), config.seed)
        x0 = task.objectives[0].init_params()
        for K in K_values:
            result = variance_probe(
                x0, task.objectives, int(K), config.eta, n_resamples, config.seed, show_progress=show_progress
            )
            logger.info(
                "probe sigma_l={} K={}: lhs={} rhs={} slack={} holds={}".format(
                    sigma, K, result.lhs, result.rhs, result.slack, result.holds
                )
            )
            rows.append(ProbeRow(K=int(K), eta=config.eta, result=result))
    if write:
        path = util.with_suffix(config.out_path, ".probe")
        util.atomic_write(path, format_csv(PROBE_HEADER, (r.to_fields() for r in rows)))
    return rows
