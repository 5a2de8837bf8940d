# coding:utf8
"""
Compute-matched comparison: CC-FedAvg with every client at p = 1/W for T
rounds against full FedAvg for T/W rounds. Both arms run the same expected
number of local SGD steps.
"""
from dataclasses import dataclass
from typing import List, Optional

from ccfedsim import util
from ccfedsim.diagnostics.metrics import format_csv
from ccfedsim.exceptions import ConfigError
from ccfedsim.fl import method as M
from ccfedsim.harness.config import ExperimentConfig
from ccfedsim.harness.runner import MethodResult, build_task, run_method
from ccfedsim.utils import log

logger = log.get_logger(__file__)

EFFICIENCY_HEADER = ("arm", "method", "seed", "rounds", "W", "final_test_acc", "final_test_loss", "sgd_steps", "status")


@dataclass
class EfficiencyResult(object):
    W: int
    seed: int
    rounds: int
    cc_fedavg: MethodResult
    fedavg: MethodResult
    path: Optional[str] = None

    @property
    def steps_equal(self) -> bool:
        return self.cc_fedavg.sgd_steps == self.fedavg.sgd_steps

    def lines(self) -> List[str]:
        rows = []
        for arm, result, rounds in (
            ("cc_fedavg", self.cc_fedavg, self.rounds),
            ("fedavg", self.fedavg, self.rounds // self.W),
        ):
            rows.append(
                [
                    arm,
                    result.method,
                    str(self.seed),
                    str(rounds),
                    str(self.W),
                    util.format_float(result.final_acc),
                    util.format_float(result.final_loss),
                    str(result.sgd_steps),
                    result.status,
                ]
            )
        return format_csv(EFFICIENCY_HEADER, rows)


def run_efficiency_comparison(
    config: ExperimentConfig, W: int, seed: int = None, write: bool = True
) -> EfficiencyResult:
    """
    Args:
        config: rounds is T; budget fields are ignored
        W: must divide T
        seed: default config.seed
        write: writes ``<out>.efficiency.csv``

    Returns:
        EfficiencyResult
    """
    if W < 1 or config.rounds % W != 0:
        raise ConfigError("W={} must divide rounds={}".format(W, config.rounds), field="W")
    seed = config.seed if seed is None else seed
    task = build_task(config, seed)

    cc_config = config.replace(beta=None, p_list=None, r=1.0, W=W)
    cc = run_method(cc_config, task, M.CC_FEDAVG, seed)

    full_config = config.replace(beta=None, p_list=None, r=0.0, W=1)
    full = run_method(full_config, task, M.FEDAVG_FULL, seed, rounds=config.rounds // W)

    result = EfficiencyResult(W=W, seed=seed, rounds=config.rounds, cc_fedavg=cc, fedavg=full)
    logger.info(
        "efficiency W={}: cc_fedavg acc={} steps={} | fedavg acc={} steps={}".format(
            W, cc.final_acc, cc.sgd_steps, full.final_acc, full.sgd_steps
        )
    )
    if write:
        result.path = util.atomic_write(util.with_suffix(config.out_path, ".efficiency"), result.lines())
    return result
