# coding:utf8
"""
r x W sweep: round(r*N) clients get p = 1/W, the others p = 1.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import tqdm

from ccfedsim import setting, util
from ccfedsim.diagnostics.metrics import format_csv
from ccfedsim.exceptions import ConfigError
from ccfedsim.fl import method as M
from ccfedsim.harness.config import ExperimentConfig
from ccfedsim.harness.runner import MethodResult, build_task, run_method
from ccfedsim.utils import log

logger = log.get_logger(__file__)

GRID_HEADER = ("r", "W", "seed", "method", "final_test_acc", "final_test_loss", "best_test_acc", "sgd_steps", "status")


@dataclass(frozen=True)
class GridCell(object):
    r: float
    W: int
    seed: int
    result: MethodResult

    def to_fields(self) -> List[str]:
        return [
            util.format_float(self.r),
            str(self.W),
            str(self.seed),
            self.result.method,
            util.format_float(self.result.final_acc),
            util.format_float(self.result.final_loss),
            util.format_float(self.result.best_acc),
            str(self.result.sgd_steps),
            self.result.status,
        ]


@dataclass
class GridResult(object):
    cells: List[GridCell]
    # seed -> fedavg_full run on the same task
    baseline: Dict[int, MethodResult]
    path: Optional[str] = None

    def cell(self, r: float, W: int, seed: int = None) -> GridCell:
        for c in self.cells:
            if c.r == r and c.W == W and (seed is None or c.seed == seed):
                return c
        raise KeyError((r, W, seed))


def run_grid_rw(
    config: ExperimentConfig,
    r_values: Sequence[float],
    W_values: Sequence[int],
    method: str = M.CC_FEDAVG,
    baseline: bool = True,
    show_progress: bool = None,
    write: bool = True,
) -> GridResult:
    """
        Final accuracy of ``method`` for every (r, W) cell
    Args:
        config: everything except the budget source is taken from here
        r_values: each in [0, 1]
        W_values: each >= 1
        method:
        baseline: also run fedavg_full once per seed
        show_progress:
        write: writes ``<out>.grid.csv``, one line per cell and seed

    Returns:
        GridResult
    """
    if not r_values or not W_values:
        raise ConfigError("empty grid", field="r_values" if not r_values else "W_values")
    for r in r_values:
        if not 0 <= r <= 1:
            raise ConfigError("r must be in [0, 1]: {}".format(r), field="r_values")
    for W in W_values:
        if int(W) != W or W < 1:
            raise ConfigError("W must be an integer >= 1: {}".format(W), field="W_values")
    show_progress = setting.show_progress if show_progress is None else show_progress

    cells: List[GridCell] = []
    baselines: Dict[int, MethodResult] = {}
    for seed in config.seed_list():
        task = build_task(config, seed)
        if baseline:
            base_config = config.replace(beta=None, p_list=None, r=0.0, W=1)
            baselines[seed] = run_method(base_config, task, M.FEDAVG_FULL, seed)
        pairs = [(r, int(W)) for r in r_values for W in W_values]
        for r, W in tqdm.tqdm(pairs, desc="grid seed={}".format(seed), disable=not show_progress, leave=False):
            cell_config = config.replace(beta=None, p_list=None, r=float(r), W=W)
            result = run_method(cell_config, task, method, seed)
            cells.append(GridCell(r=float(r), W=W, seed=seed, result=result))
            logger.info("grid r={} W={} seed={} final_acc={}".format(r, W, seed, result.final_acc))

    grid = GridResult(cells=cells, baseline=baselines)
    if write:
        grid.path = util.atomic_write(
            util.with_suffix(config.out_path, ".grid"), format_csv(GRID_HEADER, (c.to_fields() for c in cells))
        )
    return grid
