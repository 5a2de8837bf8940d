# coding:utf8
"""
After-round hook that turns a RoundOutcome into a MetricRow.
"""
from typing import List, Optional, Sequence

from ccfedsim.diagnostics.gradient import evaluate_global, track_global_gradient
from ccfedsim.diagnostics.metrics import MetricRow
from ccfedsim.diagnostics.shadow import shadow_estimation_error, shadow_true_delta
from ccfedsim.fl.client import RoundOutcome, lookup_history
from ccfedsim.objectives import Objective
from ccfedsim.utils import log

logger = log.get_logger(__file__)


def _mean(values: List[Optional[float]]) -> Optional[float]:
    values = [v for v in values if v is not None]
    if not values:
        return None
    return sum(values) / len(values)


class MetricsRecorder(object):
    """
    Register on a Simulator with ``sim.register_after_round(recorder, required=True)``.

    Shadow errors are averaged over every skipping client of the round, or
    follow one client only when ``probe_client`` is set.
    """

    def __init__(
        self,
        seed: int,
        objectives: Sequence[Objective],
        eval_objective: Optional[Objective] = None,
        shadow: bool = True,
        probe_client: Optional[int] = None,
    ):
        self.seed = seed
        self.objectives = list(objectives)
        self.eval_objective = eval_objective
        self.shadow = shadow
        self.probe_client = probe_client
        self.rows: List[MetricRow] = []
        self._min_grad = float("inf")
        self.best_acc: Optional[float] = None

    def __call__(self, sim, outcome: RoundOutcome):
        x = outcome.x_next
        if self.eval_objective is not None:
            test_loss, test_acc = self.eval_objective.evaluate(x)
        else:
            test_loss, test_acc = evaluate_global(self.objectives, x)
        grad_norm_sq = track_global_gradient(self.objectives, x)
        self._min_grad = min(self._min_grad, grad_norm_sq)
        if test_acc is not None:
            self.best_acc = test_acc if self.best_acc is None else max(self.best_acc, test_acc)

        e2, e3, c2, c3 = [], [], [], []
        if self.shadow:
            skipping = sorted(outcome.estimated | outcome.skipped_entirely)
            if self.probe_client is not None:
                skipping = [i for i in skipping if i == self.probe_client]
            for i in skipping:
                history = lookup_history(sim.clients[i], sim.state)
                if history is None:
                    continue
                true_delta = shadow_true_delta(
                    outcome.x_start,
                    self.objectives[i],
                    sim.hyper.K,
                    sim.hyper.eta,
                    sim.hyper.batch_size,
                    sim.seed,
                    i,
                    outcome.round,
                )
                result = shadow_estimation_error(history, outcome.x_start, true_delta)
                e2.append(result.e2)
                e3.append(result.e3)
                c2.append(result.c2)
                c3.append(result.c3)

        self.rows.append(
            MetricRow(
                round=outcome.round,
                method=sim.name,
                seed=self.seed,
                test_loss=float(test_loss),
                test_acc=None if test_acc is None else float(test_acc),
                grad_norm_sq=float(grad_norm_sq),
                min_grad_norm_sq_so_far=float(self._min_grad),
                est_err_s2=_mean(e2),
                est_err_s3=_mean(e3),
                cos_s2=_mean(c2),
                cos_s3=_mean(c3),
                trained_count=len(outcome.trained),
                estimated_count=len(outcome.estimated),
            )
        )

    @property
    def final(self) -> Optional[MetricRow]:
        return self.rows[-1] if self.rows else None
