# coding:utf8
"""
Experiment execution: task construction, one run per (method, seed), metric
files.

Output files for ``out_path = run.csv``:

    run.csv                    metric rows (``run.seed<k>.csv`` when seeds > 1)
    run.summary.csv            one line per method over all seeds
    run.participation.csv      0/1/2 trace per round and client (optional)
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import tqdm

from ccfedsim import setting, util
from ccfedsim.data import (
    BudgetAssignment,
    DataShard,
    PartitionPlan,
    generate_synthetic,
    load_idx,
    partition,
    train_test_split,
)
from ccfedsim.diagnostics import MetricRow, MetricsRecorder, write_metrics
from ccfedsim.diagnostics.metrics import format_csv
from ccfedsim.exceptions import ConfigError, DivergenceError
from ccfedsim.fl.server import Hyper, Simulator
from ccfedsim.harness.config import ExperimentConfig
from ccfedsim.objectives import Objective, QuadraticObjective, create_objective
from ccfedsim.utils import log
from ccfedsim.utils import rng as rngs

logger = log.get_logger(__file__)

STATUS_OK = "ok"

SUMMARY_HEADER = (
    "method",
    "n_seeds",
    "final_test_acc_mean",
    "final_test_acc_std",
    "best_test_acc_mean",
    "final_test_loss_mean",
    "sgd_steps_mean",
    "status",
)


@dataclass
class Task(object):
    objectives: List[Objective]
    eval_objective: Optional[Objective] = None
    n_classes: Optional[int] = None


@dataclass
class MethodResult(object):
    method: str
    seed: int
    rows: List[MetricRow]
    sgd_steps: int
    participation: List[List[int]]
    best_acc: Optional[float] = None
    status: str = STATUS_OK

    @property
    def diverged(self) -> bool:
        return self.status != STATUS_OK

    @property
    def final(self) -> Optional[MetricRow]:
        return self.rows[-1] if self.rows else None

    @property
    def final_acc(self) -> Optional[float]:
        return self.final.test_acc if self.final else None

    @property
    def final_loss(self) -> Optional[float]:
        return self.final.test_loss if self.final else None


@dataclass
class ExperimentResult(object):
    config: ExperimentConfig
    # seed -> method label -> result
    runs: Dict[int, Dict[str, MethodResult]] = field(default_factory=dict)
    files: List[str] = field(default_factory=list)

    @property
    def diverged(self) -> bool:
        return any(r.diverged for by_method in self.runs.values() for r in by_method.values())

    def results(self, method: str) -> List[MethodResult]:
        return [self.runs[seed][method] for seed in sorted(self.runs) if method in self.runs[seed]]


def _classification_task(config: ExperimentConfig, seed: int, train_x, train_y, test_x, test_y) -> Task:
    n_classes = int(max(train_y.max(), test_y.max())) + 1
    input_dim = int(train_x.shape[1])
    shards = partition(
        train_x,
        train_y,
        PartitionPlan(config.gamma, config.n_clients, config.classes_per_client, seed),
    )
    kind = "logistic" if config.task == "synthetic-logistic" else "mlp"
    kwargs = dict(input_dim=input_dim, n_classes=n_classes)
    if kind == "mlp":
        kwargs["hidden_dim"] = config.hidden_dim
    objectives = [create_objective(kind, shard=shard, **kwargs) for shard in shards]
    eval_objective = create_objective(kind, shard=DataShard(test_x, test_y), **kwargs)
    return Task(objectives=objectives, eval_objective=eval_objective, n_classes=n_classes)


def build_task(config: ExperimentConfig, seed: int) -> Task:
    """
        Build the per-client objectives; the data seed is the run seed
    Args:
        config:
        seed:

    Returns:
        Task
    """
    if config.task == "quadratic":
        objectives = [
            QuadraticObjective.random(
                config.input_dim,
                rngs.stream(seed, rngs.DATA, i),
                sigma_g=config.sigma_g,
                l_max=config.l_max,
                noise_sigma=config.noise_sigma,
            )
            for i in range(config.n_clients)
        ]
        return Task(objectives=objectives)

    if config.task in ("synthetic-logistic", "synthetic-mlp"):
        features, labels = generate_synthetic(
            config.n_samples, config.input_dim, config.n_classes, seed, cluster_std=config.cluster_std
        )
        train_x, train_y, test_x, test_y = train_test_split(features, labels, setting.test_fraction, seed)
        return _classification_task(config, seed, train_x, train_y, test_x, test_y)

    if config.task == "idx-mlp":
        train_x, train_y = load_idx(config.idx_train_images, config.idx_train_labels)
        if config.idx_test_images and config.idx_test_labels:
            test_x, test_y = load_idx(config.idx_test_images, config.idx_test_labels)
        else:
            train_x, train_y, test_x, test_y = train_test_split(train_x, train_y, setting.test_fraction, seed)
        logger.info("idx data: {} train / {} test samples".format(train_y.size, test_y.size))
        return _classification_task(config, seed, train_x, train_y, test_x, test_y)

    raise ConfigError("unknown task {}".format(config.task), field="task")


def make_hyper(config: ExperimentConfig) -> Hyper:
    return Hyper(
        K=config.local_steps,
        eta=config.eta,
        batch_size=config.batch_size,
        ratio=config.ratio,
        divergence_limit=setting.divergence_limit,
    )


def run_method(
    config: ExperimentConfig,
    task: Task,
    label: str,
    seed: int,
    budgets: BudgetAssignment = None,
    rounds: int = None,
    workers: int = None,
    show_progress: bool = False,
) -> MethodResult:
    """
        One method, one seed. A divergence ends the run; the rows recorded so
        far are kept and the status becomes ``diverged:<round>:<client>``.
    """
    budgets = budgets or config.budgets(seed)
    rounds = config.rounds if rounds is None else rounds
    spec = config.method_spec(label, budgets)
    recorder = MetricsRecorder(
        seed,
        task.objectives,
        eval_objective=task.eval_objective,
        shadow=config.shadow,
        probe_client=config.probe_client,
    )
    status = STATUS_OK
    with Simulator(
        task.objectives,
        spec,
        budgets,
        make_hyper(config),
        seed=seed,
        rounds=rounds,
        workers=workers,
        show_progress=show_progress,
    ) as sim:
        sim.register_after_round(recorder, required=True)
        try:
            sim.run(rounds)
        except DivergenceError as e:
            logger.error("{} seed={} aborted: {}".format(spec.label, seed, e))
            status = "diverged:{}:{}".format(e.round, "" if e.client is None else e.client)
        result = MethodResult(
            method=spec.label,
            seed=seed,
            rows=list(recorder.rows),
            sgd_steps=sim.sgd_steps,
            participation=[list(row) for row in sim.participation],
            best_acc=recorder.best_acc,
            status=status,
        )
    final = result.final
    logger.info(
        "{} seed={} {} rounds, test_loss={} test_acc={} sgd_steps={}".format(
            spec.label,
            seed,
            len(result.rows),
            None if final is None else util.format_float(final.test_loss),
            None if final is None else util.format_float(final.test_acc),
            result.sgd_steps,
        )
    )
    return result


def metrics_path(config: ExperimentConfig, seed: int) -> str:
    if config.seeds == 1:
        return config.out_path
    return util.with_suffix(config.out_path, ".seed{}".format(seed))


def participation_lines(results: Sequence[MethodResult], n_clients: int) -> List[str]:
    header = ["seed", "method", "round"] + ["c{}".format(i) for i in range(n_clients)]
    rows = []
    for r in results:
        for t, codes in enumerate(r.participation):
            rows.append([str(r.seed), r.method, str(t)] + [str(c) for c in codes])
    return format_csv(header, rows)


def summarize(result: ExperimentResult) -> List[List[str]]:
    """one row per method, see SUMMARY_HEADER"""

    def _mean(values):
        values = [v for v in values if v is not None]
        return float(np.mean(values)) if values else None

    def _std(values):
        values = [v for v in values if v is not None]
        if not values:
            return None
        return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0

    rows = []
    labels = []
    for by_method in result.runs.values():
        for label in by_method:
            if label not in labels:
                labels.append(label)
    for label in labels:
        runs = result.results(label)
        status = next((r.status for r in runs if r.diverged), STATUS_OK)
        rows.append(
            [
                label,
                str(len(runs)),
                util.format_float(_mean([r.final_acc for r in runs])),
                util.format_float(_std([r.final_acc for r in runs])),
                util.format_float(_mean([r.best_acc for r in runs])),
                util.format_float(_mean([r.final_loss for r in runs])),
                util.format_float(_mean([r.sgd_steps for r in runs])),
                status,
            ]
        )
    return rows


def run_experiment(
    config: ExperimentConfig, workers: int = None, show_progress: bool = None, write: bool = True
) -> ExperimentResult:
    """
        Run every configured method under every seed and write the metric files
    Args:
        config: validated
        workers: threads per simulator, default from setting
        show_progress: default from setting
        write: False keeps everything in memory

    Returns:
        ExperimentResult
    """
    config.validate()
    show_progress = setting.show_progress if show_progress is None else show_progress
    result = ExperimentResult(config=config)
    logger.info(
        "experiment task={} methods={} seeds={} rounds={}".format(
            config.task, ",".join(config.methods), config.seed_list(), config.rounds
        )
    )
    for seed in tqdm.tqdm(config.seed_list(), desc="seeds", disable=not show_progress or config.seeds == 1):
        task = build_task(config, seed)
        budgets = config.budgets(seed)
        logger.debug("seed={} budgets={}".format(seed, budgets.p))
        runs: Dict[str, MethodResult] = {}
        for label in config.methods:
            r = run_method(config, task, label, seed, budgets, workers=workers, show_progress=show_progress)
            runs[r.method] = r
        result.runs[seed] = runs
        if write:
            path = write_metrics([row for r in runs.values() for row in r.rows], metrics_path(config, seed))
            result.files.append(path)

    if write:
        summary = util.with_suffix(config.out_path, ".summary")
        util.atomic_write(summary, format_csv(SUMMARY_HEADER, summarize(result)))
        result.files.append(summary)
        if config.participation:
            trace = util.with_suffix(config.out_path, ".participation")
            all_runs = [r for seed in sorted(result.runs) for r in result.runs[seed].values()]
            util.atomic_write(trace, participation_lines(all_runs, config.n_clients))
            result.files.append(trace)
        logger.info("wrote {}".format(", ".join(result.files)))
    return result
