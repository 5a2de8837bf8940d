import numpy as np
import pytest

from ccfedsim import params
from ccfedsim.data import DataShard, PartitionPlan, assign_budgets, generate_synthetic, partition
from ccfedsim.diagnostics import (
    HEADER,
    MetricRow,
    MetricsRecorder,
    evaluate_global,
    read_metrics,
    shadow_estimation_error,
    shadow_true_delta,
    track_global_gradient,
    variance_probe,
    write_metrics,
)
from ccfedsim.exceptions import DataFormatError, OutputError
from ccfedsim.fl import GlobalState, HistoryEntry, Hyper, MethodSpec, Simulator, local_train, run_round
from ccfedsim.fl import method as M
from ccfedsim.fl.server import make_clients
from ccfedsim.objectives import LogisticObjective, QuadraticObjective
from ccfedsim.params import ParamVec
from ccfedsim.utils import rng as rngs


def _task(seed=0):
    features, labels = generate_synthetic(600, 5, 4, seed, cluster_std=1.0)
    shards = partition(features[:480], labels[:480], PartitionPlan(0.5, 8, 2, seed))
    objectives = [LogisticObjective(s, 5, 4) for s in shards]
    return objectives, LogisticObjective(DataShard(features[480:], labels[480:]), 5, 4)


def _record(spec, rounds=10, probe_client=None, shadow=True):
    objectives, test = _task()
    recorder = MetricsRecorder(0, objectives, eval_objective=test, shadow=shadow, probe_client=probe_client)
    with Simulator(objectives, spec, assign_budgets(8, 4), Hyper(K=3, eta=0.1, batch_size=8)) as sim:
        sim.register_after_round(recorder, required=True)
        sim.run(rounds)
    return recorder


def test_shadow_replays_client_minibatches():
    objectives, _ = _task()
    spec = MethodSpec(M.CC_FEDAVG)
    clients = make_clients(assign_budgets(8, 1), spec)
    state = GlobalState(x=ParamVec.zeros(objectives[0].dim))
    hyper = Hyper(K=3, eta=0.1, batch_size=8)
    run_round(state, spec, clients, objectives, hyper, seed=5)
    x_t = state.x
    outcome = run_round(state, spec, clients, objectives, hyper, seed=5)
    for i in (0, 7):
        assert shadow_true_delta(x_t, objectives[i], 3, 0.1, 8, 5, i, outcome.round) == outcome.contributions[i]


def test_shadow_estimation_error_values():
    x_t = ParamVec([0.0, 0.0])
    history = HistoryEntry(delta=ParamVec([0.0, 1.0]), local_model=ParamVec([2.0, 0.0]))
    result = shadow_estimation_error(history, x_t, ParamVec([1.0, 0.0]))
    assert result.e3 == 2.0
    assert result.e2 == 1.0
    assert result.c3 == pytest.approx(0.0)
    assert result.c2 == pytest.approx(1.0)


def test_shadow_without_history():
    result = shadow_estimation_error(None, ParamVec([0.0]), ParamVec([1.0]))
    assert (result.e2, result.e3, result.c2, result.c3) == (None, None, None, None)


def test_shadow_zero_norm_cosine():
    history = HistoryEntry(delta=ParamVec([0.0, 0.0]), local_model=ParamVec([1.0, 1.0]))
    result = shadow_estimation_error(history, ParamVec([1.0, 1.0]), ParamVec([1.0, 0.0]))
    assert result.c3 is None
    assert result.c2 is None
    assert result.e3 == 1.0


def test_global_gradient_and_loss():
    objectives = [QuadraticObjective(np.eye(2), [1.0, 0.0]), QuadraticObjective(np.eye(2), [-1.0, 0.0])]
    x = ParamVec([0.0, 0.0])
    assert track_global_gradient(objectives, x) == 0.0
    loss, acc = evaluate_global(objectives, x)
    assert loss == 0.5
    assert acc is None
    assert track_global_gradient(objectives, ParamVec([0.0, 2.0])) == 4.0


def test_recorder_rows():
    recorder = _record(MethodSpec(M.CC_FEDAVG, schedule=M.ROUND_ROBIN))
    rows = recorder.rows
    assert [r.round for r in rows] == list(range(10))
    assert all(r.method == "cc_fedavg" for r in rows)
    assert all(r.trained_count + r.estimated_count == 8 for r in rows)
    # round 0: everyone trains, nothing to measure
    assert rows[0].est_err_s3 is None and rows[0].estimated_count == 0
    assert rows[1].est_err_s2 is not None and rows[1].est_err_s3 is not None
    mins = [r.min_grad_norm_sq_so_far for r in rows]
    assert all(a >= b for a, b in zip(mins, mins[1:]))
    assert all(r.min_grad_norm_sq_so_far <= r.grad_norm_sq for r in rows)
    assert recorder.best_acc == max(r.test_acc for r in rows)
    assert recorder.final is rows[-1]


def test_recorder_single_client_and_switches():
    # client 0 has a full budget and never skips
    recorder = _record(MethodSpec(M.CC_FEDAVG, schedule=M.ROUND_ROBIN), probe_client=0)
    assert all(r.est_err_s3 is None for r in recorder.rows)
    recorder = _record(MethodSpec(M.CC_FEDAVG, schedule=M.ROUND_ROBIN), probe_client=7)
    assert recorder.rows[1].est_err_s3 is not None
    recorder = _record(MethodSpec(M.CC_FEDAVG, schedule=M.ROUND_ROBIN), shadow=False)
    assert all(r.est_err_s3 is None for r in recorder.rows)
    recorder = _record(MethodSpec(M.FEDAVG_FULL))
    assert all(r.est_err_s2 is None and r.estimated_count == 0 for r in recorder.rows)


class _FailingEval(object):
    """evaluates like ``objective`` but raises on call number ``fail_at``"""

    def __init__(self, objective, fail_at):
        self.objective = objective
        self.fail_at = fail_at
        self.calls = 0

    def evaluate(self, x):
        self.calls += 1
        if self.calls == self.fail_at:
            raise RuntimeError("evaluation failed")
        return self.objective.evaluate(x)


def test_recorder_failure_stops_the_run():
    objectives, test = _task()
    recorder = MetricsRecorder(0, objectives, eval_objective=_FailingEval(test, 3), shadow=False)
    hyper = Hyper(K=3, eta=0.1, batch_size=8)
    with Simulator(objectives, MethodSpec(M.CC_FEDAVG), assign_budgets(8, 4), hyper) as sim:
        sim.register_after_round(recorder, required=True)
        with pytest.raises(RuntimeError):
            sim.run(5)
    # one row per completed round, no gaps
    assert [r.round for r in recorder.rows] == [0, 1]


def test_diagnostics_do_not_change_the_trajectory():
    objectives, test = _task()
    spec = MethodSpec(M.CC_FEDAVG, schedule=M.AD_HOC)
    trajectories = []
    for with_recorder in (False, True):
        xs = []
        with Simulator(objectives, spec, assign_budgets(8, 4), Hyper(K=3, eta=0.1, batch_size=8), seed=2) as sim:
            if with_recorder:
                sim.register_after_round(MetricsRecorder(2, objectives, eval_objective=test), required=True)
            sim.register_after_round(lambda s, outcome: xs.append(outcome.x_next))
            sim.run(10)
        trajectories.append(xs)
    assert trajectories[0] == trajectories[1]


def test_variance_bound_without_noise_is_exact():
    objectives = [QuadraticObjective.random(5, rngs.stream(s, rngs.DATA, i)) for s in range(3) for i in range(8)]
    for s in range(3):
        group = objectives[8 * s : 8 * (s + 1)]
        result = variance_probe(ParamVec.zeros(5), group, 5, 0.05, 500, seed=s)
        assert result.lhs == result.rhs
        assert result.holds
        deltas = [local_train(ParamVec.zeros(5), o, 5, 0.05, 1, rngs.stream(s, rngs.TRAIN))[0] for o in group]
        delta = params.mean(deltas)
        assert result.lhs == pytest.approx(params.norm_sq(delta), rel=1e-12)


def test_variance_bound_single_step_closed_form():
    # one client, one step: Delta = -eta (grad f(x) + xi), E|Delta|^2 = eta^2 (|grad f|^2 + sigma^2)
    sigma, eta = 0.5, 0.1
    obj = QuadraticObjective(np.eye(4), [0.0, 0.0, 0.0, 0.0], noise_sigma=sigma)
    x = ParamVec([1.0, 0.0, 0.0, 0.0])
    result = variance_probe(x, [obj], 1, eta, 2000, seed=0)
    assert result.lhs == pytest.approx(eta**2 * (1.0 + sigma**2), rel=0.05)
    assert result.rhs == pytest.approx(eta**2 * (1.0 + sigma**2), rel=0.05)
    assert abs(result.rhs - result.lhs) <= result.slack
    assert result.holds


def test_variance_bound_small():
    objectives = [QuadraticObjective.random(3, rngs.stream(0, rngs.DATA, i), noise_sigma=0.2) for i in range(4)]
    result = variance_probe(ParamVec.zeros(3), objectives, 2, 0.1, 200, seed=0)
    assert result.n_resamples == 200
    assert result.sigma_l == 0.2
    assert result.holds


def test_variance_bound_errors():
    quads = [QuadraticObjective(np.eye(2), [0.0, 0.0], noise_sigma=s) for s in (0.1, 0.2)]
    with pytest.raises(ValueError):
        variance_probe(ParamVec.zeros(2), quads[:1], 1, 0.1, 50, seed=0)
    with pytest.raises(ValueError):
        variance_probe(ParamVec.zeros(2), quads, 1, 0.1, 100, seed=0)
    objectives, _ = _task()
    with pytest.raises(ValueError):
        variance_probe(objectives[0].init_params(), objectives, 1, 0.1, 100, seed=0)


def test_metrics_file(tmp_path):
    rows = [
        MetricRow(0, "cc_fedavg", 3, 1.25, 0.5, 0.1, 0.1, None, None, None, None, 8, 0),
        MetricRow(1, "cc_fedavg", 3, 1.0 / 3.0, None, 0.05, 0.05, 0.2, 0.1, 0.9, -0.25, 2, 6),
    ]
    path = write_metrics(rows, str(tmp_path / "sub" / "m.csv"))
    with open(path) as f:
        assert f.readline().strip() == ",".join(HEADER)
    assert read_metrics(path) == rows


def test_metrics_file_errors(tmp_path):
    with pytest.raises(OutputError):
        read_metrics(str(tmp_path / "missing.csv"))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(DataFormatError):
        read_metrics(str(bad))
    short = tmp_path / "short.csv"
    short.write_text(",".join(HEADER) + "\n0,x\n")
    with pytest.raises(DataFormatError):
        read_metrics(str(short))


def test_metrics_file_without_rows(tmp_path):
    path = write_metrics([], str(tmp_path / "empty.csv"))
    with open(path) as f:
        assert f.read().splitlines() == [",".join(HEADER)]
    assert read_metrics(path) == []
