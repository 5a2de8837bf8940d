from ccfedsim.diagnostics import MetricsRecorder
from ccfedsim.fl import Hyper, MethodSpec, Simulator
from ccfedsim.harness import ExperimentConfig, build_task
from ccfedsim.utils import log

logger = log.get_logger(__name__)


def on_round(sim, outcome):
    if outcome.round % 20 == 0:
        logger.info(
            "round {} trained={} estimated={}".format(outcome.round, len(outcome.trained), len(outcome.estimated))
        )


if __name__ == "__main__":
    config = ExperimentConfig(task="synthetic-logistic", beta=4, rounds=100).validate()
    task = build_task(config, seed=0)
    recorder = MetricsRecorder(0, task.objectives, eval_objective=task.eval_objective, shadow=False)
    hyper = Hyper(K=config.local_steps, eta=config.eta, batch_size=config.batch_size)
    with Simulator(task.objectives, MethodSpec("cc_fedavg"), config.budgets(), hyper, seed=0) as sim:
        sim.register_after_round(on_round)
        sim.register_after_round(recorder, required=True)
        sim.run(config.rounds)
    logger.info("final test accuracy {}".format(recorder.final.test_acc))
