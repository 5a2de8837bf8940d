# coding:utf8
"""
python -m ccfedsim run --config exp.env --seeds 5 --out results/run.csv
python -m ccfedsim grid-rw --r-values 0,0.5,1 --W-values 1,2,4,8
python -m ccfedsim efficiency --W 4
python -m ccfedsim probe-variance --task quadratic --resamples 500
python -m ccfedsim --gen_env_example
"""
import argparse
import os
import sys

from ccfedsim.exceptions import ConfigError, SimulatorError
from ccfedsim.utils import log

logger = log.get_logger(__file__)

IDX_FILES = {
    "idx_train_images": "train-images-idx3-ubyte",
    "idx_train_labels": "train-labels-idx1-ubyte",
    "idx_test_images": "t10k-images-idx3-ubyte",
    "idx_test_labels": "t10k-labels-idx1-ubyte",
}

# flag dest -> config key
FLAG_KEYS = {
    "task": "task",
    "seed": "seed",
    "seeds": "seeds",
    "out": "out_path",
    "method": "methods",
    "beta": "beta",
    "p_list": "p_list",
    "gamma": "gamma",
    "classes_per_client": "classes_per_client",
    "ratio": "ratio",
    "schedule": "schedule",
    "variant": "variant",
    "backup_set": "backup_set",
    "tau": "tau",
    "W": "W",
    "r": "r",
    "probe_client": "probe_client",
    "rounds": "rounds",
    "n_clients": "n_clients",
    "local_steps": "local_steps",
    "eta": "eta",
    "batch_size": "batch_size",
    "noise_sigma": "noise_sigma",
    "budget_layout": "budget_layout",
}


def gen_env_example():
    from ccfedsim.env import env

    env_file_content = []
    for k, v in env.items():
        env_file_content.append("{}={}".format(k, v if v is not None and v != 0 else ""))
    env_file_content = os.linesep.join(env_file_content)
    print(env_file_content)
    return


def _idx_overrides(directory: str) -> dict:
    out = {}
    for key, name in IDX_FILES.items():
        for candidate in (name, name + ".gz"):
            path = os.path.join(directory, candidate)
            if os.path.exists(path):
                out[key] = path
                break
    if "idx_train_images" not in out or "idx_train_labels" not in out:
        raise ConfigError("no IDX training files in {}".format(directory), field="idx_dir")
    return out


def _floats(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("comma separated numbers expected: {}".format(text))


def _ints(text: str):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("comma separated integers expected: {}".format(text))


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="flat key=value experiment file")
    parser.add_argument("--task", help="quadratic | synthetic-logistic | synthetic-mlp | idx-mlp")
    parser.add_argument("--data", choices=("synthetic", "idx"), help="idx implies --task idx-mlp")
    parser.add_argument("--idx-dir", dest="idx_dir", help="directory with the four IDX files")
    parser.add_argument("--seed")
    parser.add_argument("--seeds", help="number of consecutive seeds")
    parser.add_argument("--out", help="metrics csv path")
    parser.add_argument("--method", action="append", help="method label, repeatable or comma separated")
    parser.add_argument("--beta")
    parser.add_argument("--p-list", dest="p_list", help="comma separated budgets")
    parser.add_argument("--budget-layout", dest="budget_layout", help="sorted | shuffled")
    parser.add_argument("--gamma")
    parser.add_argument("--classes-per-client", dest="classes_per_client")
    parser.add_argument("--ratio")
    parser.add_argument("--schedule", help="round_robin | ad_hoc")
    parser.add_argument("--variant", help="client_backup | server_backup | mixed")
    parser.add_argument("--backup-set", dest="backup_set", help="mixed variant: client ids backed up on the server")
    parser.add_argument("--tau")
    parser.add_argument("--W")
    parser.add_argument("--r")
    parser.add_argument("--probe-client", dest="probe_client")
    parser.add_argument("--rounds")
    parser.add_argument("--n-clients", dest="n_clients")
    parser.add_argument("--local-steps", dest="local_steps")
    parser.add_argument("--eta")
    parser.add_argument("--batch-size", dest="batch_size")
    parser.add_argument("--noise-sigma", dest="noise_sigma")
    parser.add_argument("--participation", action="store_true", help="also write the participation trace")
    parser.add_argument("--no-shadow", action="store_true", help="skip shadow training")
    parser.add_argument("--workers", type=int, help="threads per simulator")
    parser.add_argument("--no-progress", action="store_true")
    return parser


def get_cmd_args(argv=None):
    parser = argparse.ArgumentParser(
        prog="ccfedsim",
        description="federated averaging simulator with computation-constrained clients",
        add_help=True,
    )
    parser.add_argument("--gen_env_example", action="store_true", help="print an example .env file")
    parser.add_argument("--log-level", dest="log_level", help="DEBUG | INFO | WARNING | ERROR")
    common = _common_parser()
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("run", parents=[common], help="run every configured method")
    grid = sub.add_parser("grid-rw", parents=[common], help="r x W sweep with two budget groups")
    grid.add_argument("--r-values", dest="r_values", type=_floats, default=[0.0, 0.5, 1.0])
    grid.add_argument("--W-values", dest="W_values", type=_ints, default=[1, 2, 4, 8])
    sub.add_parser("efficiency", parents=[common], help="CC-FedAvg(r=1, W) for T rounds vs FedAvg for T/W rounds")
    probe = sub.add_parser(
        "probe-variance", aliases=["probe-lemma2"], parents=[common], help="variance bound of the aggregated update"
    )
    probe.add_argument("--resamples", type=int, default=500)
    probe.add_argument("--sigma-values", dest="sigma_values", type=_floats)
    probe.add_argument("--K-values", dest="K_values", type=_ints)
    return parser, parser.parse_args(argv)


def load_config(cmd_args):
    from ccfedsim.harness.config import ExperimentConfig

    overrides = {}
    for dest, key in FLAG_KEYS.items():
        value = getattr(cmd_args, dest, None)
        if value is None:
            continue
        if dest == "method":
            value = ",".join(value)
        overrides[key] = value
    if cmd_args.idx_dir:
        overrides.update(_idx_overrides(cmd_args.idx_dir))
    if cmd_args.data == "idx":
        overrides.setdefault("task", "idx-mlp")
    if cmd_args.participation:
        overrides["participation"] = "true"
    if cmd_args.no_shadow:
        overrides["shadow"] = "false"
    return ExperimentConfig.load(cmd_args.config, overrides)


def execute(cmd_args) -> int:
    from ccfedsim.harness import run_efficiency_comparison, run_experiment, run_grid_rw, run_variance_probe

    config = load_config(cmd_args)
    # progress bars are on for the command line
    show_progress = not cmd_args.no_progress
    if cmd_args.command == "run":
        result = run_experiment(config, workers=cmd_args.workers, show_progress=show_progress)
        return 3 if result.diverged else 0
    if cmd_args.command == "grid-rw":
        grid = run_grid_rw(config, cmd_args.r_values, cmd_args.W_values, show_progress=show_progress)
        return 3 if any(c.result.diverged for c in grid.cells) else 0
    if cmd_args.command == "efficiency":
        if config.W is None:
            raise ConfigError("efficiency needs --W", field="W")
        result = run_efficiency_comparison(config, config.W)
        return 3 if result.cc_fedavg.diverged or result.fedavg.diverged else 0
    if cmd_args.command in ("probe-variance", "probe-lemma2"):
        rows = run_variance_probe(
            config,
            n_resamples=cmd_args.resamples,
            sigma_values=cmd_args.sigma_values,
            K_values=cmd_args.K_values,
            show_progress=show_progress,
        )
        return 0 if all(r.result.holds for r in rows) else 1
    raise ConfigError("unknown command {}".format(cmd_args.command), field="command")


def main(argv=None) -> int:
    parser, cmd_args = get_cmd_args(argv)
    if cmd_args.log_level:
        log.set_level(cmd_args.log_level)

    if cmd_args.gen_env_example:
        gen_env_example()
        return 0
    if not cmd_args.command:
        parser.print_help()
        return 2
    try:
        return execute(cmd_args)
    except ConfigError as e:
        logger.error("config error: {}".format(e))
        return e.exit_code
    except SimulatorError as e:
        logger.exception(e)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
