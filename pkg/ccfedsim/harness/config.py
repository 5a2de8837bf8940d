# coding:utf8
"""
ExperimentConfig: the complete description of one run.

Config files are flat ``key=value`` files in dotenv syntax, e.g.

    task=synthetic-logistic
    n_clients=8
    rounds=200
    methods=fedavg_full,cc_fedavg,strategy1,strategy2
    beta=4

Precedence: setting defaults < file < command line flags.
"""
import dataclasses
import io
import math
import os
from dataclasses import dataclass, fields
from typing import Any, Dict, List, Optional, Tuple

from dotenv import dotenv_values

from ccfedsim import setting, util
from ccfedsim.data.budget import (
    BudgetAssignment,
    assign_budgets,
    explicit_budgets,
    shuffle_budgets,
    two_group_budgets,
)
from ccfedsim.exceptions import ConfigError
from ccfedsim.fl.method import SCHEDULES, VARIANTS, MethodSpec

TASKS = ("quadratic", "synthetic-logistic", "synthetic-mlp", "idx-mlp")
BUDGET_LAYOUTS = ("sorted", "shuffled")

# names used in the literature and by older files
ALIASES = {
    "N": "n_clients",
    "T": "rounds",
    "K": "local_steps",
    "W_override": "W",
    "r_override": "r",
}


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError("not a boolean: {}".format(text))


def _split(text: str) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


@dataclass
class ExperimentConfig(object):
    task: str = setting.default_task
    n_clients: int = setting.default_n_clients
    rounds: int = setting.default_rounds
    local_steps: int = setting.default_local_steps
    eta: float = setting.default_eta
    batch_size: int = setting.default_batch_size
    ratio: float = setting.default_ratio
    # budget source: p_list, else r + W (two groups), else beta
    beta: Optional[int] = None
    p_list: Optional[Tuple[float, ...]] = None
    r: Optional[float] = None
    W: Optional[int] = None
    budget_layout: str = "sorted"
    gamma: float = setting.default_gamma
    classes_per_client: int = setting.default_classes_per_client
    schedule: str = setting.default_schedule
    methods: Tuple[str, ...] = tuple(setting.default_methods)
    variant: str = setting.default_variant
    # mixed variant: clients backed up on the server, default every client with p < 1
    backup_set: Optional[Tuple[int, ...]] = None
    tau: Optional[int] = None
    seed: int = 0
    seeds: int = 1
    out_path: str = os.path.join(setting.output_dir, "metrics.csv")
    # synthetic data
    n_samples: int = setting.default_n_samples
    input_dim: int = setting.default_input_dim
    n_classes: int = setting.default_n_classes
    hidden_dim: int = setting.default_hidden_dim
    cluster_std: float = setting.default_cluster_std
    # quadratic
    sigma_g: float = setting.default_sigma_g
    l_max: float = setting.default_l_max
    noise_sigma: float = setting.default_noise_sigma
    # idx files
    idx_train_images: Optional[str] = setting.idx_train_images
    idx_train_labels: Optional[str] = setting.idx_train_labels
    idx_test_images: Optional[str] = setting.idx_test_images
    idx_test_labels: Optional[str] = setting.idx_test_labels
    # diagnostics
    shadow: bool = True
    probe_client: Optional[int] = None
    participation: bool = False

    def __post_init__(self):
        if self.p_list is not None:
            self.p_list = tuple(float(x) for x in self.p_list)
        if self.backup_set is not None:
            self.backup_set = tuple(sorted(int(x) for x in self.backup_set))
        if isinstance(self.methods, str):
            self.methods = tuple(_split(self.methods))
        else:
            self.methods = tuple(self.methods)

    # ------------------------------------------------------------------ io

    @classmethod
    def coerce(cls, key: str, text: Optional[str]) -> Any:
        """string value from a file or flag -> typed field value"""
        key = ALIASES.get(key, key)
        types = {f.name: f.type for f in fields(cls)}
        if key not in types:
            raise ConfigError("unknown key", field=key)
        if text is None or str(text).strip() == "":
            return None
        text = str(text).strip()
        kind = str(types[key])
        try:
            if key in ("p_list",):
                return tuple(float(x) for x in _split(text))
            if key in ("backup_set",):
                return tuple(int(x) for x in _split(text))
            if key == "methods":
                return tuple(_split(text))
            if "bool" in kind:
                return _parse_bool(text)
            if "int" in kind:
                return int(text)
            if "float" in kind:
                return float(text)
        except ValueError as e:
            raise ConfigError(str(e), field=key) from e
        return text

    @classmethod
    def from_mapping(cls, values: Dict[str, Optional[str]], base: "ExperimentConfig" = None) -> "ExperimentConfig":
        """
            Apply string values on top of ``base``; empty values are ignored
        """
        updates = {}
        for key, text in values.items():
            value = cls.coerce(key, text)
            if value is not None:
                updates[ALIASES.get(key, key)] = value
        config = dataclasses.replace(base or cls(), **updates)
        config.validate()
        return config

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        return cls.from_mapping(dict(dotenv_values(stream=io.StringIO(text), interpolate=False)))

    @classmethod
    def load(cls, path: str, overrides: Dict[str, Optional[str]] = None) -> "ExperimentConfig":
        """
        Args:
            path: config file, may be None
            overrides: command line values, None entries are ignored

        Returns:

        """
        values: Dict[str, Optional[str]] = {}
        if path:
            try:
                with open(path, "r", encoding="utf-8") as f:
                    values.update(dotenv_values(stream=f, interpolate=False))
            except OSError as e:
                raise ConfigError(str(e), field="config") from e
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = value
        return cls.from_mapping(values)

    def to_mapping(self) -> Dict[str, str]:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, bool):
                out[f.name] = "true" if value else "false"
            elif isinstance(value, float):
                out[f.name] = util.format_float(value)
            elif isinstance(value, tuple):
                out[f.name] = ",".join(util.format_float(v) if isinstance(v, float) else str(v) for v in value)
            else:
                out[f.name] = str(value)
        return out

    def dumps(self) -> str:
        return "".join("{}={}\n".format(k, v) for k, v in self.to_mapping().items())

    def replace(self, **changes) -> "ExperimentConfig":
        config = dataclasses.replace(self, **changes)
        config.validate()
        return config

    # ---------------------------------------------------------- validation

    def validate(self):
        def need(cond, field_name, message):
            if not cond:
                raise ConfigError(message, field=field_name)

        need(self.task in TASKS, "task", "must be one of {}".format(", ".join(TASKS)))
        need(self.n_clients >= 1, "n_clients", "must be >= 1")
        need(self.rounds >= 1, "rounds", "must be >= 1")
        need(self.local_steps >= 1, "local_steps", "must be >= 1")
        need(math.isfinite(self.eta) and self.eta > 0, "eta", "must be finite and > 0")
        need(self.batch_size >= 1, "batch_size", "must be >= 1")
        need(0 < self.ratio <= 1, "ratio", "must be in (0, 1]")
        need(not (self.beta is not None and self.p_list is not None), "beta", "beta and p_list are exclusive")
        if self.beta is not None:
            need(1 <= self.beta <= self.n_clients, "beta", "must be in [1, n_clients]")
        if self.p_list is not None:
            need(len(self.p_list) == self.n_clients, "p_list", "needs exactly n_clients entries")
            need(all(0 < p <= 1 for p in self.p_list), "p_list", "every entry must be in (0, 1]")
        if self.r is not None:
            need(0 <= self.r <= 1, "r", "must be in [0, 1]")
            need(self.W is not None, "r", "two-group budgets need W as well")
            need(self.p_list is None, "r", "r and p_list are exclusive")
        if self.W is not None:
            need(self.W >= 1, "W", "must be >= 1")
        need(self.budget_layout in BUDGET_LAYOUTS, "budget_layout", "must be sorted or shuffled")
        need(0 <= self.gamma <= 1, "gamma", "must be in [0, 1]")
        need(self.classes_per_client >= 1, "classes_per_client", "must be >= 1")
        need(self.schedule in SCHEDULES, "schedule", "must be one of {}".format(", ".join(SCHEDULES)))
        need(self.variant in VARIANTS, "variant", "must be one of {}".format(", ".join(VARIANTS)))
        need(len(self.methods) > 0, "methods", "at least one method")
        if self.tau is not None:
            need(self.tau >= 0, "tau", "must be >= 0")
        for label in self.methods:
            try:
                self.method_spec(label)
            except ValueError as e:
                raise ConfigError("{} ({})".format(label, e), field="methods") from e
        if self.backup_set is not None:
            need(all(0 <= i < self.n_clients for i in self.backup_set), "backup_set", "unknown client id")
        need(self.seed >= 0, "seed", "must be >= 0")
        need(self.seeds >= 1, "seeds", "must be >= 1")
        need(self.n_samples >= 1, "n_samples", "must be >= 1")
        need(self.input_dim >= 1, "input_dim", "must be >= 1")
        need(self.n_classes >= 2, "n_classes", "must be >= 2")
        need(self.hidden_dim >= 1, "hidden_dim", "must be >= 1")
        need(self.cluster_std > 0, "cluster_std", "must be > 0")
        need(self.sigma_g >= 0, "sigma_g", "must be >= 0")
        need(self.l_max >= 0.1, "l_max", "must be >= 0.1")
        need(self.noise_sigma >= 0, "noise_sigma", "must be >= 0")
        if self.probe_client is not None:
            need(0 <= self.probe_client < self.n_clients, "probe_client", "unknown client id")
        if self.task == "idx-mlp":
            need(self.idx_train_images and self.idx_train_labels, "idx_train_images", "idx-mlp needs IDX files")
        return self

    # ------------------------------------------------------------- derived

    def budgets(self, seed: int = None) -> BudgetAssignment:
        seed = self.seed if seed is None else seed
        if self.p_list is not None:
            budgets = explicit_budgets(self.p_list)
        elif self.r is not None:
            budgets = two_group_budgets(self.n_clients, self.r, self.W)
        else:
            budgets = assign_budgets(self.n_clients, self.beta if self.beta is not None else setting.default_beta)
        if self.budget_layout == "shuffled":
            budgets = shuffle_budgets(budgets, seed)
        return budgets

    def method_spec(self, label: str, budgets: BudgetAssignment = None) -> MethodSpec:
        backup_set = self.backup_set
        if backup_set is None:
            budgets = budgets or self.budgets()
            backup_set = tuple(i for i, p in enumerate(budgets.p) if p < 1.0)
        return MethodSpec.parse(
            label,
            variant=self.variant,
            schedule=self.schedule,
            tau=self.tau if self.tau is not None else self.rounds,
            W=self.W,
            backup_set=backup_set,
        )

    def seed_list(self) -> List[int]:
        return [self.seed + k for k in range(self.seeds)]
