# coding:utf8
from ccfedsim.harness.config import ExperimentConfig
from ccfedsim.harness.efficiency import EfficiencyResult, run_efficiency_comparison
from ccfedsim.harness.grid import GridCell, GridResult, run_grid_rw
from ccfedsim.harness.probe import ProbeRow, run_variance_probe
from ccfedsim.harness.runner import ExperimentResult, MethodResult, Task, build_task, run_experiment, run_method

__all__ = [
    "EfficiencyResult",
    "ExperimentConfig",
    "ExperimentResult",
    "GridCell",
    "GridResult",
    "MethodResult",
    "ProbeRow",
    "Task",
    "build_task",
    "run_efficiency_comparison",
    "run_experiment",
    "run_grid_rw",
    "run_method",
    "run_variance_probe",
]
