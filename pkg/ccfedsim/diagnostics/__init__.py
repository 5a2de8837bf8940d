# coding:utf8
from ccfedsim.diagnostics.gradient import evaluate_global, track_global_gradient
from ccfedsim.diagnostics.metrics import HEADER, MetricRow, read_metrics, write_metrics
from ccfedsim.diagnostics.recorder import MetricsRecorder
from ccfedsim.diagnostics.shadow import ShadowResult, shadow_estimation_error, shadow_true_delta
from ccfedsim.diagnostics.variance import VarianceProbeResult, variance_probe

__all__ = [
    "HEADER",
    "MetricRow",
    "MetricsRecorder",
    "ShadowResult",
    "VarianceProbeResult",
    "evaluate_global",
    "read_metrics",
    "shadow_estimation_error",
    "shadow_true_delta",
    "track_global_gradient",
    "variance_probe",
    "write_metrics",
]
