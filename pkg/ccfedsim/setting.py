# coding:utf8
"""
setting
"""
import os
from os import path, getenv

if 1:
    # logging
    log_level = getenv("CCFEDSIM_LOG_LEVEL", "INFO").upper()
    local_log = getenv("CCFEDSIM_LOCAL_LOG", "false").lower() == "true"
    local_log_dir = getenv("CCFEDSIM_LOG_DIR") or None

if 1:
    # runtime
    workers = max(1, int(getenv("CCFEDSIM_WORKERS", "1")))
    show_progress = getenv("CCFEDSIM_SHOW_PROGRESS", "false").lower() == "true"
    output_dir = getenv("CCFEDSIM_OUTPUT_DIR", "output")

if 1:
    # idx files
    idx_train_images = getenv("CCFEDSIM_IDX_TRAIN_IMAGES")
    idx_train_labels = getenv("CCFEDSIM_IDX_TRAIN_LABELS")
    idx_test_images = getenv("CCFEDSIM_IDX_TEST_IMAGES")
    idx_test_labels = getenv("CCFEDSIM_IDX_TEST_LABELS")

if 1:
    # desk-scale experiment defaults
    default_task = "synthetic-logistic"
    default_n_clients = 8
    default_rounds = 200
    default_local_steps = 10
    default_eta = 0.05
    default_batch_size = 32
    default_ratio = 1.0
    default_beta = 4
    default_gamma = 0.5
    default_classes_per_client = 2
    default_schedule = "ad_hoc"
    default_variant = "client_backup"
    default_methods = ["fedavg_full", "cc_fedavg"]
    # synthetic data
    default_n_samples = 2000
    default_input_dim = 20
    default_n_classes = 4
    default_hidden_dim = 32
    default_cluster_std = 0.5
    # quadratic task
    default_sigma_g = 1.0
    default_l_max = 1.0
    default_noise_sigma = 0.0
    # share of data held out as the global test set
    test_fraction = 0.2

    # any parameter above this magnitude is divergence
    divergence_limit = 1e8

# import setting from execute dir
try:
    if path.dirname(__file__) != os.getcwd():
        from setting import *  # noqa
except ImportError:
    pass
