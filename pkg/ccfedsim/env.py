# coding:utf8
"""
Get all environment variable

"""
import sys
import os
from os import path
from dotenv import load_dotenv


# All env defines
env = {
    # logging
    "CCFEDSIM_LOG_LEVEL": "INFO",
    # write a rotating log file beside stdout
    "CCFEDSIM_LOCAL_LOG": "false",
    "CCFEDSIM_LOG_DIR": None,
    # forbidden better_exceptions
    "CCFEDSIM_FORBIDDEN_BETTER_EXCEPTIONS": "false",
    # threads used for per-client work inside a round
    "CCFEDSIM_WORKERS": "1",
    # tqdm progress bars
    "CCFEDSIM_SHOW_PROGRESS": "false",
    # directory of the default metrics file
    "CCFEDSIM_OUTPUT_DIR": "output",
    # IDX (FMNIST) files
    "CCFEDSIM_IDX_TRAIN_IMAGES": None,
    "CCFEDSIM_IDX_TRAIN_LABELS": None,
    "CCFEDSIM_IDX_TEST_IMAGES": None,
    "CCFEDSIM_IDX_TEST_LABELS": None,
}


# from ~/.ccfedsim/.env
GLOBAL_ENV_FILE = path.join(path.expanduser("~"), ".ccfedsim/.env")
if GLOBAL_ENV_FILE:
    load_dotenv(GLOBAL_ENV_FILE)

# from $(pwd)/.env
if sys.argv[0]:
    LOCAL_ENV_FILE = path.join(path.dirname(path.join(os.getcwd(), sys.argv[0])), ".env")
    if LOCAL_ENV_FILE:
        load_dotenv(LOCAL_ENV_FILE, override=True)
