# coding:utf8
"""
Loggers of the simulator.

Every module calls ``log.get_logger(__file__)`` and gets a child of the
``ccfedsim`` logger. Handlers live on that root only, so one environment
variable or one ``set_level`` call controls every module.
"""
import logging
import logging.handlers
import os
import platform
import sys
import tempfile

import tqdm

from ccfedsim import setting

try:
    from better_exceptions import format_exception
except Exception:
    format_exception = None


ROOT = "ccfedsim"
DEFAULT_LOG_FMT = "[%(threadName)s] [%(asctime)s] [%(levelname)s] [%(filename)s] [%(lineno)d] - %(message)s"


class TqdmStreamHandler(logging.StreamHandler):
    """writes through tqdm so running progress bars stay on their own line"""

    def emit(self, record):
        try:
            tqdm.tqdm.write(self.format(record), file=self.stream)
        except Exception:
            self.handleError(record)


class BetterExceptionsFormatter(logging.Formatter):
    def formatException(self, ei):
        if format_exception is None:
            return super().formatException(ei)
        text = format_exception(*ei)
        return text if isinstance(text, str) else "".join(text).rstrip("\n")


def detect_tmp_log_dir() -> str:
    """
        Get a writable log dir
    Returns:
        *unix: /var/log/ccfedsim_log/
        mac: /tmp/ccfedsim_log
        windows: tempfile.gettempdir()

    """
    system = platform.system()
    if system == "Windows":
        log_dir = tempfile.gettempdir()
    elif system == "Darwin":
        log_dir = "/tmp/"
    else:
        log_dir = "/var/log/"
    log_dir = os.path.join(log_dir, "ccfedsim_log")
    try:
        os.makedirs(log_dir, exist_ok=True)
    except PermissionError:
        log_dir = os.path.join(tempfile.gettempdir(), "ccfedsim_log")
        os.makedirs(log_dir, exist_ok=True)
    return log_dir


def _formatter(log_format: str) -> logging.Formatter:
    if os.getenv("CCFEDSIM_FORBIDDEN_BETTER_EXCEPTIONS", "false").lower() == "true":
        return logging.Formatter(log_format)
    return BetterExceptionsFormatter(log_format)


def _configure_root(log_level: str, local: bool, local_log_dir: str, log_format: str) -> logging.Logger:
    root = logging.getLogger(ROOT)
    configured = any(isinstance(h, TqdmStreamHandler) for h in root.handlers)
    # the environment level applies once, later calls keep set_level changes
    if log_level is not None:
        root.setLevel(log_level.upper())
    elif not configured:
        root.setLevel(setting.log_level)
    root.propagate = False
    formatter = _formatter(log_format)
    if not configured:
        handler = TqdmStreamHandler(stream=sys.stdout)
        handler.setFormatter(formatter)
        root.addHandler(handler)
    if local and not any(isinstance(h, logging.handlers.RotatingFileHandler) for h in root.handlers):
        local_log_dir = local_log_dir or detect_tmp_log_dir()
        file_handler = logging.handlers.RotatingFileHandler(
            os.path.join(local_log_dir, "{}.log".format(ROOT)),
            maxBytes=100 * 1024 * 1024,
            backupCount=10,
            encoding="utf-8",
        )
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)
    return root


def get_logger(
    name,
    log_level: str = None,
    local: bool = None,
    local_log_dir: str = None,
    log_format=DEFAULT_LOG_FMT,
) -> logging.Logger:
    """

    Args:
        name: usually __file__, the file stem names the logger
        log_level: default from CCFEDSIM_LOG_LEVEL
        local: also write a rotating file, default from CCFEDSIM_LOCAL_LOG
        local_log_dir: default from CCFEDSIM_LOG_DIR
        log_format:

    Returns:
        logger ``ccfedsim.<name>``
    """
    if local is None:
        local = setting.local_log
    local_log_dir = local_log_dir or setting.local_log_dir
    _configure_root(log_level, local, local_log_dir, log_format)

    name = os.path.basename(str(name)).split(".")[0]
    if name == "__init__":
        return logging.getLogger(ROOT)
    return logging.getLogger("{}.{}".format(ROOT, name))


def set_level(log_level: str):
    """change the level of every simulator logger at once"""
    logging.getLogger(ROOT).setLevel(log_level.upper())
