# coding:utf8
import functools
import os
import tempfile
import time
from typing import Callable, Iterable, Optional, Tuple, Type, Union

from ccfedsim.exceptions import OutputError, SimulatorError
from ccfedsim.utils import log

logger = log.get_logger(__file__)


def retry_decorator(
    exception: Union[Type[Exception], Tuple[Type[Exception], ...]], retry=2, delay=1, delay_ratio=1
):
    """
        Retry functions
    Args:
        exception: exception of this types will be ignored and re-execute function
        retry: retry times
        delay: retry interval, default is: delay * (delay_ratio ** retry)
        delay_ratio:

    Returns:

    """

    def deco_retry(f):
        @functools.wraps(f)
        def f_retry(*args, **kwargs):
            real_delay = delay
            last_exception = None
            for mretry in range(retry):
                try:
                    return f(*args, **kwargs)
                except exception as e:
                    logger.debug("function {} retrying {} ...".format(f.__name__, mretry))
                    time.sleep(real_delay)
                    real_delay = delay * (delay_ratio**mretry)
                    last_exception = e
            if last_exception is not None:
                raise last_exception

        return f_retry

    return deco_retry


@retry_decorator(OSError, retry=3, delay=0.2, delay_ratio=2)
def _atomic_write(path: str, lines: Iterable[str]):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp_", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            for line in lines:
                f.write(line)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.remove(tmp_path)
        except OSError:
            pass
        raise


def atomic_write(path: str, lines: Iterable[str]):
    """
        Write text to path through a temp file and a rename,
        readers never see a half written file.
    Args:
        path:
        lines: already terminated lines

    Returns:

    """
    lines = list(lines)
    try:
        _atomic_write(path, lines)
    except OSError as e:
        raise OutputError(str(e), path=path) from e
    return path


def with_suffix(path: str, suffix: str) -> str:
    """
        output.csv + ".summary" -> output.summary.csv
    """
    root, ext = os.path.splitext(path)
    return f"{root}{suffix}{ext or '.csv'}"


def format_float(value: Optional[float]) -> str:
    """17 significant digits, exact round trip; None -> empty field"""
    if value is None:
        return ""
    return format(float(value), ".17g")


def parse_float(text: str) -> Optional[float]:
    text = text.strip()
    if not text:
        return None
    return float(text)


def call_safely(callbacks: Iterable[Callable], *args, **kwargs):
    """
        Run hooks one by one, a failing hook is logged and skipped.
        SimulatorError always propagates so the run aborts with its exit code.
    """
    for _callback in callbacks:
        _callback_name = getattr(_callback, "__name__", _callback)
        try:
            _callback(*args, **kwargs)
        except SimulatorError:
            raise
        except Exception as e:
            logger.error("call function -> {} failed".format(_callback_name))
            logger.exception(e)
