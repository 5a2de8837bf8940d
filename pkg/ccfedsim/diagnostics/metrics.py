# coding:utf8
"""
Per-round metrics and their CSV form.

CSV header (absent values are empty fields, floats carry 17 significant digits):

    round,method,seed,test_loss,test_acc,grad_norm_sq,min_grad_norm_sq,
    est_err_s2,est_err_s3,cos_s2,cos_s3,trained_count,estimated_count

``round`` is the 0-based index of the round just executed; losses and gradient
norms are measured on the model that round produced.
"""
import csv
import io
from dataclasses import astuple, dataclass
from typing import Iterable, List, Optional

from ccfedsim import util
from ccfedsim.exceptions import DataFormatError, OutputError

HEADER = (
    "round",
    "method",
    "seed",
    "test_loss",
    "test_acc",
    "grad_norm_sq",
    "min_grad_norm_sq",
    "est_err_s2",
    "est_err_s3",
    "cos_s2",
    "cos_s3",
    "trained_count",
    "estimated_count",
)


@dataclass(frozen=True)
class MetricRow(object):
    round: int
    method: str
    seed: int
    test_loss: float
    test_acc: Optional[float]
    grad_norm_sq: float
    min_grad_norm_sq_so_far: float
    est_err_s2: Optional[float] = None
    est_err_s3: Optional[float] = None
    cos_s2: Optional[float] = None
    cos_s3: Optional[float] = None
    trained_count: int = 0
    estimated_count: int = 0

    def to_fields(self) -> List[str]:
        out = []
        for value in astuple(self):
            if isinstance(value, float) or value is None:
                out.append(util.format_float(value))
            else:
                out.append(str(value))
        return out

    @classmethod
    def from_fields(cls, fields: List[str]) -> "MetricRow":
        if len(fields) != len(HEADER):
            raise ValueError("expected {} fields, got {}".format(len(HEADER), len(fields)))
        f = util.parse_float
        return cls(
            round=int(fields[0]),
            method=fields[1],
            seed=int(fields[2]),
            test_loss=f(fields[3]),
            test_acc=f(fields[4]),
            grad_norm_sq=f(fields[5]),
            min_grad_norm_sq_so_far=f(fields[6]),
            est_err_s2=f(fields[7]),
            est_err_s3=f(fields[8]),
            cos_s2=f(fields[9]),
            cos_s3=f(fields[10]),
            trained_count=int(fields[11]),
            estimated_count=int(fields[12]),
        )


def format_csv(header: Iterable[str], rows: Iterable[Iterable[str]]) -> List[str]:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow(list(row))
    return buf.getvalue().splitlines(keepends=True)


def write_metrics(rows: Iterable[MetricRow], path: str) -> str:
    """
        Write rows atomically, header only when there are no rows
    Returns:
        path
    """
    return util.atomic_write(path, format_csv(HEADER, (row.to_fields() for row in rows)))


def read_metrics(path: str) -> List[MetricRow]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            records = list(csv.reader(f))
    except OSError as e:
        raise OutputError(str(e), path=path) from e
    if not records or tuple(records[0]) != HEADER:
        raise DataFormatError("not a metrics file, unexpected header", path=path)
    try:
        return [MetricRow.from_fields(r) for r in records[1:]]
    except ValueError as e:
        raise DataFormatError(str(e), path=path) from e
