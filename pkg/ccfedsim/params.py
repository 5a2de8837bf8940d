# coding:utf8
"""
Flat parameter vectors.

Every model, local update and global update is a ``ParamVec``: an immutable,
finite, float64 vector. Reductions add elements strictly left to right, so a
run under a fixed seed is bit-reproducible.
"""
import math
from typing import Iterable, Sequence, Union

import numpy as np

from ccfedsim.exceptions import DimensionError, NonFiniteError


class ParamVec(object):
    """
    Immutable float64 vector

    Examples:
        >>> v = ParamVec([1.0, 2.0])
        >>> (v + ParamVec([3, 4])).tolist()
        [4.0, 6.0]
        >>> v.dim
        2
    """

    __slots__ = ("_values",)

    def __init__(self, values: Union[Sequence[float], np.ndarray, "ParamVec"]):
        if isinstance(values, ParamVec):
            self._values = values._values
            return
        arr = np.array(values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise ValueError("ParamVec needs at least one entry")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("non-finite entries in parameter vector")
        arr.flags.writeable = False
        self._values = arr

    @classmethod
    def zeros(cls, dim: int) -> "ParamVec":
        if dim < 1:
            raise ValueError("dim must be positive: {}".format(dim))
        return cls(np.zeros(dim))

    @property
    def dim(self) -> int:
        return self._values.size

    @property
    def values(self) -> np.ndarray:
        """read-only view"""
        return self._values

    def to_numpy(self) -> np.ndarray:
        """writable copy"""
        return self._values.copy()

    def tolist(self):
        return self._values.tolist()

    def __len__(self):
        return self.dim

    def __repr__(self):
        return "ParamVec({})".format(np.array2string(self._values, precision=6, threshold=8))

    def __eq__(self, other):
        if not isinstance(other, ParamVec):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self._values, other._values))

    def __hash__(self):
        return hash(self._values.tobytes())

    def __add__(self, other: "ParamVec") -> "ParamVec":
        return add(self, other)

    def __sub__(self, other: "ParamVec") -> "ParamVec":
        return sub(self, other)

    def __neg__(self) -> "ParamVec":
        return scale(self, -1.0)

    def __mul__(self, c: float) -> "ParamVec":
        return scale(self, c)

    __rmul__ = __mul__


def _check_dims(a: ParamVec, b: ParamVec):
    if a.dim != b.dim:
        raise DimensionError(a.dim, b.dim)


def add(a: ParamVec, b: ParamVec) -> ParamVec:
    _check_dims(a, b)
    return ParamVec(a.values + b.values)


def sub(a: ParamVec, b: ParamVec) -> ParamVec:
    _check_dims(a, b)
    return ParamVec(a.values - b.values)


def scale(a: ParamVec, c: float) -> ParamVec:
    c = float(c)
    if not math.isfinite(c):
        raise NonFiniteError("scale factor is not finite: {}".format(c))
    return ParamVec(a.values * c)


def _sum(values: np.ndarray) -> float:
    """left-to-right sum of the elements, cumsum never reorders"""
    return float(np.cumsum(values)[-1])


def dot(a: ParamVec, b: ParamVec) -> float:
    _check_dims(a, b)
    return _sum(a.values * b.values)


def norm_sq(a: ParamVec) -> float:
    return _sum(a.values * a.values)


def l2_dist_sq(a: ParamVec, b: ParamVec) -> float:
    _check_dims(a, b)
    # (a-b)^2 == (b-a)^2 bitwise, so the result is symmetric exactly
    diff = a.values - b.values
    return _sum(diff * diff)


def cosine(a: ParamVec, b: ParamVec) -> float:
    """
        <a,b> / (|a| |b|)
    Raises:
        ValueError: zero-norm input, the direction is undefined
    """
    _check_dims(a, b)
    na = math.sqrt(norm_sq(a))
    nb = math.sqrt(norm_sq(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine of a zero-norm vector is undefined")
    # normalise first so positive scaling cancels before the dot product
    value = _sum((a.values / na) * (b.values / nb))
    return max(-1.0, min(1.0, value))


def total(vectors: Iterable[ParamVec]) -> ParamVec:
    """left-to-right sum"""
    acc = None
    for v in vectors:
        if acc is None:
            acc = v.to_numpy()
            dim = v.dim
        else:
            if v.dim != dim:
                raise DimensionError(dim, v.dim)
            acc += v.values
    if acc is None:
        raise ValueError("cannot sum an empty sequence")
    return ParamVec(acc)


def mean(vectors: Sequence[ParamVec], divisor: int = None) -> ParamVec:
    """
        Left-to-right sum divided by ``divisor`` (default ``len(vectors)``)
    """
    vectors = list(vectors)
    divisor = len(vectors) if divisor is None else int(divisor)
    if divisor < 1:
        raise ValueError("divisor must be positive: {}".format(divisor))
    return ParamVec(total(vectors).values / divisor)
