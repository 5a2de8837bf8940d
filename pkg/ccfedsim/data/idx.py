# coding:utf8
"""
IDX reader (MNIST / FMNIST distribution format).

Data format (big endian):
    i32 | Magic  0x00000803 images, 0x00000801 labels
    i32 | Item count
    i32 | Row count      (images only)
    i32 | Column count   (images only)
    u8[] | Pixels row-wise / labels
"""
import gzip
import struct
from typing import Tuple

import numpy as np

from ccfedsim.exceptions import DataFormatError
from ccfedsim.utils import log

logger = log.get_logger(__file__)

IDX_IMAGE_MAGIC = 0x00000803
IDX_LABEL_MAGIC = 0x00000801


def _read_bytes(path: str) -> bytes:
    opener = gzip.open if str(path).endswith(".gz") else open
    try:
        with opener(path, "rb") as f:
            return f.read()
    except OSError as e:
        raise DataFormatError(str(e), path=path) from e


def _header(data: bytes, n_fields: int, path: str) -> Tuple[int, ...]:
    if len(data) < 4 * n_fields:
        raise DataFormatError("truncated header", path=path)
    return struct.unpack(">" + "I" * n_fields, data[: 4 * n_fields])


def read_idx_images(path: str) -> np.ndarray:
    data = _read_bytes(path)
    magic, count, rows, cols = _header(data, 4, path)
    if magic != IDX_IMAGE_MAGIC:
        raise DataFormatError("magic number mismatch in image file ({:#010x})".format(magic), path=path)
    expected = count * rows * cols
    body = data[16:]
    if len(body) < expected:
        raise DataFormatError("truncated file: {} pixel bytes, expected {}".format(len(body), expected), path=path)
    return np.frombuffer(body, dtype=np.uint8, count=expected).reshape(count, rows * cols)


def read_idx_labels(path: str) -> np.ndarray:
    data = _read_bytes(path)
    magic, count = _header(data, 2, path)
    if magic != IDX_LABEL_MAGIC:
        raise DataFormatError("magic number mismatch in label file ({:#010x})".format(magic), path=path)
    body = data[8:]
    if len(body) < count:
        raise DataFormatError("truncated file: {} labels, expected {}".format(len(body), count), path=path)
    return np.frombuffer(body, dtype=np.uint8, count=count)


def load_idx(images_path: str, labels_path: str) -> Tuple[np.ndarray, np.ndarray]:
    """
        Load an image/label pair, pixels scaled to [0, 1] (raw / 255)
    Args:
        images_path: may be gzip compressed (.gz)
        labels_path:

    Returns:
        (features (n, rows*cols) float64, labels (n,) int64)
    """
    images = read_idx_images(images_path)
    labels = read_idx_labels(labels_path)
    if images.shape[0] != labels.shape[0]:
        raise DataFormatError(
            "count mismatch: {} images but {} labels".format(images.shape[0], labels.shape[0]),
            path=images_path,
        )
    logger.debug("loaded {} idx samples from {}".format(images.shape[0], images_path))
    return images.astype(np.float64) / 255.0, labels.astype(np.int64)
