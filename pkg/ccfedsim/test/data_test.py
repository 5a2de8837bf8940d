import gzip
import struct

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_array_equal

from ccfedsim.data import (
    DataShard,
    PartitionPlan,
    assign_budgets,
    explicit_budgets,
    generate_synthetic,
    load_idx,
    partition,
    shuffle_budgets,
    train_test_split,
    two_group_budgets,
)
from ccfedsim.data.budget import full_budget_count
from ccfedsim.data.idx import IDX_IMAGE_MAGIC, IDX_LABEL_MAGIC
from ccfedsim.data.partition import partition_indices
from ccfedsim.exceptions import DataFormatError
from ccfedsim.utils import rng as rngs


def _write_idx(tmp_path, images, labels, image_magic=IDX_IMAGE_MAGIC, label_magic=IDX_LABEL_MAGIC, gz=False):
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    n, rows, cols = images.shape
    image_bytes = struct.pack(">IIII", image_magic, n, rows, cols) + images.tobytes()
    label_bytes = struct.pack(">II", label_magic, labels.size) + labels.tobytes()
    suffix = ".gz" if gz else ""
    image_path = tmp_path / ("images" + suffix)
    label_path = tmp_path / ("labels" + suffix)
    opener = gzip.open if gz else open
    with opener(image_path, "wb") as f:
        f.write(image_bytes)
    with opener(label_path, "wb") as f:
        f.write(label_bytes)
    return str(image_path), str(label_path)


# ------------------------------------------------------------------ synthetic


def test_synthetic_is_deterministic():
    a = generate_synthetic(300, 5, 3, seed=7)
    b = generate_synthetic(300, 5, 3, seed=7)
    assert_array_equal(a[0], b[0])
    assert_array_equal(a[1], b[1])
    c = generate_synthetic(300, 5, 3, seed=8)
    assert not np.array_equal(a[0], c[0])


def test_synthetic_stratified():
    _, labels = generate_synthetic(1000, 4, 2, seed=0)
    assert np.bincount(labels).tolist() == [500, 500]
    _, labels = generate_synthetic(10, 2, 3, seed=0)
    assert np.bincount(labels).tolist() == [4, 3, 3]


def test_synthetic_rejects_bad_sizes():
    with pytest.raises(ValueError):
        generate_synthetic(0, 5, 3, seed=0)
    with pytest.raises(ValueError):
        generate_synthetic(10, 5, 1, seed=0)


def test_train_test_split_is_disjoint():
    features, labels = generate_synthetic(1000, 3, 4, seed=1)
    train_x, train_y, test_x, test_y = train_test_split(features, labels, 0.2, seed=1)
    assert train_y.size == 800 and test_y.size == 200
    assert np.bincount(test_y).tolist() == [50, 50, 50, 50]
    rows = {tuple(r) for r in train_x}
    assert not any(tuple(r) in rows for r in test_x)


# ------------------------------------------------------------------------ idx


def test_load_idx(tmp_path):
    images = np.zeros((3, 2, 2), dtype=np.uint8)
    images[0, 0, 0] = 255
    images[2, 1, 1] = 51
    images_path, labels_path = _write_idx(tmp_path, images, [1, 0, 9])
    features, labels = load_idx(images_path, labels_path)
    assert features.shape == (3, 4)
    assert features[0, 0] == 1.0
    assert features[2, 3] == 51 / 255
    assert labels.tolist() == [1, 0, 9]


def test_load_idx_gzip(tmp_path):
    images_path, labels_path = _write_idx(tmp_path, np.full((2, 3, 3), 7), [2, 3], gz=True)
    features, labels = load_idx(images_path, labels_path)
    assert features.shape == (2, 9)
    assert labels.tolist() == [2, 3]


def test_load_idx_bad_magic(tmp_path):
    images_path, labels_path = _write_idx(tmp_path, np.zeros((2, 2, 2)), [0, 1], label_magic=0x803)
    with pytest.raises(DataFormatError):
        load_idx(images_path, labels_path)


def test_load_idx_count_mismatch(tmp_path):
    images_path, labels_path = _write_idx(tmp_path, np.zeros((10, 2, 2)), list(range(9)))
    with pytest.raises(DataFormatError, match="count mismatch"):
        load_idx(images_path, labels_path)


def test_load_idx_truncated(tmp_path):
    images_path, labels_path = _write_idx(tmp_path, np.zeros((4, 2, 2)), [0, 1, 2, 3])
    with open(images_path, "rb") as f:
        data = f.read()
    with open(images_path, "wb") as f:
        f.write(data[:-3])
    with pytest.raises(DataFormatError, match="truncated"):
        load_idx(images_path, labels_path)


def test_load_idx_missing_file(tmp_path):
    with pytest.raises(DataFormatError):
        load_idx(str(tmp_path / "nope"), str(tmp_path / "nope2"))


# ------------------------------------------------------------------ partition


def test_partition_fully_non_iid():
    features, labels = generate_synthetic(10000, 3, 10, seed=0)
    shards = partition(features, labels, PartitionPlan(gamma=0.0, n_clients=10, classes_per_client=2, seed=0))
    assert len(shards) == 10
    for shard in shards:
        assert len(set(shard.labels.tolist())) == 2


def test_partition_iid_matches_global_distribution():
    features, labels = generate_synthetic(10000, 3, 10, seed=0)
    shards = partition(features, labels, PartitionPlan(gamma=1.0, n_clients=10, seed=0))
    global_dist = np.bincount(labels, minlength=10) / labels.size
    for shard in shards:
        tv = 0.5 * np.abs(shard.label_distribution(10) - global_dist).sum()
        assert tv <= 0.1


@settings(max_examples=30, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=0, max_value=1000),
)
def test_partition_is_disjoint_cover(gamma, n_clients, cpc, seed):
    _, labels = generate_synthetic(240, 2, 4, seed=seed)
    sets = partition_indices(labels, PartitionPlan(gamma, n_clients, cpc, seed))
    all_ids = np.concatenate(sets)
    assert all_ids.size == labels.size
    assert np.unique(all_ids).size == labels.size


def test_partition_iid_share_comes_from_one_permutation():
    # 90/10 class imbalance, the iid share is round(gamma * n) of the whole set
    labels = np.array([0] * 90 + [1] * 10)
    plan = PartitionPlan(gamma=0.3, n_clients=4, classes_per_client=1, seed=7)
    sets = partition_indices(labels, plan)
    iid = rngs.stream(7, rngs.PARTITION).permutation(100)[:30]
    for j, ids in enumerate(sets):
        assert set(iid[j::4].tolist()) <= set(ids.tolist())


def test_partition_errors():
    features, labels = generate_synthetic(100, 2, 3, seed=0)
    with pytest.raises(ValueError):
        partition(features, labels, PartitionPlan(gamma=0.0, n_clients=4, classes_per_client=4))
    with pytest.raises(ValueError):
        PartitionPlan(gamma=1.5, n_clients=4)
    with pytest.raises(ValueError):
        partition(features[:3], labels[:3], PartitionPlan(gamma=0.5, n_clients=4))


def test_shard_validation():
    with pytest.raises(ValueError):
        DataShard(np.zeros((2, 2)), np.array([0, 1, 2]))
    with pytest.raises(ValueError):
        DataShard(np.zeros((1, 2)), np.array([-1]))
    shard = DataShard(np.zeros((2, 2)), np.array([0, 1]), client_id=3)
    with pytest.raises(ValueError):
        shard.features[0, 0] = 1.0


# -------------------------------------------------------------------- budgets


def test_budgets_beta_four():
    budgets = assign_budgets(8, 4)
    assert budgets.p == (1.0, 1.0, 0.5, 0.5, 0.25, 0.25, 0.125, 0.125)
    assert budgets.r == 0.75
    assert budgets.W == (1, 1, 2, 2, 4, 4, 8, 8)


def test_budgets_beta_one_is_full():
    assert set(assign_budgets(8, 1).p) == {1.0}


@given(st.integers(min_value=1, max_value=64), st.data())
def test_budgets_full_count_and_monotone(n, data):
    beta = data.draw(st.integers(min_value=1, max_value=n))
    p = assign_budgets(n, beta).p
    assert sum(1 for x in p if x == 1.0) == full_budget_count(n, beta)
    assert all(a >= b for a, b in zip(p, p[1:]))


def test_budgets_errors():
    with pytest.raises(ValueError):
        assign_budgets(8, 9)
    with pytest.raises(ValueError):
        explicit_budgets([1.0, 0.0])


def test_two_group_budgets():
    assert two_group_budgets(8, 0.5, 4).p == (1.0, 1.0, 1.0, 1.0, 0.25, 0.25, 0.25, 0.25)
    assert set(two_group_budgets(8, 0.0, 8).p) == {1.0}
    assert set(two_group_budgets(8, 1.0, 1).p) == {1.0}


def test_shuffled_budgets_keep_levels():
    budgets = assign_budgets(8, 4)
    shuffled = shuffle_budgets(budgets, seed=3)
    assert sorted(shuffled.p) == sorted(budgets.p)
    assert shuffle_budgets(budgets, seed=3) == shuffled
