import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from ccfedsim.data import DataShard, generate_synthetic
from ccfedsim.diagnostics import track_global_gradient
from ccfedsim.objectives import (
    LogisticObjective,
    MLPObjective,
    QuadraticObjective,
    create_objective,
    global_minimizer,
)
from ccfedsim.objectives.classification import softmax_cross_entropy
from ccfedsim.params import ParamVec
from ccfedsim.utils import rng as rngs


def _shard(n=60, input_dim=5, n_classes=3, seed=0):
    features, labels = generate_synthetic(n, input_dim, n_classes, seed, cluster_std=1.0)
    return DataShard(features, labels, client_id=0)


def _numeric_gradient(obj, x, eps=1e-6):
    values = x.to_numpy()
    grad = np.zeros_like(values)
    for j in range(values.size):
        up, down = values.copy(), values.copy()
        up[j] += eps
        down[j] -= eps
        grad[j] = (obj.loss(ParamVec(up)) - obj.loss(ParamVec(down))) / (2 * eps)
    return grad


def test_quadratic_gradient():
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    b = np.array([1.0, -1.0])
    obj = QuadraticObjective(A, b)
    x = ParamVec([0.0, 0.0])
    assert_allclose(obj.full_gradient(x).values, A @ (x.values - b))
    # no noise: the stochastic gradient is exact
    sample = obj.stochastic_gradient(x, 1, rngs.stream(0, rngs.TRAIN))
    assert_array_equal(sample.grad.values, obj.full_gradient(x).values)


def test_quadratic_rejects_bad_matrix():
    with pytest.raises(ValueError):
        QuadraticObjective([[1.0, 2.0], [0.0, 1.0]], [0.0, 0.0])
    with pytest.raises(ValueError):
        QuadraticObjective([[-1.0, 0.0], [0.0, 1.0]], [0.0, 0.0])


def test_quadratic_noise_variance():
    obj = QuadraticObjective.random(10, rngs.stream(1, rngs.DATA), noise_sigma=0.3)
    x = ParamVec(np.ones(10))
    full = obj.full_gradient(x).values
    rng = rngs.stream(1, rngs.TRAIN)
    noise = np.array([obj.stochastic_gradient(x, 1, rng).grad.values - full for _ in range(4000)])
    assert abs(np.mean(np.sum(noise**2, axis=1)) - 0.09) < 0.09 * 0.05
    # per coordinate std is noise_sigma / sqrt(d)
    assert_allclose(np.var(noise, axis=0), 0.009, rtol=0.15)


def test_random_quadratic_spectrum():
    obj = QuadraticObjective.random(6, rngs.stream(3, rngs.DATA), l_max=2.0)
    eig = np.linalg.eigvalsh(obj.A)
    assert eig.min() >= 0.1 - 1e-9
    assert eig.max() <= 2.0 + 1e-9
    assert obj.smoothness == pytest.approx(eig.max())


def test_global_minimizer_zeroes_gradient():
    objs = [QuadraticObjective.random(4, rngs.stream(5, rngs.DATA, i)) for i in range(4)]
    x_star = global_minimizer(objs)
    assert track_global_gradient(objs, x_star) < 1e-20


@pytest.mark.parametrize("kind", ["logistic", "mlp"])
def test_classification_gradient_matches_finite_differences(kind):
    shard = _shard()
    if kind == "logistic":
        obj = LogisticObjective(shard, 5, 3)
        x = ParamVec(rngs.stream(0, rngs.INIT).normal(0, 0.3, size=obj.dim))
    else:
        obj = MLPObjective(shard, 5, 4, 3)
        x = obj.init_params(rngs.stream(0, rngs.INIT))
    assert_allclose(obj.full_gradient(x).values, _numeric_gradient(obj, x), rtol=1e-5, atol=1e-7)


def test_full_batch_equals_full_gradient():
    shard = _shard()
    obj = LogisticObjective(shard, 5, 3)
    x = ParamVec(np.linspace(-1, 1, obj.dim))
    sample = obj.stochastic_gradient(x, len(shard), rngs.stream(0, rngs.TRAIN))
    assert_array_equal(sample.grad.values, obj.full_gradient(x).values)


def test_minibatch_gradient_unbiased():
    shard = _shard(n=40)
    obj = LogisticObjective(shard, 5, 3)
    x = ParamVec(np.linspace(-0.5, 0.5, obj.dim))
    rng = rngs.stream(2, rngs.TRAIN)
    mean = np.mean([obj.stochastic_gradient(x, 4, rng).grad.values for _ in range(10000)], axis=0)
    full = obj.full_gradient(x).values
    assert np.linalg.norm(mean - full) < 0.1 * np.linalg.norm(full) + 1e-3


def test_batch_size_out_of_range():
    obj = LogisticObjective(_shard(n=10), 5, 3)
    with pytest.raises(ValueError):
        obj.stochastic_gradient(obj.init_params(), 11, rngs.stream(0, rngs.TRAIN))


def test_gradient_step_decreases_loss():
    obj = MLPObjective(_shard(), 5, 8, 3)
    x = obj.init_params(rngs.stream(4, rngs.INIT))
    x_next = x - 0.01 * obj.full_gradient(x)
    assert obj.loss(x_next) < obj.loss(x)


def test_linear_classifier_separates_clusters():
    features, labels = generate_synthetic(2000, 20, 4, seed=0)
    obj = LogisticObjective(DataShard(features, labels), 20, 4)
    x = obj.init_params()
    for _ in range(200):
        x = x - 0.1 * obj.full_gradient(x)
    _, acc = obj.evaluate(x)
    assert acc >= 0.9


def test_softmax_cross_entropy_is_stable():
    logits = np.array([[1000.0, 0.0], [0.0, -1000.0]])
    loss, grad = softmax_cross_entropy(logits, np.array([0, 0]))
    assert np.isfinite(loss)
    assert np.all(np.isfinite(grad))


def test_predict_ties_go_to_lowest_class():
    shard = DataShard(np.zeros((3, 2)), np.array([0, 1, 2]))
    obj = LogisticObjective(shard, 2, 3)
    assert obj.predict(obj.init_params()).tolist() == [0, 0, 0]


def test_create_objective():
    obj = create_objective("quadratic", A=np.eye(2), b=[0.0, 1.0])
    assert obj.dim == 2
    assert create_objective("mlp", shard=_shard(), input_dim=5, hidden_dim=4, n_classes=3).dim == 5 * 4 + 4 + 4 * 3 + 3
    with pytest.raises(ValueError):
        create_objective("cnn")
