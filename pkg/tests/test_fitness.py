import numpy as np
import pytest

from conftest import make_evaluator
from fsro import FitnessParams
from fsro.core import ConfigError, new_mask
from fsro.fitness import (
    error_rate,
    fitness_value,
    knn_classify,
    knn_predict,
    minmax_normalize,
)
from oracles import brute_error_rate, brute_knn_classify


def test_normalize_midpoint():
    train = np.array([[0.0], [10.0]])
    out = minmax_normalize(train, np.array([[5.0]]))
    assert out[0, 0] == 0.5


def test_normalize_constant_column_maps_to_zero():
    train = np.array([[3.0, 1.0], [3.0, 2.0]])
    out = minmax_normalize(train, train)
    assert np.all(out[:, 0] == 0.0)


def test_normalize_endpoints_and_no_clamping():
    train = np.array([[0.0], [4.0]])
    out = minmax_normalize(train, np.array([[4.0], [8.0], [-2.0]]))
    assert out[0, 0] == 1.0
    assert out[1, 0] == 2.0
    assert out[2, 0] == -0.5


def test_knn_exact_match_wins_at_k1():
    train_x = np.array([[0.0, 0.0], [5.0, 5.0], [9.0, 1.0]])
    train_y = np.array([0, 1, 0])
    assert knn_classify(train_x, train_y, [5.0, 5.0], 1, new_mask([1, 1])) == 1


def test_knn_vote_tie_smaller_class_wins():
    # both classes at the same distance from the query, k=2
    train_x = np.array([[1.0], [3.0]])
    train_y = np.array([1, 0])
    assert knn_classify(train_x, train_y, [2.0], 2, new_mask([1])) == 0


def test_knn_distance_tie_smaller_index_wins():
    # masking out the only separating feature leaves identical instances
    train_x = np.array([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0]])
    train_y = np.array([2, 0, 1])
    assert knn_classify(train_x, train_y, [9.0, 7.0], 1, new_mask([0, 1])) == 2


def test_knn_rejects_empty_mask_and_large_k():
    train_x = np.array([[1.0], [2.0]])
    train_y = np.array([0, 1])
    with pytest.raises(ValueError):
        knn_classify(train_x, train_y, [1.0], 1, new_mask([0]))
    with pytest.raises(ValueError):
        knn_classify(train_x, train_y, [1.0], 3, new_mask([1]))


def test_knn_agrees_with_bruteforce_oracle():
    # integer-valued fixtures so both routes compute exact distances and
    # genuinely exercise both tie rules
    rng = np.random.default_rng(1234)
    for trial in range(100):
        n = int(rng.integers(5, 51))
        d = int(rng.integers(1, 11))
        k = int(rng.integers(1, min(n, 7) + 1))
        train_x = rng.integers(0, 5, size=(n, d)).astype(np.float64)
        train_y = rng.integers(0, int(rng.integers(2, 5)), size=n).astype(np.int64)
        mask = np.zeros(d, dtype=np.uint8)
        mask[rng.choice(d, size=int(rng.integers(1, d + 1)), replace=False)] = 1
        queries = rng.integers(0, 5, size=(3, d)).astype(np.float64)
        got = knn_predict(train_x, train_y, queries, k, mask)
        for q, pred in zip(queries, got):
            assert pred == brute_knn_classify(train_x, train_y, q, k, mask)


def test_error_rate_zero_when_test_subset_of_train():
    rng = np.random.default_rng(7)
    train_x = rng.random((20, 4)) * 10
    train_y = np.arange(20) % 3
    mask = new_mask([1, 1, 1, 1])
    assert error_rate(train_x, train_y, train_x[:5], train_y[:5], 1, mask) == 0.0


def test_error_rate_one_when_labels_flipped():
    train_x = np.array([[0.0], [10.0]])
    train_y = np.array([0, 1])
    test_x = np.array([[1.0], [9.0]])
    test_y = np.array([1, 0])
    assert error_rate(train_x, train_y, test_x, test_y, 1, new_mask([1])) == 1.0


def test_error_rate_matches_allpairs_oracle_on_desk_fixture():
    train_x = np.array([[0.0, 1.0], [4.0, 2.0], [8.0, 3.0]])
    train_y = np.array([0, 1, 0])
    test_x = np.array([[1.0, 1.0], [7.0, 3.0], [4.0, 0.0]])
    test_y = np.array([0, 0, 1])
    mask = new_mask([1, 1])
    got = error_rate(train_x, train_y, test_x, test_y, 1, mask)
    want = brute_error_rate(train_x, train_y, test_x, test_y, 1, mask)
    assert got == want


def test_fitness_hand_values():
    assert fitness_value(0.0, 6, 13, 0.9) == pytest.approx(0.9 * 0 + 0.1 * 6 / 13)
    assert fitness_value(1.0, 10, 10, 0.9) == 1.0
    assert fitness_value(0.1, 5, 10, 0.9) == pytest.approx(0.14)


def test_fitness_full_mask_zero_error_equals_beta():
    params = FitnessParams(alpha=0.9)
    assert fitness_value(0.0, 13, 13, params.alpha) == pytest.approx(params.beta)


def test_fitness_monotone_in_subset_size_at_equal_error():
    f_small = fitness_value(0.2, 3, 10, 0.9)
    f_large = fitness_value(0.2, 4, 10, 0.9)
    assert f_small < f_large


def test_params_validation():
    with pytest.raises(ConfigError):
        FitnessParams(alpha=1.5)
    with pytest.raises(ConfigError):
        FitnessParams(k_neighbors=0)
    assert FitnessParams(alpha=0.7).beta == pytest.approx(0.3)


def test_evaluator_bounds_and_cache(small_m_of_n):
    evaluator, _ = make_evaluator(small_m_of_n, seed=3)
    rng = np.random.default_rng(0)
    for _ in range(30):
        mask = np.zeros(small_m_of_n.n_features, dtype=np.uint8)
        mask[rng.choice(small_m_of_n.n_features,
                        size=int(rng.integers(1, small_m_of_n.n_features + 1)),
                        replace=False)] = 1
        first = evaluator.evaluate(mask)
        assert 0.0 <= first <= 1.0
        assert evaluator.evaluate(mask) == first


def test_evaluator_fresh_instance_bit_identical(small_m_of_n):
    e1, _ = make_evaluator(small_m_of_n, seed=5)
    e2, _ = make_evaluator(small_m_of_n, seed=5)
    mask = new_mask([1, 0, 1, 1])
    assert e1.evaluate(mask) == e2.evaluate(mask)
    assert e1.error_and_fitness(mask) == e2.error_and_fitness(mask)


def test_evaluator_matches_standalone_error_rate(small_m_of_n):
    evaluator, _ = make_evaluator(small_m_of_n, seed=9)
    mask = new_mask([1, 1, 0, 1])
    err, _ = evaluator.error_and_fitness(mask)
    standalone = error_rate(evaluator.train_x, evaluator.train_y,
                            evaluator.test_x, evaluator.test_y,
                            evaluator.params.k_neighbors, mask)
    assert err == standalone


def test_evaluator_rejects_zero_mask(small_m_of_n):
    evaluator, _ = make_evaluator(small_m_of_n, seed=2)
    with pytest.raises(ValueError):
        evaluator.evaluate(np.zeros(small_m_of_n.n_features, dtype=np.uint8))
