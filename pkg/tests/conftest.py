import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fsro import FitnessParams, RngStream, generate_m_of_n
from fsro.data import stratified_split
from fsro.fitness import FitnessEvaluator

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def small_m_of_n():
    """4-feature, 40-instance dataset with a known optimal 2-feature subset."""
    return generate_m_of_n(2, 1, 2, 40, RngStream(7))


@pytest.fixture(scope="session")
def bench_m_of_n():
    """The 13-feature, 1000-instance dataset shape used by the benchmarks."""
    return generate_m_of_n(6, 3, 7, 1000, RngStream(99))


def make_evaluator(dataset, seed, params=None):
    params = params or FitnessParams()
    rng = RngStream(seed)
    split = stratified_split(dataset, params.train_fraction, rng)
    return FitnessEvaluator(dataset, split, params), rng
