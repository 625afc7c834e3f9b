import pytest

from mckp.core.generator import compute_budget, make_rng
from mckp.core.models import validate_instance

E1_GROUPS = [[(10, 4), (7, 2)], [(6, 5), (3, 1)]]

CORPUS_SIZE = 1000
CORPUS_SEED = 20240917


def make_e1(budget=6):
    return validate_instance(E1_GROUPS, budget)


def small_instance(rng, max_k=6, max_n=5, max_value=50):
    k = int(rng.integers(1, max_k, endpoint=True))
    groups = []
    for _ in range(k):
        n = int(rng.integers(1, max_n, endpoint=True))
        profits = rng.integers(1, max_value, size=n, endpoint=True).tolist()
        costs = rng.integers(1, max_value, size=n, endpoint=True).tolist()
        groups.append(list(zip(profits, costs)))
    budget = compute_budget([[c for _, c in g] for g in groups], rng)
    return validate_instance(groups, budget)


@pytest.fixture
def e1():
    return make_e1()


@pytest.fixture(scope='session')
def corpus():
    rng = make_rng(CORPUS_SEED)
    return [small_instance(rng) for _ in range(CORPUS_SIZE)]


@pytest.fixture(scope='session')
def integral_corpus(corpus):
    return [inst for inst in corpus if inst.integral]
