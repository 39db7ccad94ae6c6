import numpy as np
import pytest

from mlap.netio import (
    diagonal_fixture,
    joining_fixture,
    path3,
    product_fixture,
    triangle,
    two_component,
)

FIXTURE_MAKERS = {
    "triangle": triangle,
    "path3": path3,
    "two_component": two_component,
    "diagonal": diagonal_fixture,
    "product_measure": product_fixture,
    "joining_involution": joining_fixture,
}


@pytest.fixture(params=sorted(FIXTURE_MAKERS))
def any_net(request):
    return FIXTURE_MAKERS[request.param]()


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture
def path():
    return path3()


@pytest.fixture
def two_comp():
    return two_component()


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)


def all_subsets(n):
    """Every nonempty subset of range(n), as index lists."""
    return [[i for i in range(n) if bits >> i & 1] for bits in range(1, 2**n)]


def energy_double_sum(net, f, g):
    """Brute-force energy inner product straight from the definition."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    total = 0.0
    for i in range(net.n):
        for j in range(net.n):
            total += net.W[i, j] * (f[i] - f[j]) * (g[i] - g[j])
    return 0.5 * total
