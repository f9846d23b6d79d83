import numpy as np
import pytest

from tempered import schwartz as sw


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_fn(rng, max_degree=16, decay=2.0):
    return sw.random_schwartz(rng, int(rng.integers(0, max_degree + 1)), decay=decay)


def trapezoid(values, dx):
    return np.trapezoid(values, dx=dx, axis=-1)


def grid(half_width=10.0, step=1e-3):
    n = int(round(2 * half_width / step))
    x = np.linspace(-half_width, half_width, n + 1)
    return x, x[1] - x[0]
