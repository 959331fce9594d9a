"""Shared fixtures: reference plants from the benchmark set."""

import math
import warnings

import pytest

import delaymargin as dm


@pytest.fixture
def example_plant():
    # G(s) = (2s^2 + s + 3) / (s^3 + 2s^2 + 3s + 4)
    return dm.from_rational([3, 1, 2], [4, 3, 2, 1])


@pytest.fixture
def example_bf(example_plant):
    return dm.boundary_functions(example_plant, dm.BoundaryConfig(-0.1))


@pytest.fixture
def thowsen():
    return dm.from_rational([1], [1, 2, 1, 1])


@pytest.fixture
def chen():
    return dm.from_rational([0, 1], [1, 1, 1])


@pytest.fixture
def louisell():
    return dm.from_rational([-2, -1], [4, 1, 1])


@pytest.fixture
def han_yu_gu():
    # (b - c s)/s with b = 3, c = 0.1
    return dm.from_rational([3, -0.1], [0, 1])


@pytest.fixture
def hu_liu():
    return dm.from_rational([1, -0.2], [0, 1])


@pytest.fixture(scope="session")
def heat_plant():
    # 100-term rational approximation of 1-D heat diffusion
    zeros = [complex(-((n * math.pi) ** 2), 0.0) for n in range(1, 101)]
    poles = [complex(-(((n - 0.5) * math.pi) ** 2), 0.0) for n in range(1, 101)]
    gain = math.exp(sum(math.log((n - 0.5) ** 2 / n**2) for n in range(1, 101)))
    G = dm.PoleZeroGain(gain, zeros, poles)
    dm.validate(G)
    return G


def random_strictly_proper(rng):
    """Strictly proper conjugate-closed plant, n <= 6, roots in [-5,1]x[-5j,5j]."""
    n = int(rng.integers(1, 7))
    poles, budget = [], n
    while budget > 0:
        if budget >= 2 and rng.random() < 0.6:
            re, im = rng.uniform(-5, 1), rng.uniform(0.1, 5)
            poles += [complex(re, im), complex(re, -im)]
            budget -= 2
        else:
            poles.append(complex(rng.uniform(-5, 1), 0.0))
            budget -= 1
    m = int(rng.integers(0, n))
    zeros, budget = [], m
    while budget > 0:
        if budget >= 2 and rng.random() < 0.5:
            re, im = rng.uniform(-5, 1), rng.uniform(0.1, 5)
            zeros += [complex(re, im), complex(re, -im)]
            budget -= 2
        else:
            zeros.append(complex(rng.uniform(-5, 1), 0.0))
            budget -= 1
    gain = rng.uniform(0.1, 3.0) * (1.0 if rng.random() < 0.7 else -1.0)
    return dm.PoleZeroGain(gain, zeros, poles)


def clearance_respecting_sigma(G, rng):
    sigma = float(rng.uniform(-1.0, -0.05))
    if dm.boundary_clearance(G, dm.BoundaryConfig(sigma)) < 1e-3:
        sigma -= 2e-3
    return sigma


def quiet_analyze(G, sigma, h_max, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return dm.analyze_up_to(G, dm.BoundaryConfig(sigma), h_max, **kw)


def quiet_all_delays(G, sigma, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return dm.analyze_all_delays(G, dm.BoundaryConfig(sigma), **kw)
