import math

import numpy as np
import pytest

from relgas import Covector1D, FrameMap2D, GasState1D, GasState2D, ModelConstants

SUITE_SEED = 20260808


def make_states_1d(n=100, seed=SUITE_SEED):
    # states keep a margin from the invariant pole c p + v e = 0
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        state = GasState1D(rho=rng.uniform(0.5, 2.0), v=rng.uniform(-0.5, 0.5),
                           p=rng.uniform(0.5, 1.5), e=rng.uniform(1.0, 3.0))
        if abs(state.p + state.v * state.e) >= 0.25:
            out.append(state)
    return out


def make_states_2d(n=100, seed=SUITE_SEED + 1):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        q = rng.uniform(0.0, 0.5)
        th = rng.uniform(0.0, 2.0 * math.pi)
        out.append(GasState2D(rho=rng.uniform(0.5, 2.0), u=q * math.cos(th),
                              v=q * math.sin(th), p=rng.uniform(0.5, 1.5),
                              e=rng.uniform(1.0, 3.0)))
    return out


@pytest.fixture(scope="session")
def constants():
    return ModelConstants(c=1.0)


@pytest.fixture(scope="session")
def state_a():
    return GasState1D(rho=1.0, v=0.5, p=1.0, e=3.0)


@pytest.fixture(scope="session")
def state_b():
    return GasState2D(rho=1.0, u=0.3, v=0.4, p=1.0, e=3.0)


@pytest.fixture(scope="session")
def form_unit():
    return Covector1D(dt=1.0, dx=0.0)


@pytest.fixture(scope="session")
def identity_frame():
    return FrameMap2D.identity()


@pytest.fixture(scope="session")
def suite_1d():
    return make_states_1d()


@pytest.fixture(scope="session")
def suite_2d():
    return make_states_2d()
