import numpy as np
import pytest
from hypothesis import strategies as st

from brownian_snake import _kernels as K
from brownian_snake import sampler as smp
from brownian_snake._rng import RngState
from brownian_snake.tree_core import TreeLikePath

GRID_DS = 0.25  # dt = 0.5, handy for hand examples


def dyck_heights(ups):
    """Integer contour of the tree whose DFS issues the given up/down choices.

    The first step is always up; the walk is closed with down steps.
    """
    k = [0, 1]
    for up in ups:
        if k[-1] == 0:
            break
        k.append(k[-1] + 1 if up else k[-1] - 1)
    while k[-1] > 0:
        k.append(k[-1] - 1)
    return np.array(k, dtype=np.int64)


@st.composite
def treelike_paths(draw, max_steps=40, ds=GRID_DS):
    ups = draw(st.lists(st.booleans(), max_size=max_steps))
    k = dyck_heights(ups)
    n_up = int(np.count_nonzero(np.diff(k) > 0))
    inc = draw(st.lists(st.floats(-2, 2, allow_nan=False, allow_subnormal=False),
                        min_size=n_up, max_size=n_up))
    f = K.attach_labels(k, np.asarray(inc, dtype=np.float64), 0.0)
    return TreeLikePath(k, f, ds)


@pytest.fixture
def tent():
    """Rise to 1 over [0, 1], fall over [1, 2] on a dt = 0.5 grid."""
    return np.array([0.0, 0.5, 1.0, 0.5, 0.0])


@pytest.fixture
def m_shape():
    return np.array([0.0, 0.5, 1.0, 0.5, 1.0, 0.5, 0.0])


@pytest.fixture(scope="session")
def small_snakes():
    """A few N0(. | W* <= -0.3) snakes on a coarse grid."""
    target = smp.SamplingTarget("N0_MIN_BELOW", (0.3,), 1e-2, 200_000)
    s = smp.Sampler(target, RngState(11, 0))
    return [s.sample() for _ in range(8)]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES.values():
            terminalreporter.write_line(line)
