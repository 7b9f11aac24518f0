import itertools

import numpy as np
import pytest

from nettomo.netgraph import Network, RoutingMatrix

# link ids are 0-based: link l_k of the worked examples is column k-1

FIG2_EDGES = (("n2", "n3", 0), ("n1", "n3", 1), ("n3", "n4", 2), ("n4", "n6", 3), ("n4", "n5", 4))
FIG2_BOUNDARY = frozenset({"n1", "n2", "n5", "n6"})
CANDIDATES_6 = [[0, 2, 3], [0, 2, 4], [1, 2, 3], [1, 2, 4], [0, 1], [3, 4]]
FOUR_PATHS = [[0, 2, 3], [1, 2, 4], [0, 1], [3, 4]]

EIGHT_LINK_PATHS = [[0, 1], [0, 2, 3], [1, 2, 4], [3, 5, 6], [4, 5, 7], [6, 7]]

TWO_CLASS_ROWS = [[1, 1, 0, 0, 1, 0], [1, 0, 1, 0, 0, 1], [0, 0, 0, 1, 1, 1]]

FIG7_T = np.array([[0, 1, 1, 0], [1, 0, 1, 1], [1, 1, 0, 0], [0, 1, 0, 0]])
FIG7_T3 = np.array([[2, 4, 3, 1], [4, 2, 4, 3], [3, 4, 2, 1], [1, 3, 1, 0]])

# null-space vectors of the eight-link matrix, two-decimal precision
W1 = np.array([0.36, -0.36, -0.23, -0.14, 0.59, -0.23, 0.36, -0.36])
# last entry sign flipped relative to the two-decimal listing it comes from:
# only with +0.18 is R w2 ~ 0 and w1 + 0.3 w2 equal to the listed combination
W2 = np.array([-0.18, 0.18, -0.45, 0.63, 0.26, -0.45, -0.18, 0.18])
X_EXAMPLE = np.array([0.1, 0.1, 0.1, 0.1, 1.0, 0.1, 0.1, 0.1])
Y_EXAMPLE = np.array([0.2, 0.3, 1.2, 0.3, 1.2, 0.2])

FOUR_PATH_RTR = np.array([
    [2, 1, 1, 1, 0],
    [1, 2, 1, 0, 1],
    [1, 1, 2, 1, 1],
    [1, 0, 1, 2, 1],
    [0, 1, 1, 1, 2],
])


def _routing(paths, n):
    return RoutingMatrix.from_paths(paths, n)


@pytest.fixture
def fig2_network():
    nodes = tuple(f"n{i}" for i in range(1, 7))
    return Network(nodes, FIG2_EDGES, FIG2_BOUNDARY)


@pytest.fixture
def candidates6():
    return _routing(CANDIDATES_6, 5)


@pytest.fixture
def four_paths():
    return _routing(FOUR_PATHS, 5)


@pytest.fixture
def eight_link():
    return _routing(EIGHT_LINK_PATHS, 8)


@pytest.fixture
def two_class():
    return RoutingMatrix(np.array(TWO_CLASS_ROWS))


def brute_force_min(r, feasible):
    """Smallest subset (as 0/1 vector) of range(r) accepted by ``feasible``."""
    for size in range(1, r + 1):
        for combo in itertools.combinations(range(r), size):
            ind = np.zeros(r, dtype=np.int64)
            ind[list(combo)] = 1
            if feasible(ind):
                return size
    return None
