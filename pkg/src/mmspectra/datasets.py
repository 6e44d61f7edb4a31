"""Small mm-spaces with known spectra and synthetic samples for experiments."""
from __future__ import annotations

import numpy as np

from .mmspace import MassPolicy, MmSpace, from_distance_matrix, from_graph, from_points

S2, S10 = np.sqrt(2.0), np.sqrt(10.0)


def two_point(a: float = 0.5, total: float = 1.0, r: float = 1.0) -> MmSpace:
    """Two points at distance ``r`` carrying masses ``a`` and ``total - a``."""
    return MmSpace([[0.0, r], [r, 0.0]], [a, total - a])


def simplex(n: int) -> MmSpace:
    """``n`` points at mutual distance 1 with mass ``1/n`` each."""
    d = np.ones((n, n)) - np.eye(n)
    return MmSpace(d, np.full(n, 1.0 / n))


def same_dod_pair_4():
    """Two non-isomorphic 4-point spaces with equal distributions of distances.

    The first gains a triangle at ``rho`` just above 2, the second a path.
    Uniform mass 1/4.
    """
    # nodes A, B, C, D
    tri = np.array([
        [0, S10, 4, S10],
        [S10, 0, S2, 2],
        [4, S2, 0, S2],
        [S10, 2, S2, 0],
    ])
    # nodes A', B', C', D'
    path = np.array([
        [0, 2, S10, S2],
        [2, 0, S2, S10],
        [S10, S2, 0, 4],
        [S2, S10, 4, 0],
    ])
    return from_distance_matrix(tri), from_distance_matrix(path)


def same_dod_pair_line():
    """``X = (0,1,4,10,12,17)`` and ``Y = (0,1,8,11,13,17)`` on the line, uniform mass."""
    return from_points([0, 1, 4, 10, 12, 17]), from_points([0, 1, 8, 11, 13, 17])


def path_graph_space(K: int = 4) -> MmSpace:
    return from_graph([(i, i + 1, 1.0) for i in range(K - 1)], K)


def barbell(size: int = 3, bridge: float = 5.0, seed=None) -> tuple[MmSpace, np.ndarray]:
    """Two unit-scale cliques joined by one long edge; returns the space and cluster labels.

    Inside each clique all distances are in ``[0.8, 1.2]``.  Distances are
    shortest paths in the resulting graph.
    """
    rng = np.random.default_rng(seed)
    edges = []
    for base in (0, size):
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((base + i, base + j, rng.uniform(0.8, 1.2)))
    edges.append((size - 1, size, bridge))
    labels = np.repeat([1, -1], size)
    return from_graph(edges, 2 * size), labels


def random_space(K: int, rng, dim: int = 2, mass: str = "random") -> MmSpace:
    """Random planar point cloud with random or uniform masses."""
    x = rng.uniform(0, 1, size=(K, dim))
    if mass == "uniform":
        return from_points(x)
    mu = rng.uniform(0.2, 1.0, size=K)
    return from_points(x, MassPolicy.explicit(mu / mu.sum()))


def random_two_point_sample(n: int, rng, a_range=(0.3, 0.7), r_range=(0.5, 1.5)):
    a = rng.uniform(*a_range, size=n)
    r = rng.uniform(*r_range, size=n)
    return [two_point(ai, 1.0, ri) for ai, ri in zip(a, r)]


def shape_family(kind: str, K: int, rng) -> MmSpace:
    """One random point cloud from a family of planar shapes, uniform mass.

    ``ring``: noisy unit circle; ``blob``: isotropic Gaussian;
    ``dumbbell``: two small well-separated clusters.
    """
    if kind == "ring":
        t = rng.uniform(0, 2 * np.pi, K)
        x = np.column_stack([np.cos(t), np.sin(t)]) + rng.normal(0, 0.05, (K, 2))
    elif kind == "blob":
        x = rng.normal(0, 0.5, (K, 2))
    elif kind == "dumbbell":
        side = rng.integers(0, 2, K) * 2 - 1
        x = rng.normal(0, 0.25, (K, 2))
        x[:, 0] += 1.5 * side
    else:
        raise ValueError(f"unknown shape family {kind!r}")
    return from_points(x)


FAMILIES = ("ring", "blob", "dumbbell")


def three_family_corpus(per_family: int = 10, K: int = 30, seed=0):
    """Spaces from the three shape families and their integer family labels."""
    rng = np.random.default_rng(seed)
    spaces, labels = [], []
    for f, kind in enumerate(FAMILIES):
        for _ in range(per_family):
            spaces.append(shape_family(kind, K, rng))
            labels.append(f)
    return spaces, np.array(labels)


def two_group_sample(n: int = 10, K: int = 20, seed=0, spread=(1.0, 3.0)):
    """Two groups of uniform point clouds on squares of different side.

    The denser group connects at smaller ``rho``, so its Fiedler value
    becomes positive first.
    """
    rng = np.random.default_rng(seed)
    groups = []
    for side in spread:
        groups.append([from_points(rng.uniform(0, side, (K, 2))) for _ in range(n)])
    return groups
