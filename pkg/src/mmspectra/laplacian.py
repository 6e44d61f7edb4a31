"""The rho-dependent auxiliary graph of an mm-space and its Laplacian.

Two nodes are joined when their distance is *strictly* below ``rho``, with
weight equal to the product of their masses.  The Laplacian is the usual
``Deg - W``; it is also the sum over present edges of ``w * b b^T`` with
``b = e_i - e_j``, which is what the sweep accumulates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .mmspace import InputError, MmSpace


class EdgeEvent(NamedTuple):
    i: int
    j: int
    d: float
    w: float


@dataclass(frozen=True, eq=False)
class AuxiliaryGraph:
    rho: float
    W: np.ndarray
    deg: np.ndarray

    @property
    def K(self):
        return self.W.shape[0]


@dataclass(frozen=True, eq=False)
class RhoLaplacian:
    L: np.ndarray
    rho: float


def _check_rho(rho):
    if not rho > 0:
        raise InputError(f"rho must be positive, got {rho}")


def adjacency(space: MmSpace, rho: float) -> np.ndarray:
    """Boolean adjacency ``d < rho`` without self loops."""
    _check_rho(rho)
    adj = space.dist < rho
    np.fill_diagonal(adj, False)
    return adj


def build_auxiliary(space: MmSpace, rho: float) -> AuxiliaryGraph:
    adj = adjacency(space, rho)
    W = np.outer(space.mass, space.mass) * adj
    return AuxiliaryGraph(float(rho), W, W.sum(axis=1))


def laplacian(graph: AuxiliaryGraph) -> RhoLaplacian:
    L = np.diag(graph.deg) - graph.W
    return RhoLaplacian(L, graph.rho)


def rho_laplacian(space: MmSpace, rho: float) -> np.ndarray:
    """Shortcut for ``laplacian(build_auxiliary(space, rho)).L``."""
    return laplacian(build_auxiliary(space, rho)).L


def edge_events(space: MmSpace) -> list[EdgeEvent]:
    """All finite-distance pairs ``i < j`` sorted by (distance, i, j)."""
    iu, ju = np.triu_indices(space.K, 1)
    d = space.dist[iu, ju]
    keep = np.isfinite(d)
    iu, ju, d = iu[keep], ju[keep], d[keep]
    order = np.lexsort((ju, iu, d))
    mu = space.mass
    return [
        EdgeEvent(int(iu[o]), int(ju[o]), float(d[o]), float(mu[iu[o]] * mu[ju[o]]))
        for o in order
    ]


def edge_sum_laplacian(K: int, events, rho: float) -> np.ndarray:
    """Laplacian assembled from rank-one edge terms with ``d < rho``."""
    L = np.zeros((K, K))
    for e in events:
        if e.d < rho:
            L[e.i, e.i] += e.w
            L[e.j, e.j] += e.w
            L[e.i, e.j] -= e.w
            L[e.j, e.i] -= e.w
    return L


def apply_operator(space: MmSpace, rho: float, u) -> np.ndarray:
    """Apply the discrete rho-Laplace operator to a function on the nodes.

    ``(Delta u)_j = sum_{l : d(j,l) < rho} (u_j - u_l) mu_l / (rho^2 mu(B_j))``
    where the ball ``B_j`` includes the centre.
    """
    _check_rho(rho)
    u = np.asarray(u, dtype=float)
    if u.shape != (space.K,):
        raise InputError(f"u must have length {space.K}")
    ball = space.dist < rho
    np.fill_diagonal(ball, True)
    wmu = ball * space.mass[None, :]
    ball_mass = wmu.sum(axis=1)
    return (ball_mass * u - wmu @ u) / (rho**2 * ball_mass)


def dirichlet_form(space: MmSpace, rho: float, u) -> float:
    """Half the mass-weighted sum of squared differences over pairs closer than rho."""
    _check_rho(rho)
    u = np.asarray(u, dtype=float)
    K = space.K
    total = 0.0
    for j in range(K):
        for l in range(K):
            if j != l and space.dist[j, l] < rho:
                total += (u[j] - u[l]) ** 2 * space.mass[j] * space.mass[l]
    return 0.5 * total
