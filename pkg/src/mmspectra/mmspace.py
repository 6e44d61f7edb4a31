"""Finite metric measure spaces.

An mm-space here is a symmetric distance matrix together with a strictly
positive mass vector.  Pairs that can never be joined (disconnected graph
components) carry the ``+inf`` sentinel; thresholding ``d < rho`` stays well
defined for every finite ``rho``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

TRIANGLE_TOL = 1e-9
TIE_TOL = 1e-12


class InputError(ValueError):
    """Raised on malformed user input (bad indices, lengths, coordinates...)."""


class Violation(NamedTuple):
    rule: str
    indices: tuple

    def __str__(self):
        return f"{self.rule} at {self.indices}"


@dataclass(frozen=True)
class MassPolicy:
    """How masses are assigned to nodes when a space is constructed.

    ``kind`` is one of ``"uniform"``, ``"explicit"`` or ``"degree"``
    (degree-proportional: mass of a node proportional to the summed distance
    to its neighbours).  Explicit masses are used as given and ignore
    ``total_mass``.
    """

    kind: str = "uniform"
    explicit_masses: Sequence[float] | None = None
    total_mass: float = 1.0

    def __post_init__(self):
        if self.kind not in ("uniform", "explicit", "degree"):
            raise InputError(f"unknown mass policy {self.kind!r}")
        if (self.kind == "explicit") != (self.explicit_masses is not None):
            raise InputError("explicit_masses is required iff kind='explicit'")
        if not self.total_mass > 0:
            raise InputError("total_mass must be positive")

    @classmethod
    def uniform(cls, total_mass=1.0):
        return cls("uniform", None, total_mass)

    @classmethod
    def explicit(cls, masses):
        return cls("explicit", tuple(float(m) for m in masses))

    @classmethod
    def degree(cls, total_mass=1.0):
        return cls("degree", None, total_mass)


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MmSpace:
    """A finite metric measure space.

    Parameters
    ----------
    dist : array_like, shape (K, K)
        Symmetric dissimilarities with zero diagonal; ``np.inf`` marks pairs
        that are never connected.
    mass : array_like, shape (K,)
        Strictly positive node masses.
    labels : sequence, optional
        Node identifiers, defaults to ``0..K-1``.

    Construction only checks shapes.  Use :func:`validate` for the metric
    and mass invariants.
    """

    dist: np.ndarray
    mass: np.ndarray
    labels: tuple = field(default=None)

    def __post_init__(self):
        dist = _readonly(self.dist)
        mass = _readonly(self.mass).ravel()
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise InputError(f"dist must be square, got shape {dist.shape}")
        if mass.shape[0] != dist.shape[0]:
            raise InputError(
                f"mass has length {mass.shape[0]} but dist is {dist.shape[0]}x{dist.shape[0]}"
            )
        if dist.shape[0] < 1:
            raise InputError("an mm-space needs at least one point")
        labels = self.labels
        if labels is None:
            labels = tuple(range(dist.shape[0]))
        else:
            labels = tuple(labels)
            if len(labels) != dist.shape[0]:
                raise InputError("labels must have one entry per node")
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "labels", labels)

    @property
    def K(self) -> int:
        return self.dist.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.mass.sum())

    def permute(self, perm) -> "MmSpace":
        """Relabel nodes: node ``i`` of the result is node ``perm[i]`` of self."""
        perm = np.asarray(perm)
        return MmSpace(
            self.dist[np.ix_(perm, perm)],
            self.mass[perm],
            [self.labels[p] for p in perm],
        )

    def with_mass(self, mass) -> "MmSpace":
        return MmSpace(self.dist, mass, self.labels)

    def __repr__(self):
        return f"MmSpace(K={self.K}, total_mass={self.total_mass:.6g})"


def validate(space: MmSpace, check_triangle: bool = False, strict_metric: bool = False):
    """Check the mm-space invariants and report every violation.

    Never raises.  Returns an empty list when the space is valid.  With
    ``strict_metric`` distinct points at distance zero are reported too.
    """
    d, mu = space.dist, space.mass
    out = []
    bad = np.isnan(d) | (d < 0) | (d == -np.inf)
    for i, j in zip(*np.nonzero(bad)):
        out.append(Violation("invalid distance", (int(i), int(j))))
    diag = np.nonzero(np.diag(d) != 0)[0]
    for i in diag:
        out.append(Violation("nonzero diagonal", (int(i), int(i))))
    with np.errstate(invalid="ignore"):
        asym = ~((d == d.T) | (np.abs(d - d.T) <= TIE_TOL))
    for i, j in zip(*np.nonzero(np.triu(asym, 1))):
        out.append(Violation("asymmetry", (int(i), int(j))))
    for j in np.nonzero(~(mu > 0) | ~np.isfinite(mu))[0]:
        out.append(Violation("nonpositive mass", (int(j),)))
    if strict_metric:
        zero = (d == 0) & ~np.eye(space.K, dtype=bool)
        for i, j in zip(*np.nonzero(np.triu(zero, 1))):
            out.append(Violation("coincident points", (int(i), int(j))))
    if check_triangle and not out:
        # d[i, k] > d[i, j] + d[j, k]; inf on the right hand side never violates
        with np.errstate(invalid="ignore"):
            via = d[:, :, None] + d[None, :, :]
            viol = d[:, None, :] > via + TRIANGLE_TOL
        for i, j, k in zip(*np.nonzero(viol)):
            if i < k and j != i and j != k:
                out.append(Violation("triangle inequality", (int(i), int(j), int(k))))
    return out


def _assign_mass(policy: MassPolicy, n: int, degree_sums=None):
    if policy.kind == "uniform":
        return np.full(n, policy.total_mass / n)
    if policy.kind == "explicit":
        m = np.asarray(policy.explicit_masses, dtype=float)
        if m.shape != (n,):
            raise InputError(f"expected {n} explicit masses, got {m.size}")
        if not np.all(m > 0) or not np.all(np.isfinite(m)):
            raise InputError("explicit masses must be finite and strictly positive")
        return m
    s = np.asarray(degree_sums, dtype=float)
    pos = s > 0
    if not pos.any():
        return np.full(n, policy.total_mass / n)
    # isolated nodes get the smallest positive mass so that mu > 0 holds
    s = np.where(pos, s, s[pos].min())
    return policy.total_mass * s / s.sum()


def from_distance_matrix(dist, policy: MassPolicy | None = None, labels=None) -> MmSpace:
    dist = np.asarray(dist, dtype=float)
    policy = policy or MassPolicy.uniform()
    n = dist.shape[0]
    deg = None
    if policy.kind == "degree":
        deg = np.where(np.isfinite(dist), dist, 0.0).sum(axis=1)
    return MmSpace(dist, _assign_mass(policy, n, deg), labels)


def from_points(coords, policy: MassPolicy | None = None, labels=None) -> MmSpace:
    """Build an mm-space from a point cloud with Euclidean distances.

    Parameters
    ----------
    coords : array_like, shape (N, D) or (N,)
        One row per point.  One-dimensional input is read as N points on a line.
    policy : MassPolicy, optional
        Defaults to the uniform probability measure.  Degree-proportional mass
        uses the summed distance to all other points.
    """
    x = np.asarray(coords, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 1:
        raise InputError("coords must be an (N, D) array with N >= 1")
    if not np.all(np.isfinite(x)):
        raise InputError("coordinates must be finite")
    diff = x[:, None, :] - x[None, :, :]
    dist = np.sqrt((diff**2).sum(-1))
    return from_distance_matrix(dist, policy, labels)


def from_graph(edges, n_nodes: int, policy: MassPolicy | None = None, labels=None) -> MmSpace:
    """Build an mm-space from a weighted graph with shortest-path distances.

    ``edges`` is an iterable of ``(i, j, length)`` with 0-based node indices.
    Repeated edges keep the shortest length.  Unreachable pairs get ``inf``.
    Degree-proportional mass sums the distances to graph neighbours.
    """
    policy = policy or MassPolicy.uniform()
    if n_nodes < 1:
        raise InputError("n_nodes must be positive")
    best = {}
    for e in edges:
        i, j, length = int(e[0]), int(e[1]), float(e[2])
        if not (0 <= i < n_nodes and 0 <= j < n_nodes):
            raise InputError(f"edge ({i}, {j}) out of range for {n_nodes} nodes")
        if not (length > 0 and np.isfinite(length)):
            raise InputError(f"edge ({i}, {j}) has nonpositive length {length}")
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        best[key] = min(length, best.get(key, np.inf))
    if best:
        ij = np.array(list(best.keys()))
        w = np.array(list(best.values()))
        adj = coo_matrix((w, (ij[:, 0], ij[:, 1])), shape=(n_nodes, n_nodes)).tocsr()
        dist = shortest_path(adj, method="D", directed=False)
    else:
        dist = np.full((n_nodes, n_nodes), np.inf)
    np.fill_diagonal(dist, 0.0)
    deg = None
    if policy.kind == "degree":
        deg = np.zeros(n_nodes)
        for i, j in best:
            deg[i] += dist[i, j]
            deg[j] += dist[i, j]
    return MmSpace(dist, _assign_mass(policy, n_nodes, deg), labels)


def subsample(space: MmSpace, size: int, seed=None, renormalize: bool = False) -> MmSpace:
    """Uniform random node subset without replacement, induced submatrix.

    With ``renormalize`` the restricted masses are rescaled to the original
    total mass.
    """
    if not 1 <= size <= space.K:
        raise InputError(f"size must be in [1, {space.K}], got {size}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(space.K, size=size, replace=False)
    sub = space.permute(idx)
    if renormalize:
        sub = sub.with_mass(sub.mass * space.total_mass / sub.total_mass)
    return sub
