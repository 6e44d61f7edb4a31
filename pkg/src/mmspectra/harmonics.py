"""Eigenvector analytics of the rho-Laplacian.

The Fiedler vector (eigenvector of the second-smallest eigenvalue) gives the
principal direction of an mm-space and the usual spectral bisection.  Since
eigenvectors are only defined up to sign, the region where the vector
changes sign is reported rather than raw values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .laplacian import build_auxiliary, edge_events, laplacian
from .mmspace import InputError, MmSpace
from .spectrum import NumericalError, eig, zero_threshold


class DisconnectedError(NumericalError):
    def __init__(self, n_components, rho):
        self.n_components = n_components
        self.rho = rho
        super().__init__(
            f"auxiliary graph at rho={rho:g} has {n_components} connected components; increase rho"
        )


@dataclass(frozen=True, eq=False)
class HarmonicReport:
    rho: float
    fiedler_value: float
    fiedler_vector: np.ndarray
    positive: np.ndarray
    negative: np.ndarray
    sign_region: np.ndarray
    multiplicity: int = 1

    @property
    def canonical(self) -> bool:
        """False when the Fiedler eigenspace is degenerate and the split arbitrary."""
        return self.multiplicity == 1

    def to_dict(self):
        return {
            "rho": self.rho,
            "fiedler_value": self.fiedler_value,
            "vector": self.fiedler_vector.tolist(),
            "split": [self.positive.tolist(), self.negative.tolist()],
            "sign_region": self.sign_region.tolist(),
            "multiplicity": self.multiplicity,
        }


def fix_sign(v, tol=1e-12):
    """Flip ``v`` so that its first non-negligible entry is positive."""
    v = np.asarray(v, dtype=float)
    nz = np.nonzero(np.abs(v) > tol * max(1.0, np.abs(v).max()))[0]
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _connected_spectrum(space, rho):
    spec = eig(laplacian(build_auxiliary(space, rho)), want_vectors=True)
    nz = spec.n_zero()
    if nz > 1:
        raise DisconnectedError(nz, rho)
    return spec


def fiedler(space: MmSpace, rho: float, q: float = 0.05) -> HarmonicReport:
    """Fiedler value and vector at ``rho`` with sign split and sign-change region.

    The sign-change region holds the ``ceil(q K)`` nodes with the smallest
    absolute Fiedler entries (ties at the cut are all included).  Zero
    entries go to the positive side of the split.
    """
    if not 0 < q < 1:
        raise InputError(f"q must be in (0, 1), got {q}")
    if space.K < 2:
        raise InputError("the Fiedler vector needs at least two nodes")
    spec = _connected_spectrum(space, rho)
    lam = spec.values
    v = fix_sign(spec.vectors[:, 1])
    v = v / np.linalg.norm(v)
    tol = 1e-8 * max(lam[-1], zero_threshold(lam))
    mult = int(np.sum(np.abs(lam[1:] - lam[1]) <= tol))
    a = np.abs(v)
    n_region = math.ceil(q * space.K)
    cut = np.sort(a)[n_region - 1]
    region = np.nonzero(a <= cut + 1e-12 * max(1.0, a.max()))[0]
    return HarmonicReport(
        float(rho), float(lam[1]), v,
        np.nonzero(v >= 0)[0], np.nonzero(v < 0)[0], region, mult,
    )


def min_connected_rho(space: MmSpace) -> float:
    """Largest distance needed to connect the space: the longest MST edge.

    The auxiliary graph is connected for every ``rho`` strictly above the
    returned value.
    """
    if space.K == 1:
        return 0.0
    ds = DisjointSet(range(space.K))
    n = space.K
    for e in edge_events(space):
        if ds.merge(e.i, e.j):
            n -= 1
            if n == 1:
                return e.d
    raise DisconnectedError(n, np.inf)


def rho_above(space: MmSpace, d: float) -> float:
    """Midpoint between ``d`` and the next larger distance (or a bit above the max)."""
    ds = np.unique(space.dist[np.isfinite(space.dist)])
    above = ds[ds > d + 1e-12]
    if above.size:
        return float((d + above[0]) / 2)
    return float(d * 1.5) if d > 0 else 1.0


@dataclass(frozen=True, eq=False)
class Embedding:
    """Rows are the non-trivial eigenvectors scaled by ``lambda^(-1/2)``; columns are nodes."""

    coords: np.ndarray
    eigenvalues: np.ndarray
    rho: float


def embed(space: MmSpace, rho: float) -> Embedding:
    if space.K < 2:
        raise InputError("embedding needs at least two nodes")
    spec = _connected_spectrum(space, rho)
    lam = spec.values[1:]
    if np.any(lam <= zero_threshold(spec.values)):
        raise NumericalError("zero eigenvalue among the retained eigenpairs")
    U = np.column_stack([fix_sign(u) for u in spec.vectors[:, 1:].T])
    return Embedding(U.T / np.sqrt(lam)[:, None], lam, float(rho))
