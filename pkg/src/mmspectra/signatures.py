"""Shape signatures built on rho-spectra, plus distance-distribution baselines.

The spectral distance between two mm-spaces is the largest Euclidean norm,
over a grid of rho values, between their (truncated, ascending) spectra.
The distribution of distances (DoD) and the local distribution of distances
are the classical Gromov-Wasserstein lower-bound signatures; they are kept
here as comparison baselines.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .mmspace import InputError, MmSpace
from .spectrum import SpectralCurve


def _near(a, b):
    return np.isclose(a, b, rtol=1e-12, atol=1e-12)


@dataclass(frozen=True, eq=False)
class QuantileGrid:
    """Grid of rho values.

    ``raw`` holds the empirical quantiles of the pooled distances (from the
    minimum to the maximum); ``values`` is what spectra are evaluated at:
    quantiles that land on an observed distance are moved to the middle of
    the interval above it.
    """

    levels: np.ndarray
    raw: np.ndarray
    values: np.ndarray

    def __len__(self):
        return len(self.values)


def pooled_distances(spaces) -> np.ndarray:
    parts = []
    for s in spaces:
        il = np.tril_indices(s.K, -1)
        d = s.dist[il]
        parts.append(d[np.isfinite(d)])
    return np.concatenate(parts) if parts else np.empty(0)


def shift_off_breakpoints(points, distances) -> np.ndarray:
    """Move points that coincide with a distance to the midpoint of the next gap."""
    distinct = np.unique(distances)
    out = np.array(points, dtype=float)
    if distinct.size == 0:
        return out
    if distinct.size > 1:
        last_gap = distinct[-1] - distinct[-2]
    else:
        last_gap = distinct[-1] if distinct[-1] > 0 else 1.0
    upper = np.append(distinct[1:], distinct[-1] + last_gap)
    for g, p in enumerate(out):
        k = np.searchsorted(distinct, p)
        for c in (k - 1, k):
            if 0 <= c < distinct.size and _near(p, distinct[c]):
                out[g] = 0.5 * (distinct[c] + upper[c])
                break
    return out


def build_grid(spaces, G: int = 200) -> QuantileGrid:
    """Quantile grid of the pooled lower-triangle distances at levels ``l/(G-1)``."""
    if G < 2:
        raise InputError("grid size G must be at least 2")
    pooled = pooled_distances(spaces)
    if pooled.size == 0:
        raise InputError("no finite pairwise distances to build a grid from")
    levels = np.arange(G) / (G - 1)
    raw = np.quantile(pooled, levels)
    return QuantileGrid(levels, raw, shift_off_breakpoints(raw, pooled))


def grid_from_values(values) -> QuantileGrid:
    """Wrap explicit rho values (used as given) in a grid object."""
    v = np.asarray(values, dtype=float)
    return QuantileGrid(np.full(v.size, np.nan), v, v)


def merged_eval_points(curves) -> np.ndarray:
    """One rho inside every interval of the merged breakpoint set of all curves."""
    b = np.unique(np.concatenate([c.breakpoints for c in curves]))
    if b.size == 0:
        return np.array([1.0])
    pts = []
    if b[0] > 0:
        pts.append(b[0] / 2)
    pts.extend((b[:-1] + b[1:]) / 2)
    top_gap = b[-1] - b[-2] if b.size > 1 else max(b[-1], 1.0)
    pts.append(b[-1] + top_gap / 2)
    return np.array(pts)


def _default_kprime(curves, k_prime):
    kmin = min(c.K for c in curves)
    if k_prime is None:
        return kmin
    if not 1 <= k_prime <= kmin:
        raise InputError(f"k_prime={k_prime} exceeds the smallest space size {kmin}")
    return k_prime


def _eval(curve: SpectralCurve, rhos, k_prime):
    return curve.values_at(rhos)[:, :k_prime]


def spectral_distance(a: SpectralCurve, b: SpectralCurve, grid: QuantileGrid | None = None,
                      k_prime: int | None = None, exact: bool = False) -> float:
    """Max over the grid of ``||spec_a(rho)[:k'] - spec_b(rho)[:k']||_2``.

    With ``exact=True`` the maximum is taken over every interval of the
    merged breakpoints instead, which is the true supremum.
    """
    k_prime = _default_kprime([a, b], k_prime)
    if exact:
        rhos = merged_eval_points([a, b])
    elif grid is None:
        raise InputError("a grid is required unless exact=True")
    else:
        rhos = grid.values
    diff = _eval(a, rhos, k_prime) - _eval(b, rhos, k_prime)
    return float(np.sqrt((diff**2).sum(axis=1)).max())


@dataclass(frozen=True, eq=False)
class SignatureDistanceMatrix:
    D: np.ndarray

    @property
    def n(self):
        return self.D.shape[0]


def pairwise_distances(curves, grid: QuantileGrid | None = None, k_prime: int | None = None,
                       exact: bool = False) -> SignatureDistanceMatrix:
    curves = list(curves)
    k_prime = _default_kprime(curves, k_prime)
    n = len(curves)
    D = np.zeros((n, n))
    if exact:
        for i in range(n):
            for j in range(i + 1, n):
                D[i, j] = D[j, i] = spectral_distance(curves[i], curves[j], k_prime=k_prime, exact=True)
        return SignatureDistanceMatrix(D)
    if grid is None:
        raise InputError("a grid is required unless exact=True")
    V = np.stack([_eval(c, grid.values, k_prime) for c in curves])
    for i in range(n - 1):
        diff = V[i + 1:] - V[i]
        D[i, i + 1:] = np.sqrt((diff**2).sum(axis=2)).max(axis=1)
    D = np.triu(D, 1)
    return SignatureDistanceMatrix(D + D.T)


@dataclass(frozen=True, eq=False)
class DoD:
    """Distribution of distances ``t -> (mu x mu){d <= t}`` over all ordered pairs."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "_cum", np.cumsum(self.weights))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        k = np.searchsorted(self.atoms, t, side="right")
        cum = np.concatenate([[0.0], self._cum])
        return cum[k]

    @property
    def total(self):
        return float(self._cum[-1])


def dod(space: MmSpace) -> DoD:
    d = space.dist.ravel()
    w = np.outer(space.mass, space.mass).ravel()
    order = np.argsort(d, kind="stable")
    return DoD(d[order], w[order])


def dod_distance(a: DoD, b: DoD) -> float:
    """Sup-norm distance between two DoD curves."""
    ts = np.union1d(a.atoms[np.isfinite(a.atoms)], b.atoms[np.isfinite(b.atoms)])
    if ts.size == 0:
        return 0.0
    return float(np.abs(a(ts) - b(ts)).max())


@dataclass(frozen=True, eq=False)
class LocalDoD:
    """Per-node closed-ball masses ``h(x_j, t) = mu{x : d(x_j, x) <= t}``."""

    dist: np.ndarray
    mass: np.ndarray

    def __call__(self, t) -> np.ndarray:
        """Vector of ``h(x_j, t)`` for all nodes ``j``."""
        return (self.dist <= t) @ self.mass

    def at(self, j: int, t: float) -> float:
        return float(self.mass[self.dist[j] <= t].sum())

    def left_limit(self, t) -> np.ndarray:
        """``h(x_j, t-)``: open-ball masses."""
        return (self.dist < t) @ self.mass


def local_dod(space: MmSpace) -> LocalDoD:
    return LocalDoD(space.dist, space.mass)


def local_dod_distance(a: MmSpace, b: MmSpace, ts=None) -> float:
    """Sup over t of the distance between sorted local-distribution profiles.

    Only meaningful for spaces of equal size; nodes are matched by sorting
    the profile values at each t, a permutation-invariant baseline.
    """
    if a.K != b.K:
        raise InputError("local distribution comparison needs spaces of equal size")
    if ts is None:
        ts = np.union1d(a.dist[np.isfinite(a.dist)], b.dist[np.isfinite(b.dist)])
    la, lb = local_dod(a), local_dod(b)
    return float(max(np.abs(np.sort(la(t)) - np.sort(lb(t))).max() for t in ts))


@dataclass(frozen=True, eq=False)
class MdsResult:
    coords: np.ndarray
    eigenvalues: np.ndarray
    negative_eigenvalues: np.ndarray
    n_positive: int


def classical_mds(D, dims: int = 2) -> MdsResult:
    """Classical (Torgerson) multidimensional scaling.

    Double-centres ``-D**2 / 2`` and scales the top eigenvectors by the
    square roots of their eigenvalues.  Axes with nonpositive eigenvalues
    are zero.  Each axis is oriented so that its largest-magnitude entry is
    positive.
    """
    if isinstance(D, SignatureDistanceMatrix):
        D = D.D
    D = np.asarray(D, dtype=float)
    if dims < 1:
        raise InputError("dims must be at least 1")
    n = D.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * J @ (D**2) @ J
    B = (B + B.T) / 2
    evals, evecs = np.linalg.eigh(B)
    idx = np.argsort(evals)[::-1]
    evals, evecs = evals[idx], evecs[:, idx]
    tol = 1e-12 * max(1.0, np.abs(evals).max() if n else 0.0)
    positive = evals > tol
    n_pos = int(positive.sum())
    if dims > n_pos:
        warnings.warn(f"only {n_pos} positive eigenvalues; padding {dims - n_pos} axes with zeros",
                      stacklevel=2)
    coords = np.zeros((n, dims))
    k = min(dims, n_pos)
    coords[:, :k] = evecs[:, :k] * np.sqrt(evals[:k])
    for a in range(k):
        col = coords[:, a]
        if col[np.argmax(np.abs(col))] < 0:
            coords[:, a] = -col
    coords -= coords.mean(axis=0)
    return MdsResult(coords, evals, evals[evals < -tol], n_pos)
