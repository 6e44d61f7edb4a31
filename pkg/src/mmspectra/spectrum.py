"""Spectra of rho-Laplacians and the full sweep over rho.

The spectrum is piecewise constant in ``rho``: it only changes when ``rho``
passes one of the pairwise distances.  :func:`sweep` therefore computes one
exact eigendecomposition per interval between consecutive distinct
distances.  Eigenvalues are always sorted ascending.
"""
from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .laplacian import AuxiliaryGraph, RhoLaplacian, build_auxiliary, edge_events, laplacian
from .mmspace import TIE_TOL, InputError, MmSpace

ZERO_TOL = 1e-10


class NumericalError(RuntimeError):
    """An eigensolve failed or a numerical sanity bound was violated."""


def zero_threshold(values) -> float:
    lam_max = float(np.max(values)) if len(values) else 0.0
    return ZERO_TOL * max(1.0, lam_max)


@dataclass(frozen=True, eq=False)
class Spectrum:
    values: np.ndarray
    vectors: np.ndarray | None = None

    @property
    def K(self):
        return len(self.values)

    def n_zero(self) -> int:
        """Numerical multiplicity of the eigenvalue 0."""
        return int(np.sum(np.abs(self.values) <= zero_threshold(self.values)))

    def descending(self) -> np.ndarray:
        return self.values[::-1].copy()


def _finish(values, vectors=None) -> Spectrum:
    values = np.array(values, dtype=float)
    if values.size and abs(values[0]) <= zero_threshold(values):
        values[0] = 0.0
    return Spectrum(values, vectors)


def _diagnostics(L):
    try:
        s = np.linalg.svd(L, compute_uv=False)
        return f"norm={s[0]:.3g}, smallest singular value={s[-1]:.3g}, finite={np.isfinite(L).all()}"
    except np.linalg.LinAlgError:
        return f"finite={np.isfinite(L).all()}"


def eig(lap: RhoLaplacian | np.ndarray, want_vectors: bool = False) -> Spectrum:
    """Ascending eigenvalues (and optionally eigenvectors) of a Laplacian."""
    L = lap.L if isinstance(lap, RhoLaplacian) else np.asarray(lap, dtype=float)
    try:
        if want_vectors:
            w, v = np.linalg.eigh(L)
            return _finish(w, v)
        return _finish(np.linalg.eigvalsh(L))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge ({_diagnostics(L)})") from exc


def spectrum(space: MmSpace, rho: float, want_vectors: bool = False) -> Spectrum:
    return eig(laplacian(build_auxiliary(space, rho)), want_vectors)


@dataclass(frozen=True, eq=False)
class SpectralCurve:
    """Piecewise-constant map ``rho -> sorted spectrum``.

    ``values[m]`` is the spectrum on ``(breakpoints[m-1], breakpoints[m]]``
    (with ``breakpoints[-1] = 0`` and ``breakpoints[M] = inf``), i.e. once
    all edges with distance ``< rho`` are present.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    vectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def K(self) -> int:
        return self.values.shape[1]

    @property
    def n_intervals(self) -> int:
        return self.values.shape[0]

    @property
    def spectra(self) -> list[Spectrum]:
        vecs = self.vectors if self.vectors is not None else [None] * self.n_intervals
        return [Spectrum(v, u) for v, u in zip(self.values, vecs)]

    def interval_index(self, rho):
        """Interval index for ``rho``; vectorised over arrays."""
        return np.searchsorted(self.breakpoints, rho, side="left")

    def values_at(self, rho) -> np.ndarray:
        """Spectra at one rho (shape (K,)) or an array of rhos (shape (G, K))."""
        return self.values[self.interval_index(rho)]

    def truncated(self, k_prime: int) -> "SpectralCurve":
        _check_kprime(k_prime, self.K)
        vecs = None if self.vectors is None else self.vectors[:, :, :k_prime]
        return SpectralCurve(self.breakpoints, self.values[:, :k_prime], vecs)

    def midpoints(self) -> np.ndarray:
        """One rho inside every interval except the first (all-zero) one."""
        b = self.breakpoints
        if b.size == 0:
            return b.copy()
        top = b[-1] + (b[-1] - b[-2]) / 2 if b.size > 1 else (1.5 * b[-1] if b[-1] > 0 else 1.0)
        return np.append((b[:-1] + b[1:]) / 2, top)


def _distinct_breakpoints(events):
    """Group sorted events by distance ties; returns (breakpoints, group slices)."""
    bps, starts = [], []
    last = None
    for k, e in enumerate(events):
        if last is None or e.d - last > TIE_TOL:
            bps.append(e.d)
            starts.append(k)
        else:
            bps[-1] = e.d
        last = e.d
    starts.append(len(events))
    return np.array(bps, dtype=float), starts


def _n_workers():
    env = os.environ.get("MM_SPECTRA_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep(space: MmSpace, want_vectors: bool = False, workers: int | None = None,
          chunk: int = 64) -> SpectralCurve:
    """Spectra of the rho-Laplacian on every interval between distinct distances.

    Laplacians are accumulated edge by edge in distance order and each
    interval gets an exact dense eigensolve.  Chunks of intervals are solved
    in a thread pool; results are ordered by interval index.
    """
    K = space.K
    events = edge_events(space)
    bps, starts = _distinct_breakpoints(events)
    M = len(bps)

    def snapshots():
        L = np.zeros((K, K))
        batch = []
        for m in range(M):
            for e in events[starts[m]:starts[m + 1]]:
                L[e.i, e.i] += e.w
                L[e.j, e.j] += e.w
                L[e.i, e.j] -= e.w
                L[e.j, e.i] -= e.w
            batch.append(L.copy())
            if len(batch) == chunk:
                yield m + 1 - len(batch), np.stack(batch)
                batch = []
        if batch:
            yield M - len(batch), np.stack(batch)

    def solve(item):
        first, stack = item
        try:
            if want_vectors:
                return first, np.linalg.eigh(stack)
            return first, (np.linalg.eigvalsh(stack), None)
        except np.linalg.LinAlgError:
            for k, L in enumerate(stack):
                try:
                    np.linalg.eigvalsh(L)
                except np.linalg.LinAlgError as exc:
                    raise NumericalError(
                        f"eigensolver failed on interval {first + k + 1} ({_diagnostics(L)})"
                    ) from exc
            raise

    values = np.zeros((M + 1, K))
    vectors = None
    if want_vectors:
        vectors = np.empty((M + 1, K, K))
        vectors[0] = np.eye(K)
    workers = workers or _n_workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            _collect(_bounded_map(pool, solve, snapshots(), 2 * workers), values, vectors)
    else:
        _collect(map(solve, snapshots()), values, vectors)
    for m in range(1, M + 1):
        row = values[m]
        if abs(row[0]) <= zero_threshold(row):
            row[0] = 0.0
    return SpectralCurve(bps, values, vectors)


def _bounded_map(pool, fn, items, depth):
    # keeps at most `depth` chunks in flight so snapshots are not all held in memory
    pending = deque()
    for item in items:
        pending.append(pool.submit(fn, item))
        if len(pending) >= depth:
            yield pending.popleft().result()
    while pending:
        yield pending.popleft().result()


def _collect(results, values, vectors):
    for first, (w, v) in results:
        values[first + 1:first + 1 + len(w)] = w
        if vectors is not None:
            vectors[first + 1:first + 1 + len(w)] = v


def spectrum_at(curve: SpectralCurve, rho: float) -> Spectrum:
    if not rho > 0:
        raise InputError(f"rho must be positive, got {rho}")
    m = int(curve.interval_index(rho))
    vec = None if curve.vectors is None else curve.vectors[m]
    return Spectrum(curve.values[m], vec)


@dataclass(frozen=True, eq=False)
class SpectralCdf:
    """Uniform-weight empirical CDF of eigenvalues (right-continuous)."""

    atoms: np.ndarray
    weights: np.ndarray

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.searchsorted(self.atoms, t, side="right") / len(self.atoms)

    def steps(self):
        """Distinct atoms with the probability mass sitting at each.

        Atoms closer than ``1e-12`` relative to the largest are merged.
        """
        a = self.atoms
        tol = 1e-12 * max(1.0, float(np.abs(a).max()))
        new = np.concatenate([[True], np.diff(a) > tol])
        starts = np.nonzero(new)[0]
        counts = np.diff(np.append(starts, len(a)))
        return a[starts], counts / len(a)


def spectral_cdf(spec: Spectrum) -> SpectralCdf:
    atoms = np.sort(np.asarray(spec.values, dtype=float))
    return SpectralCdf(atoms, np.full(len(atoms), 1.0 / len(atoms)))


@dataclass
class BoundsReport:
    max_degree: float
    lambda_max: float
    lower_margin: float
    upper_margin: float
    local_dod_max: float | None = None
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def check_bounds(graph: AuxiliaryGraph, spec: Spectrum, space: MmSpace | None = None,
                 tol: float = 1e-10) -> BoundsReport:
    """Check ``max deg <= lambda_max <= 2 max deg``.

    When ``space`` is given the degrees are recomputed from the local
    distribution of distances, ``mu_j (h(x_j, rho-) - mu_j)``, and must agree
    with the graph degrees.
    """
    deg = graph.deg
    dmax = float(deg.max()) if deg.size else 0.0
    lam = float(spec.values[-1]) if spec.K else 0.0
    scale = tol * max(1.0, lam)
    rep = BoundsReport(dmax, lam, lam - dmax, 2 * dmax - lam)
    if lam < dmax - scale:
        rep.violations.append(("lambda_max below max degree", int(np.argmax(deg))))
    if lam > 2 * dmax + scale:
        rep.violations.append(("lambda_max above twice max degree", int(np.argmax(deg))))
    if space is not None:
        mu = space.mass
        h = (space.dist < graph.rho) @ mu  # includes the centre
        local = mu * (h - mu)
        rep.local_dod_max = float(local.max())
        for j in np.nonzero(np.abs(local - deg) > scale)[0]:
            rep.violations.append(("local distribution mismatch", int(j)))
    return rep


def spanning_tree_count(spec: Spectrum, K: int | None = None, weight: float = 1.0) -> float:
    """Matrix-tree count ``(1/K) prod_{j>=2} lambda_j`` for a connected graph.

    ``weight`` is the common edge weight of a uniformly weighted graph; the
    eigenvalues are divided by it first.
    """
    vals = np.sort(np.asarray(spec.values, dtype=float)) / weight
    K = K or len(vals)
    if spec.n_zero() > 1:
        raise NumericalError(f"graph is disconnected ({spec.n_zero()} zero eigenvalues)")
    return float(np.prod(vals[1:]) / K)


def _check_kprime(k_prime, K):
    if not 1 <= k_prime <= K:
        raise InputError(f"k_prime must be in [1, {K}], got {k_prime}")


def truncate(spec: Spectrum, k_prime: int) -> Spectrum:
    _check_kprime(k_prime, spec.K)
    vec = None if spec.vectors is None else spec.vectors[:, :k_prime]
    return Spectrum(np.asarray(spec.values)[:k_prime].copy(), vec)


def component_counts(space: MmSpace, breakpoints=None) -> np.ndarray:
    """Connected components of the auxiliary graph on every sweep interval (union-find)."""
    events = edge_events(space)
    if breakpoints is None:
        breakpoints, _ = _distinct_breakpoints(events)
    ds = DisjointSet(range(space.K))
    counts = [space.K]
    n = space.K
    k = 0
    for b in breakpoints:
        while k < len(events) and events[k].d <= b + TIE_TOL:
            e = events[k]
            if ds.merge(e.i, e.j):
                n -= 1
            k += 1
        counts.append(n)
    return np.array(counts)


@dataclass
class SweepReport:
    """Per-interval consistency checks of a sweep; empty ``failures`` means all passed."""

    trace_error: float
    max_jump_excess: float
    max_decrease: float
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def check_sweep(space: MmSpace, curve: SpectralCurve, tol: float = 1e-10) -> SweepReport:
    """Trace identity, monotonicity, jump bounds and zero multiplicity along a sweep."""
    events = edge_events(space)
    bps, starts = _distinct_breakpoints(events)
    K = space.K
    vals = curve.values
    trace_err = jump_excess = decrease = 0.0
    failures = []
    wsum = 0.0
    comps = component_counts(space, bps)
    if comps[0] != K or np.any(vals[0] != 0):
        failures.append(("empty graph spectrum not zero", 0))
    for m in range(len(bps)):
        group = events[starts[m]:starts[m + 1]]
        inc = np.zeros(K)
        for e in group:
            wsum += e.w
            inc[e.i] += e.w
            inc[e.j] += e.w
        scale = tol * max(1.0, vals[m + 1, -1])
        err = abs(vals[m + 1].sum() - 2 * wsum)
        trace_err = max(trace_err, err)
        if err > scale:
            failures.append(("trace identity", m + 1))
        step = vals[m + 1] - vals[m]
        decrease = max(decrease, float(-step.min()))
        if step.min() < -scale:
            failures.append(("eigenvalue decreased", m + 1))
        # operator norm of the added edge block is at most twice its max degree
        excess = float(step.max() - 2 * inc.max())
        jump_excess = max(jump_excess, excess)
        if excess > scale:
            failures.append(("jump exceeds rank-one bound", m + 1))
        if Spectrum(vals[m + 1]).n_zero() != comps[m + 1]:
            failures.append(("zero multiplicity != components", m + 1))
    return SweepReport(trace_err, jump_excess, decrease, failures)
