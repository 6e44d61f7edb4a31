"""Mass-aware semi-supervised label propagation on the rho auxiliary graph.

Scores minimise ``||Y - f||^2 + tau f^T L_sym f`` where
``L_sym = I - D^{-1/2} W D^{-1/2}`` is the normalised Laplacian of the
auxiliary graph (weights ``mu_i mu_j`` for ``d < rho``) and ``Y`` is +1/-1 on
labelled nodes and 0 elsewhere.  The minimiser solves ``(I + tau L_sym) f = Y``.
Nodes without neighbours at ``rho`` only see the fidelity term, so their
score equals their label (0 when unlabelled).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve as dense_solve

from .laplacian import build_auxiliary
from .mmspace import InputError, MmSpace


@dataclass(frozen=True, eq=False)
class SslProblem:
    space: MmSpace
    rho: float
    tau: float
    labeled: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.labeled:
            raise InputError("at least one labelled node is required")
        if not self.tau > 0:
            raise InputError("tau must be positive")
        for j, y in self.labeled.items():
            if not 0 <= int(j) < self.space.K:
                raise InputError(f"labelled node {j} out of range")
            if y not in (1, -1):
                raise InputError(f"labels must be +1 or -1, got {y!r}")

    def targets(self) -> np.ndarray:
        Y = np.zeros(self.space.K)
        for j, y in self.labeled.items():
            Y[int(j)] = y
        return Y


@dataclass(frozen=True, eq=False)
class SslSolution:
    f: np.ndarray
    predictions: np.ndarray
    residual: float
    isolated: np.ndarray


def normalized_laplacian(W):
    """``L_sym`` on all nodes plus the mask of non-isolated nodes.

    Rows and columns of isolated nodes are left at zero.
    """
    D = W.sum(axis=1)
    active = D > 0
    s = np.zeros_like(D)
    s[active] = 1.0 / np.sqrt(D[active])
    Lsym = np.diag(active.astype(float)) - s[:, None] * W * s[None, :]
    return Lsym, active


def objective(problem: SslProblem, f) -> float:
    """``sum_j (Y_j - f_j)^2 + tau * sum_{j<l} W_jl (f_j/sqrt(D_j) - f_l/sqrt(D_l))^2``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (problem.space.K,):
        raise InputError(f"f must have length {problem.space.K}")
    W = build_auxiliary(problem.space, problem.rho).W
    D = W.sum(axis=1)
    g = np.zeros_like(f)
    act = D > 0
    g[act] = f[act] / np.sqrt(D[act])
    pen = 0.5 * np.sum(W * (g[:, None] - g[None, :]) ** 2)
    return float(np.sum((problem.targets() - f) ** 2) + problem.tau * pen)


def gradient(problem: SslProblem, f) -> np.ndarray:
    W = build_auxiliary(problem.space, problem.rho).W
    Lsym, _ = normalized_laplacian(W)
    f = np.asarray(f, dtype=float)
    return 2 * (f - problem.targets()) + 2 * problem.tau * Lsym @ f


def solve(problem: SslProblem) -> SslSolution:
    W = build_auxiliary(problem.space, problem.rho).W
    Lsym, active = normalized_laplacian(W)
    Y = problem.targets()
    f = Y.copy()
    idx = np.nonzero(active)[0]
    if idx.size:
        A = np.eye(idx.size) + problem.tau * Lsym[np.ix_(idx, idx)]
        f[idx] = dense_solve(A, Y[idx], assume_a="pos")
    pred = np.where(f >= 0, 1, -1)
    return SslSolution(f, pred, objective(problem, f), np.nonzero(~active)[0])
