"""
Fiedler vectors and spectral bisection
======================================

The Fiedler vector at the smallest rho for which the auxiliary graph is
connected splits a two-cluster point cloud.
"""
import numpy as np

from _common import OUT
from mmspectra import from_points
from mmspectra.harmonics import embed, fiedler, min_connected_rho, rho_above
from mmspectra.plotting import plot_harmonic

rng = np.random.default_rng(1)
X = np.vstack([rng.normal([0, 0], 0.4, (25, 2)), rng.normal([3, 0], 0.4, (25, 2))])
space = from_points(X)

###############################################################################
# Below the longest minimum-spanning-tree edge the graph is disconnected and
# the Fiedler value is zero.
r0 = min_connected_rho(space)
rho = rho_above(space, r0)
print(f"connected for rho > {r0:.3f}; using rho = {rho:.3f}")

rep = fiedler(space, rho, q=0.1)
print("Fiedler value:", rep.fiedler_value)
print("split sizes:", len(rep.positive), len(rep.negative))
print("sign-change region:", rep.sign_region)
plot_harmonic(X, rep, OUT / "fiedler_split.svg")

###############################################################################
# The spectral embedding scales each eigenvector by lambda^(-1/2), so that
# its Gram matrix is the pseudoinverse of the Laplacian.
e = embed(space, rho)
print("embedding shape:", e.coords.shape)
