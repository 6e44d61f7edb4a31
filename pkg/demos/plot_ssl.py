"""
Semi-supervised labels on two cliques
=====================================

One labelled node per cluster is propagated through the normalised
Laplacian of the auxiliary graph.
"""
import numpy as np

from mmspectra import datasets as ds
from mmspectra.harmonics import min_connected_rho, rho_above
from mmspectra.ssl import SslProblem, solve

space, truth = ds.barbell(size=5, bridge=5.0, seed=0)

###############################################################################
# At rho = 2 the two cliques are separate components; above the bridge
# length they are joined by one edge.
for rho in (2.0, rho_above(space, min_connected_rho(space))):
    for tau in (0.1, 1.0, 10.0):
        sol = solve(SslProblem(space, rho, tau, {0: 1, 9: -1}))
        acc = np.mean(sol.predictions == truth)
        print(f"rho={rho:.2f} tau={tau:5.1f}  accuracy {acc:.2f}  scores {np.round(sol.f, 3)}")
