"""
Spectral distances and an MDS map
=================================

Thirty random point clouds from three shape families are compared with the
spectral distance and laid out in the plane by classical MDS.
"""
import numpy as np

from _common import OUT
from mmspectra import build_grid, classical_mds, pairwise_distances, sweep
from mmspectra import datasets as ds
from mmspectra.plotting import plot_mds

spaces, labels = ds.three_family_corpus(per_family=10, K=30, seed=0)
curves = [sweep(s) for s in spaces]

###############################################################################
# All distances are evaluated on a common grid of quantiles of the pooled
# pairwise distances.
grid = build_grid(spaces, 200)
D = pairwise_distances(curves, grid)
print("distance range:", D.D[np.triu_indices(len(spaces), 1)].min(), D.D.max())

###############################################################################
# Classical MDS.  Negative eigenvalues measure how far the distance matrix is
# from Euclidean.
mds = classical_mds(D, 2)
print("top eigenvalues:", mds.eigenvalues[:4])
print("negative eigenvalues:", mds.negative_eigenvalues.size)
plot_mds(mds.coords, OUT / "mds_families.svg", labels, ds.FAMILIES)

for f, name in enumerate(ds.FAMILIES):
    print(f"{name:9s} centroid", mds.coords[labels == f].mean(axis=0))
