"""
Comparing two samples of mm-spaces
==================================

Mean spectra, pointwise Fiedler bands and the bootstrap two-sample test.
"""
import numpy as np

from _common import OUT
from mmspectra import build_grid, sweep
from mmspectra import datasets as ds
from mmspectra.inference import (
    ConcentrationParams, bootstrap_test, concentration_bound, confidence_bands, make_sample,
    mean_spectrum,
)
from mmspectra.plotting import plot_bands

###############################################################################
# Point clouds on a unit square connect at smaller rho than clouds on a
# square of side 3, so their Fiedler bands separate at small rho.
dense, sparse = ds.two_group_sample(n=10, K=20, seed=0)
grid = build_grid(dense + sparse, 100)
samples = [make_sample([sweep(s) for s in g], grid) for g in (dense, sparse)]
bands = [confidence_bands(mean_spectrum(s), 0.95, "fiedler") for s in samples]
plot_bands(bands, OUT / "fiedler_bands.svg", ["side 1", "side 3"])
gap = bands[0].lower > bands[1].upper
print("grid points with disjoint bands:", gap.sum(), "of", len(grid))

res = bootstrap_test(*samples, B=500, seed=0)
print("dense vs sparse:", res.to_dict())

###############################################################################
# Two samples from one distribution of two-point spaces.
rng = np.random.default_rng(3)
a, b = ds.random_two_point_sample(20, rng), ds.random_two_point_sample(20, rng)
grid = build_grid(a + b)
s1, s2 = (make_sample([sweep(x) for x in g], grid, 2) for g in (a, b))
print("null p-value:", bootstrap_test(s1, s2, B=500, seed=0).p_value)

###############################################################################
# The non-asymptotic tail bound only becomes informative for large t.
for t in (10, 100, 200, 400):
    print(t, concentration_bound(ConcentrationParams(1.0, 5, 100, 100, 1.0, t)))
