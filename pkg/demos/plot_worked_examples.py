"""
Spectra of small mm-spaces
==========================

Two points, the simplex, and two pairs of spaces that share a distribution
of distances but not their rho-spectra.
"""
import numpy as np

from _common import OUT
from mmspectra import datasets as ds
from mmspectra import dod, dod_distance, spectrum, sweep
from mmspectra.plotting import plot_curve

np.set_printoptions(precision=4, suppress=True)

###############################################################################
# Two points at distance 1.  Below rho = 1 the auxiliary graph has no edges;
# above it the single edge has weight ``a (1 - a)`` and the spectrum is
# ``{0, 2 a (1 - a)}``.
for a in (3 / 4, 1 / 2):
    print(f"two points, mass {a}:", spectrum(ds.two_point(a), 0.5).values, spectrum(ds.two_point(a), 1.5).values)

###############################################################################
# The simplex on n points: one zero and n - 1 copies of 1/n once all edges exist.
for n in (2, 5, 10):
    print(f"simplex n={n}:", spectrum(ds.simplex(n), 1.5).values)

###############################################################################
# Four points, uniform mass.  The two spaces have the same distribution of
# distances, yet their graphs differ as soon as the first edges appear.
tri, path = ds.same_dod_pair_4()
print("DoD distance:", dod_distance(dod(tri), dod(path)))
for rho in (1.5, 2.5):
    print(f"rho={rho}: first {spectrum(tri, rho).values}  second {spectrum(path, rho).values}")
plot_curve(sweep(tri), OUT / "four_point_first.svg", max_rho=4.5)
plot_curve(sweep(path), OUT / "four_point_second.svg", max_rho=4.5)

###############################################################################
# Six points on a line.  Again equal distance distributions; at rho = 4.5
# the spectra separate.
x, y = ds.same_dod_pair_line()
print("DoD distance:", dod_distance(dod(x), dod(y)))
print("rho=4.5 X:", spectrum(x, 4.5).values)
print("rho=4.5 Y:", spectrum(y, 4.5).values)
