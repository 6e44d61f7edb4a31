"""rho-Laplacian spectra of finite metric measure spaces.

Build an mm-space, sweep its rho-spectrum, and use the spectra as shape
signatures, harmonics, label-propagation graphs or for inference on samples.
"""
__version__ = "0.1.0"

from .mmspace import (  # noqa: E402
    InputError, MassPolicy, MmSpace, from_distance_matrix, from_graph, from_points, subsample,
    validate,
)
from .laplacian import (  # noqa: E402
    AuxiliaryGraph, EdgeEvent, RhoLaplacian, apply_operator, build_auxiliary, dirichlet_form,
    edge_events, laplacian, rho_laplacian,
)
from .spectrum import (  # noqa: E402
    NumericalError, SpectralCdf, SpectralCurve, Spectrum, check_bounds, check_sweep, eig,
    spanning_tree_count, spectral_cdf, spectrum, spectrum_at, sweep, truncate,
)
from .signatures import (  # noqa: E402
    QuantileGrid, SignatureDistanceMatrix, build_grid, classical_mds, dod, dod_distance, local_dod,
    pairwise_distances, spectral_distance,
)
from .harmonics import DisconnectedError, embed, fiedler, min_connected_rho  # noqa: E402
from .ssl import SslProblem, SslSolution, objective, solve  # noqa: E402
from .inference import (  # noqa: E402
    ConcentrationParams, bootstrap_test, concentration_bound, confidence_bands, make_sample,
    mean_spectrum,
)
