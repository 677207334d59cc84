"""Heat currents and thermal rectification in XX spin chains with global dissipators."""

from .bath import INFINITE, ZERO, BathPair, chi, fermi, gamma_rate
from .chain import (
    ChainSpec,
    build_boundary_perturbed,
    build_coupling_junction,
    build_custom,
    build_field_junction,
    build_graded,
    reflect,
    to_w_matrix,
)
from .spectral import SpectralData, analytic_spectrum, diagonalize, split_spectrum_condition
from .transport import (
    RectificationResult,
    SpectrumCase,
    TransportResult,
    asymptotic_currents,
    energy_current,
    limit_current_sums,
    linear_response,
    particle_current,
    rectify,
    steady_occupations,
    transport,
)

__version__ = "0.1.0"
