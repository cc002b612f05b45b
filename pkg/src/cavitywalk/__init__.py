"""Two-photon localisation and delocalisation in a chain of linearly coupled cavities."""

from .correlations import (
    CoincidenceValue,
    CorrelationReport,
    delocalization,
    delocalization_timeseries,
    negativity,
    p_closed_form,
    pair_probabilities,
    propagate_state,
    report_from_state,
)
from .fock import (
    PsiFamily,
    TwoPhotonBasis,
    TwoPhotonState,
    chi_state,
    evolve_oracle,
    fock_state,
    psi_state,
    sector_hamiltonian,
    two_photon_basis,
)
from .kernels import BACKEND
from .lattice import ArrayModel, NormalModes, Propagator, normal_modes, propagator
from .sweep import SweepResult, TimeGrid, max_delocalization, n_sweep, theta_phi_sweep

__version__ = "0.1.0"

__all__ = [
    "ArrayModel", "NormalModes", "Propagator", "normal_modes", "propagator",
    "TwoPhotonBasis", "TwoPhotonState", "PsiFamily", "two_photon_basis", "fock_state",
    "psi_state", "chi_state", "sector_hamiltonian", "evolve_oracle",
    "CorrelationReport", "CoincidenceValue", "report_from_state", "p_closed_form",
    "pair_probabilities", "propagate_state", "delocalization", "delocalization_timeseries",
    "negativity", "TimeGrid", "SweepResult", "max_delocalization", "theta_phi_sweep",
    "n_sweep", "BACKEND",
]
