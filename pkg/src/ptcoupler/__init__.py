"""Lossy two-waveguide coupler near its exceptional point.

Classical power decay and two-photon interference survival for a
directional coupler whose second arm loses light, either through a
phenomenological rate (memoryless) or through an explicitly traced
tight-binding chain reservoir (exact).
"""

__version__ = "0.1.0"

from .classical import (
    EpRegime,
    Regime,
    SupermodePair,
    classical_power_curve,
    classify_ep,
    coupler_matrix,
    propagate_classical,
    supermodes,
)
from .core import (
    ClassicalInput,
    ComplexMatrix2,
    CouplerParams,
    DecayCurve,
    Indistinguishable,
    PolarizationEntangled,
    PropagationGrid,
    ScatteringMatrix,
    TwoPhotonInput,
    validate,
)
from .quantum import (
    Backend,
    Lattice,
    Markovian,
    TwoPhotonOccupations,
    mean_photon_number,
    occupations_indistinguishable,
    survival_curve,
    survival_entangled,
    survival_fermionic,
    survival_indistinguishable,
    two_photon_oracle,
    two_photon_oracle_kron,
)
from .reservoir import (
    FullSystemState,
    GoldenRuleRate,
    LatticePropagator,
    LatticeReservoir,
    full_hamiltonian,
    golden_rule_gamma,
    lattice_gamma,
    min_lattice_size,
    nonmarkovian_scattering,
)
from .scattering import scattering_curve, scattering_matrix

__all__ = [
    "__version__",
    "ClassicalInput",
    "ComplexMatrix2",
    "CouplerParams",
    "DecayCurve",
    "Indistinguishable",
    "PolarizationEntangled",
    "PropagationGrid",
    "ScatteringMatrix",
    "TwoPhotonInput",
    "validate",
    "EpRegime",
    "Regime",
    "SupermodePair",
    "classical_power_curve",
    "classify_ep",
    "coupler_matrix",
    "propagate_classical",
    "supermodes",
    "scattering_curve",
    "scattering_matrix",
    "FullSystemState",
    "GoldenRuleRate",
    "LatticePropagator",
    "LatticeReservoir",
    "full_hamiltonian",
    "golden_rule_gamma",
    "lattice_gamma",
    "min_lattice_size",
    "nonmarkovian_scattering",
    "Backend",
    "Lattice",
    "Markovian",
    "TwoPhotonOccupations",
    "mean_photon_number",
    "occupations_indistinguishable",
    "survival_curve",
    "survival_entangled",
    "survival_fermionic",
    "survival_indistinguishable",
    "two_photon_oracle",
    "two_photon_oracle_kron",
]
