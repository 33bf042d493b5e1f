"""Bound states of the Dirac equation with vector and scalar Coulomb
potentials, built from shape-invariant partner Hamiltonians and checked
against a finite-difference oracle."""

from .errors import (
    DegenerateKPlus,
    DegenerateTransform,
    DiracSusyError,
    GridTooSmall,
    NoBoundState,
    NonBindingChannel,
    NonConvergence,
    UnboundState,
)
from .ladder import (
    SpinorRadialPair,
    apply_A_minus,
    apply_A_plus,
    excited_state_F,
    ground_state_F,
    ladder_commutator_residual,
    remainder_R,
    similarity_S,
    to_physical,
    upper_component_hatted,
    v_minus,
    v_plus,
)
from .oracle import RadialGrid, fd_eigenvalue, self_consistent_energy
from .polyexp import PolyExpFunction, normalize
from .spectral import (
    Channel,
    Couplings,
    EnergyLevel,
    KHat,
    a_squared,
    effective_lambda,
    ground_state_energy,
    k_hat,
    level_energy_closed,
    level_energy_implicit,
)

__version__ = "0.1.0"
