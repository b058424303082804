"""Darboux-Crum deformations of the reflectionless sech^2 well and the exact
KdV multi-solitons built from their scattering data."""

from .darboux import (
    BoundState,
    NodalWronskianError,
    PotentialEvaluator,
    SystemSpec,
    base_bound_state,
    base_potential,
    bound_states,
    deformed_potential,
    seed_exponents,
    seed_function,
)
from .kdv import (
    AsymptoticSoliton,
    OverflowDomainError,
    SolitonData,
    SolitonField,
    asymptotic_decomposition,
    conserved_quantities,
    field_u,
    glm_matrix,
    kdv_residual,
    scattering_data_from_spec,
)
from .scattering import (
    ScatteringAmplitudes,
    base_amplitudes,
    deformation_factor,
    deformed_amplitudes,
    numerical_amplitudes,
    transmission_poles,
)
from .spectral_oracle import GridSpec, OracleWindowError, eigen_spectrum, oracle_norming_constants
from .specfun import (
    DegenerateConnectionError,
    GammaPoleError,
    Hyp2f1ConvergenceError,
    JacobiParams,
    hyp2f1,
    hyp2f1_connection,
    hyp2f1_dz,
    jacobi_coefficients,
    jacobi_eval,
    log_gamma,
    reciprocal_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticSoliton",
    "BoundState",
    "DegenerateConnectionError",
    "GammaPoleError",
    "GridSpec",
    "Hyp2f1ConvergenceError",
    "JacobiParams",
    "NodalWronskianError",
    "OracleWindowError",
    "OverflowDomainError",
    "PotentialEvaluator",
    "ScatteringAmplitudes",
    "SolitonData",
    "SolitonField",
    "SystemSpec",
    "asymptotic_decomposition",
    "base_amplitudes",
    "base_bound_state",
    "base_potential",
    "bound_states",
    "conserved_quantities",
    "deformation_factor",
    "deformed_amplitudes",
    "deformed_potential",
    "eigen_spectrum",
    "field_u",
    "glm_matrix",
    "hyp2f1",
    "hyp2f1_connection",
    "hyp2f1_dz",
    "jacobi_coefficients",
    "jacobi_eval",
    "kdv_residual",
    "log_gamma",
    "numerical_amplitudes",
    "oracle_norming_constants",
    "reciprocal_gamma",
    "scattering_data_from_spec",
    "seed_exponents",
    "seed_function",
    "transmission_poles",
]
