"""Quantum counting toolkit: amplitude-amplification counting with a
phase-estimation baseline, on an exact dense statevector simulator."""

from .analytic import circuit_state_closed_form, p0_exact, p1_exact, pea_distribution
from .grover import (
    GroverAngle,
    GroverProblem,
    apply_grover,
    build_eigenstate,
    controlled_grover_power,
    grover_angle,
    marked_count,
)
from .oracles import (
    BitPatternOracle,
    ExplicitSetOracle,
    Oracle,
    marked_indices,
    parse_oracle,
    pattern_marked_count,
)
from .pea import (
    PEAConfig,
    PEAResult,
    inverse_qft,
    pea_cost,
    pea_minimum_t,
    pea_state,
    required_t,
    run_pea,
)
from .simple_count import (
    CountEstimate,
    CountingConfig,
    StepOutcome,
    default_max_k,
    ensure_minority,
    halt_bound,
    optimal_grover_iterations,
    postprocess_arccos,
    postprocess_halfangle,
    run_simple_count,
    step_probability_one,
    step_state,
)
from .statevector import (
    ResourceLimitError,
    Statevector,
    apply_diffusion,
    apply_hadamard,
    apply_phase_flip,
    controlled_apply,
    derive_seed,
    init_basis,
    max_qubits,
    probability_of_one,
    register_probabilities,
    sample_bit,
)

__version__ = "0.1.0"

__all__ = [
    "BitPatternOracle",
    "CountEstimate",
    "CountingConfig",
    "ExplicitSetOracle",
    "GroverAngle",
    "GroverProblem",
    "Oracle",
    "PEAConfig",
    "PEAResult",
    "ResourceLimitError",
    "Statevector",
    "StepOutcome",
    "apply_diffusion",
    "apply_grover",
    "apply_hadamard",
    "apply_phase_flip",
    "build_eigenstate",
    "circuit_state_closed_form",
    "controlled_apply",
    "controlled_grover_power",
    "default_max_k",
    "derive_seed",
    "ensure_minority",
    "grover_angle",
    "halt_bound",
    "init_basis",
    "inverse_qft",
    "marked_count",
    "marked_indices",
    "max_qubits",
    "optimal_grover_iterations",
    "p0_exact",
    "p1_exact",
    "parse_oracle",
    "pattern_marked_count",
    "pea_cost",
    "pea_distribution",
    "pea_minimum_t",
    "pea_state",
    "postprocess_arccos",
    "postprocess_halfangle",
    "probability_of_one",
    "register_probabilities",
    "required_t",
    "run_pea",
    "run_simple_count",
    "sample_bit",
    "step_probability_one",
    "step_state",
]
