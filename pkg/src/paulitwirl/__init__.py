"""Small Pauli twirling sets for arbitrary noise operators."""

from .builder import (
    AbstractGroupElement,
    CommutatorTable,
    ConstructionError,
    TwirlPlan,
    VtoHMapping,
    build_mapping,
    build_twirl_plan,
    choose_N,
    find_vs,
    full_pauli_baseline,
    generator_table,
    quotient_table,
    solve_generator,
    substitute_stabilisers,
    target_table,
    verify_condition,
)
from .channels import DenseOperator, NoiseChannel, PauliSum, decompose, pauli_basis, reconstruct
from .noisefile import parse_noise_spec, render_noise_spec
from .pauli import PauliString, generating_set, parse_pauli, span, star, to_matrix, zeta

__version__ = "0.1.0"
