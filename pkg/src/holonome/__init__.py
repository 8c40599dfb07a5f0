"""Holonomic-gate synthesis and verification toolkit.

State frames parametrized by path angles, reverse-engineered Hamiltonians
that transport them exactly, closed- and open-system propagation, and a
deterministic report pipeline for pulse schedules and decoherence sweeps.
"""

from .laws import (
    AffineLaw,
    LawsBuilder,
    LawsPoint,
    PathLaws,
    SegmentLaws,
    constant_laws,
    random_laws,
)
from .frames import (
    CHI_GUARD,
    FrameFn,
    SingularConfiguration,
    StateFrame,
    check_cyclic,
    connections,
    gram_defect,
    lambda_frame,
    lambda_frame_at,
    two_laser_frame,
    two_laser_frame_at,
    two_qubit_frame,
    two_qubit_frame_at,
)
from .numerics import (
    NumericalContractError,
    commutator,
    dagger,
    fidelity_up_to_global_phase,
    hermiticity_defect,
    max_abs,
    unitarity_defect,
    unitary_step,
)
from .reverse import (
    geometric_phase,
    parallel_transport_residual,
    path_phases,
    reverse_hamiltonian,
    reverse_hamiltonian_two_ancilla,
    reverse_hamiltonian_unconv,
    von_neumann_residual,
)
from .analytic import (
    LaserParams,
    dark_ancilla_samples,
    gamma_rate_excited_ancilla,
    gamma_rate_two_laser,
    gamma_rates_two_qubit,
    hamiltonian_dark_ancilla,
    hamiltonian_excited_ancilla,
    hamiltonian_two_laser,
    hamiltonian_two_qubit,
    two_laser_params,
)
from .paths import (
    GateTarget,
    S_GATE,
    Schedule,
    Segment,
    T_GATE,
    bloch_axis,
    named_target,
    op_geometric_phase,
    op_schedule,
    ossp_schedule,
    pulse_area,
    target_su2,
)
from .evolve import (
    DECAY_OP,
    DEPHASE_OP,
    GateReport,
    LindbladParams,
    SweepCase,
    SweepResult,
    average_fidelity,
    gate_leakage,
    haar_average_fidelity,
    kappa_sweep,
    propagate_lindblad,
    propagate_unitary,
    realized_gate,
)

__all__ = [
    "AffineLaw",
    "CHI_GUARD",
    "DECAY_OP",
    "DEPHASE_OP",
    "FrameFn",
    "GateReport",
    "GateTarget",
    "LaserParams",
    "LawsBuilder",
    "LawsPoint",
    "LindbladParams",
    "NumericalContractError",
    "PathLaws",
    "S_GATE",
    "Schedule",
    "SegmentLaws",
    "Segment",
    "SingularConfiguration",
    "StateFrame",
    "SweepCase",
    "SweepResult",
    "T_GATE",
    "average_fidelity",
    "bloch_axis",
    "check_cyclic",
    "commutator",
    "connections",
    "constant_laws",
    "dagger",
    "dark_ancilla_samples",
    "fidelity_up_to_global_phase",
    "gamma_rate_excited_ancilla",
    "gamma_rate_two_laser",
    "gamma_rates_two_qubit",
    "gate_leakage",
    "geometric_phase",
    "gram_defect",
    "haar_average_fidelity",
    "hamiltonian_dark_ancilla",
    "hamiltonian_excited_ancilla",
    "hamiltonian_two_laser",
    "hamiltonian_two_qubit",
    "hermiticity_defect",
    "kappa_sweep",
    "lambda_frame",
    "lambda_frame_at",
    "max_abs",
    "named_target",
    "op_geometric_phase",
    "op_schedule",
    "ossp_schedule",
    "parallel_transport_residual",
    "path_phases",
    "propagate_lindblad",
    "propagate_unitary",
    "pulse_area",
    "random_laws",
    "realized_gate",
    "reverse_hamiltonian",
    "reverse_hamiltonian_two_ancilla",
    "reverse_hamiltonian_unconv",
    "target_su2",
    "two_laser_frame",
    "two_laser_frame_at",
    "two_laser_params",
    "two_qubit_frame",
    "two_qubit_frame_at",
    "unitarity_defect",
    "unitary_step",
    "von_neumann_residual",
]

__version__ = "0.1.0"
