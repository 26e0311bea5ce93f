"""Bell-diagonal and Werner two-qubit states: preparation circuits, exact
branching density-matrix simulation, shot-based tomography, and the full
hierarchy of quantum-correlation measures."""

from .circuits import (
    CanonicalParams,
    Circuit,
    CompactParams,
    bell_basis_change,
    build_four_qubit,
    build_four_qubit_ancilla,
    build_g_canonical,
    build_g_compact,
    build_preparation,
    build_two_qubit,
    build_werner_circuit,
    solve_canonical_params,
    solve_compact_params,
)
from .linalg import (
    binary_entropy,
    hermitian_eig,
    kron,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    trace_distance,
    von_neumann_entropy_bits,
)
from .measures import (
    MeasureReport,
    chsh_bruteforce,
    chsh_quantities,
    classical_correlation_bds,
    classical_correlation_bruteforce,
    concurrence,
    dephase,
    discord,
    discord_werner,
    entanglement_of_formation,
    fidelity,
    fidelity_worst_werner,
    mutual_information,
    mutual_information_bds,
    rel_entropy_discord_asym,
    report,
    steering3,
)
from .simulator import BranchState, NoiseModel, evolve, reduced_density, sample_counts
from .states import (
    bds_density,
    bell_state,
    is_separable_bds,
    probs_to_t,
    t_to_probs,
    tetrahedron_grid,
    werner_density,
    werner_line,
)
from .sweep import SweepConfig, compare_templates, emit, run_sweep
from .tomography import CountsTable, aggregate_counts, linear_inversion, project_to_physical, reconstruct

__version__ = "0.1.0"
