"""Quasiprobability wire cutting.

Decompose n-qubit identity channels ("wires") into signed mixtures of
measure-and-prepare channels, synthesize the Clifford circuits behind the
MUB-based decomposition, estimate cut circuits by Monte-Carlo sampling, and
compare methods through their sampling-overhead / channel-count / run-time
cost models.
"""

from .channels import (
    ChannelTerm,
    Decomposition,
    MPChannel,
    TransferMatrix,
    build_decomposition,
    build_mub_default,
    build_mub_nq,
    build_optimal_1q,
    build_peng_1q,
    build_randomized_nq,
    build_teleport_nq,
    identity_ptm,
    ptm,
    rank_bound_check,
    single_qubit_clifford_group,
    tensor_decompositions,
    verify_decomposition,
)
from .costs import (
    GateCountRow,
    MethodRow,
    TimeModelParams,
    gate_count_bench,
    multi_cut_overhead,
    overhead_table,
    predict_time,
)
from .errors import (
    DesignViolationError,
    InvalidInputError,
    NumericFailureError,
    ResourceLimitError,
    SynthesisError,
    WirecutError,
)
from .estimator import (
    CircuitLayer,
    CutLocation,
    CutSpec,
    EstimateReport,
    LayeredCircuit,
    PostProcess,
    demo_circuit,
    demo_cut,
    enumerate_estimator_mean,
    exact_expectation,
    run_monte_carlo,
    sample_prep,
    variance_probe,
)
from .families import (
    CommutingFamily,
    FamilyPartition,
    expand_family,
    extract_generators,
    generate_partition,
    mub_overlap_check,
    validate_partition,
)
from .pauli import (
    BinaryMatrix,
    PauliString,
    PhasedPauli,
    commutes,
    multiply,
    pauli_from_bits,
    pauli_to_bits,
    pauli_vector,
    to_dense,
)
from .synth import (
    CliffordCircuit,
    Gate,
    GateStats,
    StabilizerMatrix,
    circuit_unitary,
    edge_color_cz,
    gate_stats,
    symplectic_conjugate,
    synthesize,
    verify_diagonalizes,
    verify_diagonalizes_symplectic,
)

__version__ = "0.1.0"
