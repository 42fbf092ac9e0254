"""QSP phase synthesis and QSVT algorithm simulation on dense matrices."""

from .errors import (
    ConditionViolated,
    ConvergenceError,
    DegreeCapExceeded,
    DomainError,
    EmptyCurve,
    GiveUp,
    NoConvergence,
    NotHermitian,
    NotProjector,
    NotUnit,
    NotUnitary,
    OrderNotFound,
    OverflowGuard,
    ParityError,
    QsvtSimError,
    ScaleTooSmall,
    UnsupportedConversion,
)
from .qsp_core import (
    CANONICAL,
    Basis,
    Convention,
    LaurentPair,
    PhaseSequence,
    ProcessingKind,
    SignalKind,
    convert_convention,
    evaluate_sequence,
    laurent_from_pq,
    phase_sequence_from_json,
    phase_sequence_to_json,
    pq_from_sequence,
    processing_operator,
    response,
    response_curve,
    response_many,
    signal_operator,
)
from .poly_approx import (
    ChebyshevPoly,
    FitResult,
    Parity,
    TruncationSpec,
    eigenstate_filter_poly,
    eigenvalue_threshold_poly,
    gibbs_poly,
    inverse_poly,
    jacobi_anger_cos,
    jacobi_anger_sin,
    matrix_inversion_poly,
    phase_estimation_poly,
    poly_from_json,
    poly_to_json,
    rect_poly,
    relu_poly,
    sign_poly,
    sign_poly_from_steepness,
    solve_truncation,
)
from .phase_solver import (
    FixedPointParams,
    SolverOptions,
    fixed_point_phases,
    residual,
    solve_phases,
)
from .block_encoding import (
    BlockEncoding,
    embed_general,
    encoding_from_json,
    encoding_to_json,
    extract_block,
    grover_signal,
    matrix_from_json,
    matrix_to_json,
    phase_oracle_block,
    projector_phase,
    qubitize_hermitian,
    shift_positive,
)
from .qsvt_engine import (
    QsvtProgram,
    amplitude_amplification_matrix_element,
    eigen_oracle,
    qsvt_unitary,
    real_part_encoding,
    svd_oracle,
    transformed_block,
)
from .algorithms import (
    PhaseEstimate,
    RunRecord,
    bernoulli_sample_count,
    eigenvalue_threshold,
    hamiltonian_simulation,
    hamsim_query_count,
    matrix_inversion,
    order_finding_demo,
    phase_estimation_record,
    pe_epsilon_for,
    qsvt_phase_estimation,
    qsvt_search,
    threshold_repetitions,
)
from . import families

__version__ = "0.1.0"
