"""Collectibility entanglement indicators for pure multi-party states.

The package computes the two-detector collectibility of a pure state:
exact closed forms for two qubits, the Gram-matrix formula with party A
maximized analytically, numerically optimized extremes over detector
sets, Monte Carlo statistics over Haar-random detectors, and shot-noise
simulations of two interferometric measurement schemes.
"""

__version__ = "0.1.0"

from .errors import (
    BoundError,
    CollectibilityError,
    ConvergenceError,
    DegenerateError,
    EmptyCountsError,
    GramError,
    NormError,
    ParamError,
    RangeError,
    ScaleError,
    ShapeError,
    SizeError,
    UnknownNameError,
)
from .states import (
    BlochAngles,
    DetectorSet,
    LocalBasis,
    StateVector,
    bloch_basis,
    bloch_detectors,
    computational_basis,
    computational_detectors,
    conditional_vectors,
    detector_set,
    haar_basis,
    haar_state,
    make_state,
    named_state,
    project_conditional,
    schmidt_angle,
)
from .measures import (
    CollectibilityReport,
    GramMatrix,
    collectibility,
    collectibility_from_gram,
    gram_collectibility,
    gram_defect,
    gram_from_entries,
    gram_matrix,
    max_bound,
    projection_product,
    rescaled,
    separable_bound,
    two_qubit_collectibility,
    two_qubit_detect_prob,
    two_qubit_extremes,
    two_qubit_mean,
    vector_collectibility,
    verdict,
)
from .optimize import (
    OptimizerConfig,
    OptimumResult,
    grid_oracle,
    maximize_collectibility,
    minimize_collectibility,
    unitary_from_params,
)
from .sampling import (
    McConfig,
    McEstimate,
    SWEEP_COLUMNS,
    mc_average,
    mc_detect_prob,
    sample_collectibility,
    sweep_two_qubit,
)
from .experiment import (
    ExperimentCounts,
    ExperimentReport,
    GramEstimate,
    SchemeProbabilities,
    estimate_gram,
    hom_forward,
    normalized_overlaps,
    reconstructed_overlaps,
    run_experiment,
    sample_experiment,
    swap_forward,
)
from .serialize import (
    detectors_from_json,
    detectors_to_json,
    dump_json,
    load_json,
    party_index,
    party_letter,
    state_from_json,
    state_to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
