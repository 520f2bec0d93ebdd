"""Finite frames with prescribed spectrum and column norms.

Tools for deciding when the space of frames with a given frame-operator
spectrum and given column norms is nonempty / smooth, walking its eigenstep
polytope, synthesizing frames from eigenstep tables, sampling, spark checks,
and the torus action with its momentum map.
"""

__version__ = "0.1.0"

from .frame_core import (
    Frame,
    FrameError,
    NonHermitianError,
    NotAFrameError,
    NormVector,
    Spectrum,
    frame_operator,
    gram_matrix,
    hermitian_eig,
    norms_of,
    partial_frame_operator,
    spectrum_of,
    symplectic_pairing,
)
from .admissibility import (
    AdmissibilityVerdict,
    DimensionReport,
    SpaceClassification,
    check_admissible,
    classify_space,
    frame_space_dimensions,
    partition_witness,
)
from .eigensteps import (
    EigenstepTable,
    EmptyPolytopeError,
    NotAdmissibleError,
    PolytopeSystem,
    ValidationReport,
    compute_eigensteps,
    forced_entries,
    hit_and_run,
    interior_point,
    polytope_system,
    sample_tables,
    table_from_csv,
    table_to_csv,
    validate_eigensteps,
)
from .synthesis import (
    InconsistentTableError,
    InvalidWitnessError,
    SynthesisOptions,
    derive_seed,
    frame_from_eigensteps,
    random_frame,
    rank_one_masses,
    spark_deficient_witness,
)
from .torus_action import (
    ActionIndex,
    DegenerateActionError,
    circle_action,
    infinitesimal_field,
    momentum_value,
    torus_action,
    verify_momentum_identity,
)
from .spark import (
    SparkReport,
    is_full_spark,
    plucker_coordinates,
    plucker_product,
    spark,
)
from .singularity import (
    InvalidPartitionError,
    OdfPartition,
    StabilizerElement,
    cone_membership,
    is_orthodecomposable,
    momentum_jacobian_rank,
    stabilizer_basis,
    stabilizer_dimension,
)
from .experiments import (
    ExperimentReport,
    Outcome,
    run_invariant_suite,
    run_trichotomy,
)

__all__ = [
    "Frame",
    "FrameError",
    "NonHermitianError",
    "NotAFrameError",
    "NormVector",
    "Spectrum",
    "frame_operator",
    "gram_matrix",
    "hermitian_eig",
    "norms_of",
    "partial_frame_operator",
    "spectrum_of",
    "symplectic_pairing",
    "AdmissibilityVerdict",
    "DimensionReport",
    "SpaceClassification",
    "check_admissible",
    "classify_space",
    "frame_space_dimensions",
    "partition_witness",
    "EigenstepTable",
    "EmptyPolytopeError",
    "NotAdmissibleError",
    "PolytopeSystem",
    "ValidationReport",
    "compute_eigensteps",
    "forced_entries",
    "hit_and_run",
    "interior_point",
    "polytope_system",
    "sample_tables",
    "table_from_csv",
    "table_to_csv",
    "validate_eigensteps",
    "InconsistentTableError",
    "InvalidWitnessError",
    "SynthesisOptions",
    "derive_seed",
    "frame_from_eigensteps",
    "random_frame",
    "rank_one_masses",
    "spark_deficient_witness",
    "ActionIndex",
    "DegenerateActionError",
    "circle_action",
    "infinitesimal_field",
    "momentum_value",
    "torus_action",
    "verify_momentum_identity",
    "SparkReport",
    "is_full_spark",
    "plucker_coordinates",
    "plucker_product",
    "spark",
    "InvalidPartitionError",
    "OdfPartition",
    "StabilizerElement",
    "cone_membership",
    "is_orthodecomposable",
    "momentum_jacobian_rank",
    "stabilizer_basis",
    "stabilizer_dimension",
    "ExperimentReport",
    "Outcome",
    "run_invariant_suite",
    "run_trichotomy",
]
