"""Surface-code decoding with erroneous syndromes.

Implements the BP-LCOSD list decoder (normalized min-sum BP with syndrome
soft information, followed by locally constrained ordered statistics
decoding over the extended check matrix), plus BP/NMS and exact-MWPM
baselines and a reproducible Monte Carlo harness.
"""

from .bp import BpConfig, BpOutput, TannerGraph, bp_decode, check_node_update, variable_to_check
from .channel import (
    LLR_MAX,
    LlrState,
    NoiseModel,
    PauliVector,
    SyndromeSample,
    init_llrs,
    measure_syndrome,
    sample_error,
    trial_rng,
)
from .codes import StabilizerCode, SurfaceGeometry, build_surface_code, five_qubit_code
from .gf2 import BitMatrix, GeResult, ge_reduce, nullspace_basis, rank, symplectic_syndrome
from .harness import (
    AggregateStats,
    SimConfig,
    TrialRecord,
    p_grid_from_range,
    run_point,
    run_sweep,
    selftest,
    wilson_interval,
)
from .lcosd import (
    CandidateList,
    LcosdConfig,
    LcosdResult,
    LcosdWorkspace,
    enumerate_candidates,
    lcosd_decode,
    reencode,
    select_mris,
)
from .mwpm import (
    DefectSet,
    Matching,
    boundary_distance,
    defect_distance,
    exact_matching,
    mwpm_decode,
)
from .pipeline import (
    DecodeResult,
    PipelineConfig,
    bp_lcosd_decode,
    concatenate,
    extend_parity,
    extract,
    is_logical_error,
    marginalize,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateStats",
    "BitMatrix",
    "BpConfig",
    "BpOutput",
    "CandidateList",
    "DecodeResult",
    "DefectSet",
    "GeResult",
    "LLR_MAX",
    "LcosdConfig",
    "LcosdResult",
    "LcosdWorkspace",
    "LlrState",
    "Matching",
    "NoiseModel",
    "PauliVector",
    "PipelineConfig",
    "SimConfig",
    "StabilizerCode",
    "SurfaceGeometry",
    "SyndromeSample",
    "TannerGraph",
    "TrialRecord",
    "bp_decode",
    "bp_lcosd_decode",
    "boundary_distance",
    "build_surface_code",
    "check_node_update",
    "concatenate",
    "defect_distance",
    "enumerate_candidates",
    "exact_matching",
    "extend_parity",
    "extract",
    "five_qubit_code",
    "ge_reduce",
    "init_llrs",
    "is_logical_error",
    "lcosd_decode",
    "marginalize",
    "measure_syndrome",
    "mwpm_decode",
    "nullspace_basis",
    "p_grid_from_range",
    "rank",
    "reencode",
    "run_point",
    "run_sweep",
    "sample_error",
    "select_mris",
    "selftest",
    "symplectic_syndrome",
    "trial_rng",
    "variable_to_check",
    "wilson_interval",
]
