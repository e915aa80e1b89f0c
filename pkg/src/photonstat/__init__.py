"""Higher-order nonclassicality criteria for photon-subtracted and
photon-added states, computed from normalization-constant ladders and
verified against a brute-force oracle on truncated number distributions."""

__version__ = "0.1.0"

from .exceptions import (
    AccuracyError,
    CancellationError,
    CancellationWarning,
    PhotonStatError,
    UndefinedStateError,
)
from .kernels import USING_COMPILED
from .states import (
    DEFAULT_POLICY,
    FAMILIES,
    CutoffPolicy,
    NumberDistribution,
    build_coherent,
    build_fock,
    build_squeezed_vacuum,
    build_state,
    build_thermal,
    choose_cutoff,
)
from .moments import (
    ModKind,
    MomentLadder,
    Ordering,
    StateModification,
    added_factorial_moment,
    antinormal_ladder,
    ladder_sums_exact,
    modified_moment,
    modified_moment_sequence,
    normal_ladder,
    reorder_coefficients,
    subtracted_factorial_moment,
)
from .criteria import (
    CriteriaReport,
    DegenerateA3,
    MomentPair,
    agarwal_tara,
    evaluate_all,
    lee_dh,
    mandel_q,
    mandel_q_added,
    mandel_q_subtracted,
    mu_from_m,
    poisson_central_moment,
    q_ell_central,
    q_ell_normal,
    stirling2,
)
from .oracle import (
    DEFAULT_SUITE_STATES,
    EquivalenceCell,
    EquivalenceReport,
    OracleResult,
    direct_moments,
    direct_power_moments,
    equivalence_suite,
    oracle_add,
    oracle_subtract,
)

__all__ = [
    "AccuracyError",
    "CancellationError",
    "CancellationWarning",
    "CriteriaReport",
    "CutoffPolicy",
    "DEFAULT_POLICY",
    "DEFAULT_SUITE_STATES",
    "DegenerateA3",
    "EquivalenceCell",
    "EquivalenceReport",
    "FAMILIES",
    "ModKind",
    "MomentLadder",
    "MomentPair",
    "NumberDistribution",
    "OracleResult",
    "Ordering",
    "PhotonStatError",
    "StateModification",
    "USING_COMPILED",
    "UndefinedStateError",
    "added_factorial_moment",
    "agarwal_tara",
    "antinormal_ladder",
    "build_coherent",
    "build_fock",
    "build_squeezed_vacuum",
    "build_state",
    "build_thermal",
    "choose_cutoff",
    "direct_moments",
    "direct_power_moments",
    "equivalence_suite",
    "evaluate_all",
    "ladder_sums_exact",
    "lee_dh",
    "mandel_q",
    "mandel_q_added",
    "mandel_q_subtracted",
    "modified_moment",
    "modified_moment_sequence",
    "mu_from_m",
    "normal_ladder",
    "oracle_add",
    "oracle_subtract",
    "poisson_central_moment",
    "q_ell_central",
    "q_ell_normal",
    "reorder_coefficients",
    "stirling2",
]
