"""Entanglement swapping simulator for a heralded two-segment atom chain.

Eight two-level atoms start out as four adjacent singlet pairs.  The two
inner atoms of each segment couple to a pair of cavity modes; measuring
them heralds an entangled state on the segment's outer atoms.  A Bell
measurement, or a second dispersive cavity stage, on the two middle
atoms then swaps the entanglement out to the ends of the chain.

Two independent engines compute every observable: closed-form
expressions (:func:`closed_form_observables`) and a generic tensor
pipeline (:func:`heralded_swap`).  ``run_scan`` cross-checks them on
every grid point.  :mod:`repeatersim.oracle` holds the brute-force
Hamiltonian propagator the effective dynamics is validated against.
"""
from .errors import (
    ConfigInvalid,
    CutoffInsufficient,
    DegenerateFormulaPoint,
    DimensionMismatch,
    EngineMismatch,
    NotHermitian,
    RepeaterError,
    ZeroProbabilityBranch,
)
from .linalg import (
    HeraldedState,
    OutcomeLabel,
    apply_to_qubits,
    basis_index,
    basis_state,
    concurrence_pure,
    kron,
    matrix_exponential_small,
    project,
)
from .params import SingleModeParams, TwoModeParams
from .dynamics import effective_unitary, qed_pair_unitary
from .protocol import (
    BELL_LABELS,
    CaseLabel,
    ENTANGLING_HERALDS,
    METHODS,
    ObservablePoint,
    PAIR_OUTCOMES,
    SwapResult,
    bsm_swap,
    closed_form_observables,
    evolve_segment,
    herald_inner_pair,
    heralded_swap,
    initial_bell_pair,
    qed_swap,
)
from .oracle import (
    FullSystemBasis,
    OracleParams,
    ReducedState,
    build_full_hamiltonian,
    dispersive_deviation,
    oracle_reduced_propagation,
    reduced_propagator,
)
from .scan import (
    OracleReportTable,
    PRESETS,
    ScanConfig,
    ScanTable,
    emit_csv,
    preset_config,
    run_oracle_report,
    run_scan,
)
from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "BELL_LABELS",
    "CaseLabel",
    "ConfigInvalid",
    "CutoffInsufficient",
    "DegenerateFormulaPoint",
    "DimensionMismatch",
    "ENTANGLING_HERALDS",
    "EngineMismatch",
    "FullSystemBasis",
    "HeraldedState",
    "KERNEL_BACKEND",
    "METHODS",
    "NotHermitian",
    "ObservablePoint",
    "OracleParams",
    "OracleReportTable",
    "OutcomeLabel",
    "PAIR_OUTCOMES",
    "PRESETS",
    "ReducedState",
    "RepeaterError",
    "ScanConfig",
    "ScanTable",
    "SingleModeParams",
    "SwapResult",
    "TwoModeParams",
    "ZeroProbabilityBranch",
    "apply_to_qubits",
    "basis_index",
    "basis_state",
    "bsm_swap",
    "build_full_hamiltonian",
    "closed_form_observables",
    "concurrence_pure",
    "dispersive_deviation",
    "effective_unitary",
    "emit_csv",
    "evolve_segment",
    "herald_inner_pair",
    "heralded_swap",
    "initial_bell_pair",
    "kron",
    "matrix_exponential_small",
    "oracle_reduced_propagation",
    "preset_config",
    "project",
    "qed_pair_unitary",
    "qed_swap",
    "reduced_propagator",
    "run_oracle_report",
    "run_scan",
    "__version__",
]
