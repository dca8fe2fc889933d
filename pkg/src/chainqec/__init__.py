"""Error-corrected quantum state transfer on engineered spin chains."""

from .chain import ChainSpec, TransferReport, analyze_transfer, pst_couplings, single_excitation_matrix
from .code import StabilizerCode, encode, logical_readout, minimal15, parity_condition, shor_code
from .decoder import (
    CorrectionReport,
    DecodeOptions,
    RevivalEvaluator,
    SyndromeBranch,
    decode_pipeline,
    measure_generators,
    success_probability,
    x_stage,
    z_stage,
)
from .errors import ResourceLimitError
from .freefermion import (
    FermionOperator,
    ModePropagator,
    chi_decay,
    classify_arrival,
    error_budget,
    jordan_wigner,
    mode_propagator,
    pauli_to_fermion,
    propagate,
)
from .hilbert import (
    DensityMatrix,
    StateVector,
    apply_pauli,
    chi,
    cz_network,
    evolve,
    fidelity,
    lindblad_evolve,
    trajectory_sample,
)
from .noise import (
    ErrorScenario,
    coupling_disorder,
    dephasing_trajectory_scenario,
    inject_single_z,
    timing_offset,
)
from .pauli import PauliString, from_label, from_sites, pauli_x, pauli_y, pauli_z

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "TransferReport",
    "analyze_transfer",
    "pst_couplings",
    "single_excitation_matrix",
    "StabilizerCode",
    "encode",
    "logical_readout",
    "minimal15",
    "parity_condition",
    "shor_code",
    "CorrectionReport",
    "DecodeOptions",
    "RevivalEvaluator",
    "SyndromeBranch",
    "decode_pipeline",
    "measure_generators",
    "success_probability",
    "x_stage",
    "z_stage",
    "ResourceLimitError",
    "FermionOperator",
    "ModePropagator",
    "chi_decay",
    "classify_arrival",
    "error_budget",
    "jordan_wigner",
    "mode_propagator",
    "pauli_to_fermion",
    "propagate",
    "DensityMatrix",
    "StateVector",
    "apply_pauli",
    "chi",
    "cz_network",
    "evolve",
    "fidelity",
    "lindblad_evolve",
    "trajectory_sample",
    "ErrorScenario",
    "coupling_disorder",
    "dephasing_trajectory_scenario",
    "inject_single_z",
    "timing_offset",
    "PauliString",
    "from_label",
    "from_sites",
    "pauli_x",
    "pauli_y",
    "pauli_z",
    "__version__",
]
