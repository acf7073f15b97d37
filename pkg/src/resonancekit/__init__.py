"""resonancekit: spectra of a two-level atom coupled to one quantized field mode.

Cross-validated spectral methods on a truncated Fock space: an exact dense
diagonalization oracle, degeneracy-aware quantum averaging, KAM-type contact
transformations, isometric resonant transformations with spurious-eigenvalue
bookkeeping, and closed-form effective spectra, plus a sweep CLI.
"""

from .operators import (
    ModelParams,
    TruncationConfig,
    TruncatedOperator,
    build_boson_ops,
    tensor,
    atom_block,
    build_rabi,
    build_parity,
    default_guard,
    validated_level_count,
)
from .spectrum import (
    EigenDecomposition,
    SpectrumRow,
    SpectrumTable,
    eigh,
    classify_parity,
    sweep_exact,
    validate_truncation,
)
from .averaging import (
    DegeneracyClusters,
    AveragingResult,
    cluster_degeneracies,
    project_average,
    solve_cohomological,
    classify_resonances,
    build_effective,
    combined_projector,
)
from .kam import KamChain, KamStepReport, unitary_exp, kam_step, kam_iterate, kam_iterate_full
from .transforms import (
    IsometryRecord,
    SpuriousLevel,
    TransformedHamiltonian,
    atom_rotate,
    rt_one_photon,
    rt_two_photon,
    generic_numeric_rt,
    strong_chain,
    rt_zero_field,
    spurious_filter,
)
from .methods import METHOD_ORDER, MethodLevel, compute_levels
from .closedform import (
    ClosedFormLevel,
    laguerre,
    jc_spectrum,
    rt2_spectrum,
    strong_avg_spectrum,
    strong_rt_spectrum,
    displacement_element,
    resonance_loci,
)
from .sweep import (
    SweepConfig,
    parse_config,
    run_sweep,
    table_to_csv,
    csv_to_table,
    compare_methods,
    resonance_report,
)

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "TruncationConfig",
    "TruncatedOperator",
    "build_boson_ops",
    "tensor",
    "atom_block",
    "build_rabi",
    "build_parity",
    "default_guard",
    "validated_level_count",
    "EigenDecomposition",
    "SpectrumRow",
    "SpectrumTable",
    "eigh",
    "classify_parity",
    "sweep_exact",
    "validate_truncation",
    "DegeneracyClusters",
    "AveragingResult",
    "cluster_degeneracies",
    "project_average",
    "solve_cohomological",
    "classify_resonances",
    "build_effective",
    "combined_projector",
    "KamChain",
    "KamStepReport",
    "unitary_exp",
    "kam_step",
    "kam_iterate",
    "kam_iterate_full",
    "IsometryRecord",
    "SpuriousLevel",
    "TransformedHamiltonian",
    "atom_rotate",
    "rt_one_photon",
    "rt_two_photon",
    "generic_numeric_rt",
    "strong_chain",
    "rt_zero_field",
    "spurious_filter",
    "METHOD_ORDER",
    "MethodLevel",
    "compute_levels",
    "ClosedFormLevel",
    "laguerre",
    "jc_spectrum",
    "rt2_spectrum",
    "strong_avg_spectrum",
    "strong_rt_spectrum",
    "displacement_element",
    "resonance_loci",
    "SweepConfig",
    "parse_config",
    "run_sweep",
    "table_to_csv",
    "csv_to_table",
    "compare_methods",
    "resonance_report",
    "__version__",
]
