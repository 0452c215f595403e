"""Exact computational engine for almost abelian Lie algebras: cohomology,
symplectic forms, Lefschetz operators, and lattice certificates."""

from .algebra import (
    Algebra,
    BasisLayout,
    JordanBlock,
    JordanSpec,
    SpecError,
    SpectrumVerdict,
    build,
    validate_spectrum,
)
from .cohomology import (
    CohomologySpace,
    Circuit,
    H2Decomposition,
    betti,
    betti_numbers,
    circuit_form,
    circuits_of,
    closed_two_form_structure,
    cohomology,
    companion,
    delta_form,
    gamma_form,
    is_exact,
    poincare_pairing,
    verify_h2_structure,
)
from .exact import QMatrix, in_column_space, nullspace_basis, qf, rank
from .exterior import KForm, power, to_text, top_coefficient, wedge
from .lattice import (
    LatticeCertificate,
    LatticeSpec,
    certify,
    char_poly_exp,
    companion_matrix,
    t_k,
)
from .lefschetz import (
    LefschetzReport,
    NormalizationResult,
    Prediction,
    SymplecticError,
    SymplecticForm,
    default_symplectic,
    hard_lefschetz_report,
    kernel_witness_check,
    lefschetz_matrix,
    normalize_symplectic,
    predict_verdict,
    pullback,
    random_exact_perturbation,
    validate_symplectic,
)
from .sweep import run_sweep, sweep_specs, verify_spec

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "BasisLayout",
    "Circuit",
    "CohomologySpace",
    "H2Decomposition",
    "JordanBlock",
    "JordanSpec",
    "KForm",
    "LatticeCertificate",
    "LatticeSpec",
    "LefschetzReport",
    "NormalizationResult",
    "Prediction",
    "QMatrix",
    "SpecError",
    "SpectrumVerdict",
    "SymplecticError",
    "SymplecticForm",
    "betti",
    "betti_numbers",
    "build",
    "certify",
    "char_poly_exp",
    "circuit_form",
    "circuits_of",
    "closed_two_form_structure",
    "cohomology",
    "companion",
    "companion_matrix",
    "default_symplectic",
    "delta_form",
    "gamma_form",
    "hard_lefschetz_report",
    "in_column_space",
    "is_exact",
    "kernel_witness_check",
    "lefschetz_matrix",
    "normalize_symplectic",
    "nullspace_basis",
    "poincare_pairing",
    "power",
    "predict_verdict",
    "pullback",
    "qf",
    "random_exact_perturbation",
    "rank",
    "run_sweep",
    "sweep_specs",
    "t_k",
    "to_text",
    "top_coefficient",
    "validate_spectrum",
    "validate_symplectic",
    "verify_h2_structure",
    "verify_spec",
    "wedge",
]
