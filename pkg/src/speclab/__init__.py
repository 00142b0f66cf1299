"""Numerical laboratory for planar Dirichlet spectral geometry.

Finite-difference Dirichlet eigenvalues and torsion functions on masked
grids, Fraenkel-type asymmetries, spectral decompositions, and a harness
that checks classical and stability inequalities with explicit error
budgets.
"""

from .asymmetry import AsymmetryResult, fraenkel1, fraenkel2
from .decomposition import Decomposition, connected_components, decompose
from .errors import (
    DecompositionError,
    DegenerateDomainError,
    GridMismatchError,
    InsufficientDataError,
    InvalidConfigError,
    IterationLimitError,
    SpecLabError,
)
from .families import DomainSpec, build_domain, domain_family
from .grid import (
    GridDomain,
    TwoBallConfig,
    from_predicate,
    make_ball,
    make_ball_pair,
    rescale_domain,
)
from .inequalities import (
    InequalityRecord,
    SweepReport,
    Uncertain,
    run_domain,
    study_domain,
    sweep,
)
from .linalg import SparseSymMatrix, cg_solve, smallest_eigenpairs
from .operators import (
    SpectrumResult,
    TorsionResult,
    assemble_laplacian,
    spectrum,
    spectrum_extrapolated,
    torsion,
    torsion_extrapolated,
)
from .sharpness import ExponentFit, doubling_check, fit_exponent

__version__ = "0.1.0"

__all__ = [
    "AsymmetryResult",
    "Decomposition",
    "DecompositionError",
    "DegenerateDomainError",
    "DomainSpec",
    "ExponentFit",
    "GridDomain",
    "GridMismatchError",
    "InequalityRecord",
    "InsufficientDataError",
    "InvalidConfigError",
    "IterationLimitError",
    "SparseSymMatrix",
    "SpecLabError",
    "SpectrumResult",
    "SweepReport",
    "TorsionResult",
    "TwoBallConfig",
    "Uncertain",
    "assemble_laplacian",
    "build_domain",
    "cg_solve",
    "connected_components",
    "decompose",
    "domain_family",
    "doubling_check",
    "fit_exponent",
    "fraenkel1",
    "fraenkel2",
    "from_predicate",
    "make_ball",
    "make_ball_pair",
    "rescale_domain",
    "run_domain",
    "smallest_eigenpairs",
    "spectrum",
    "spectrum_extrapolated",
    "study_domain",
    "sweep",
    "torsion",
    "torsion_extrapolated",
    "__version__",
]
