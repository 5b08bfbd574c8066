"""Projection operators onto symmetry eigen-subspaces, built as functions of the operators."""

from .core import (
    EigenSystem,
    Operator,
    SpectrumSpec,
    commutator,
    frobenius_inner,
    hermitian_eigensystem,
    load_operator,
    matrix_exponential,
    save_operator,
    spectral_projector_oracle,
)
from .estimators import SectorProjector, SymmetryProjector
from .indicator import IndicatorForm, indicator_value
from .lie import (
    CommutingSet,
    LieBasis,
    is_casimir,
    lie_closure,
    maximal_commuting_subset,
    quadratic_casimir,
    structure_constants,
)
from .projector import (
    CharacterTable,
    GroupRep,
    ProjectorReport,
    angular_momentum_projector,
    composite_projector,
    cyclic_quadrature_projector,
    equidistant_fourier_projector,
    finite_group_projector,
    lagrange_projector,
    riesz_projector,
    su2_irrep_generators,
    wigner_character,
)

__version__ = "0.1.0"

__all__ = [
    "SectorProjector",
    "SymmetryProjector",
    "IndicatorForm",
    "indicator_value",
    "EigenSystem",
    "Operator",
    "SpectrumSpec",
    "commutator",
    "frobenius_inner",
    "hermitian_eigensystem",
    "load_operator",
    "matrix_exponential",
    "save_operator",
    "spectral_projector_oracle",
    "CommutingSet",
    "LieBasis",
    "is_casimir",
    "lie_closure",
    "maximal_commuting_subset",
    "quadratic_casimir",
    "structure_constants",
    "CharacterTable",
    "GroupRep",
    "ProjectorReport",
    "angular_momentum_projector",
    "composite_projector",
    "cyclic_quadrature_projector",
    "equidistant_fourier_projector",
    "finite_group_projector",
    "lagrange_projector",
    "riesz_projector",
    "su2_irrep_generators",
    "wigner_character",
]
