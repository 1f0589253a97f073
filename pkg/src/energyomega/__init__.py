"""Energy functions, omega values and automata over the extended lattice."""

from . import (
    energyauto,
    energyfn,
    extlat,
    laws,
    matrixkleene,
    omegaval,
    wordmodel,
)
from .errors import (
    AlphabetMismatch,
    BadAcceptingCount,
    BudgetExceeded,
    DimensionMismatch,
    EnergyOmegaError,
    EpsilonInOmegaBase,
    InvalidGroupTable,
    InvalidRegrouping,
    MalformedPieces,
    NegativeValue,
    NonMonotone,
    ParseError,
    SlopeTooSmall,
    UnknownIdentity,
    ValidationError,
    VerificationFailed,
)
from .extlat import BOTTOM, TOP, ExtValue, finite, format_ext, parse_ext
from .energyfn import CONST_BOTTOM, EnergyFunction, Piece, WitnessReport, identity, shift
from .omegaval import NEVER, ThresholdPredicate, from_threshold
from .matrixkleene import (
    ColumnVector,
    ENERGY_ALGEBRA,
    SquareMatrix,
    StarAlgebra,
    mat_omega,
    mat_omega_k,
    mat_star,
)
from .energyauto import EnergyAutomaton, QueryResult, automaton, buchi, reachable

__all__ = [
    "energyauto",
    "energyfn",
    "extlat",
    "laws",
    "matrixkleene",
    "omegaval",
    "wordmodel",
    "AlphabetMismatch",
    "BadAcceptingCount",
    "BudgetExceeded",
    "DimensionMismatch",
    "EnergyOmegaError",
    "EpsilonInOmegaBase",
    "InvalidGroupTable",
    "InvalidRegrouping",
    "MalformedPieces",
    "NegativeValue",
    "NonMonotone",
    "ParseError",
    "SlopeTooSmall",
    "UnknownIdentity",
    "ValidationError",
    "VerificationFailed",
    "BOTTOM",
    "TOP",
    "ExtValue",
    "finite",
    "format_ext",
    "parse_ext",
    "CONST_BOTTOM",
    "EnergyFunction",
    "Piece",
    "WitnessReport",
    "identity",
    "shift",
    "NEVER",
    "ThresholdPredicate",
    "from_threshold",
    "ColumnVector",
    "ENERGY_ALGEBRA",
    "SquareMatrix",
    "StarAlgebra",
    "mat_omega",
    "mat_omega_k",
    "mat_star",
    "EnergyAutomaton",
    "QueryResult",
    "automaton",
    "buchi",
    "reachable",
]

__version__ = "0.1.0"
