"""
Exception hierarchy for the quantum opinion games toolkit.

The CLI maps these onto exit codes: NumericalIntegrityError exits 1,
every other QuantumOpinionError exits 2.
"""


class QuantumOpinionError(Exception):
    """Base class for every error raised by this package."""


class NormalizationError(QuantumOpinionError):
    """A state vector's squared amplitudes do not sum to 1."""


class DimensionMismatchError(QuantumOpinionError):
    """Operands live in Hilbert spaces (or strategy spaces) of different size."""


class NumericalIntegrityError(QuantumOpinionError):
    """A computed quantity broke an invariant it must hold (trace, Hermiticity, real expectation)."""


class StrategyError(QuantumOpinionError):
    """A mixed strategy does not fit the game it is played in."""


class NotAnEquilibriumError(QuantumOpinionError):
    """An equilibrium family was requested for a profile that is not an equilibrium."""


class NonBasisStateError(QuantumOpinionError):
    """A classical reduction was requested for an initial state that is not |ij>."""


class UnsupportedModelError(QuantumOpinionError):
    """The command does not apply to the requested game model."""


class ConfigError(QuantumOpinionError):
    """The run configuration is incomplete or inconsistent."""
