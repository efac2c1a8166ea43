"""
Dense complex linear algebra for two-party systems with 2 or 3 levels per party.

Basis label (i, j) is 1-based and maps to flat index (i - 1) * dim_b + (j - 1),
so player A is always the leading tensor factor.
"""

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from quantum_opinion.errors import (
    DimensionMismatchError,
    NormalizationError,
    NumericalIntegrityError,
)

logger = logging.getLogger(__name__)

TOLERANCE = 1e-12
SUPPORTED_DIMS = (2, 3)


def _frozen(values, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=np.complex128)
    if array.ndim != ndim:
        raise DimensionMismatchError(f"expected a {ndim}-d array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise NumericalIntegrityError("NaN or infinite entry")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StateVector:
    dim_a: int
    dim_b: int
    amplitudes: np.ndarray  # u_ij, row-major over (i, j)

    def __post_init__(self):
        if self.dim_a not in SUPPORTED_DIMS or self.dim_b not in SUPPORTED_DIMS:
            raise DimensionMismatchError(f"unsupported dims {self.dim_a}x{self.dim_b}")
        amplitudes = _frozen(self.amplitudes, 1)
        if amplitudes.shape[0] != self.dim_a * self.dim_b:
            raise DimensionMismatchError(
                f"{amplitudes.shape[0]} amplitudes for a {self.dim_a}x{self.dim_b} system"
            )
        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > TOLERANCE:
            raise NormalizationError(f"sum of |u_ij|^2 is {norm!r}, not 1")
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex], dim: int, normalize: bool = False) -> "StateVector":
        values = np.asarray(amplitudes, dtype=np.complex128)
        if normalize:
            norm = np.sqrt(np.sum(np.abs(values) ** 2))
            if norm == 0:
                raise NormalizationError("cannot normalize the zero vector")
            values = values / norm
        return cls(dim, dim, values)

    @property
    def probabilities(self) -> np.ndarray:
        """|u_ij|^2 as a dim_a x dim_b table."""
        return (np.abs(self.amplitudes) ** 2).reshape(self.dim_a, self.dim_b)

    def amplitude(self, i: int, j: int) -> complex:
        return complex(self.amplitudes[(i - 1) * self.dim_b + (j - 1)])

    def with_phases(self, phases: Sequence[float]) -> "StateVector":
        """Multiply each amplitude by exp(i * phase)."""
        factors = np.exp(1j * np.asarray(phases, dtype=float))
        return StateVector(self.dim_a, self.dim_b, self.amplitudes * factors)

    def basis_label(self) -> Optional[Tuple[int, int]]:
        """(i, j) if this is a basis state |ij> up to phase, else None."""
        probabilities = self.probabilities
        i, j = np.unravel_index(int(np.argmax(probabilities)), probabilities.shape)
        if probabilities[i, j] >= 1.0 - TOLERANCE:
            return int(i) + 1, int(j) + 1
        return None


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        matrix = _frozen(self.matrix, 2)
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {matrix.shape}")
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_hermitian(self, tol: float = TOLERANCE) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, rtol=0.0, atol=tol))

    def is_unitary(self, tol: float = TOLERANCE) -> bool:
        product = self.matrix @ self.matrix.conj().T
        return bool(np.allclose(product, np.eye(self.dim), rtol=0.0, atol=tol))

    def apply(self, psi: StateVector) -> StateVector:
        if psi.dim_a * psi.dim_b != self.dim:
            raise DimensionMismatchError(f"{self.name or 'operator'} is {self.dim}-d, state is {psi.dim_a * psi.dim_b}-d")
        return StateVector(psi.dim_a, psi.dim_b, self.matrix @ psi.amplitudes)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        matrix = _frozen(self.matrix, 2)
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got {matrix.shape}")
        if not np.allclose(matrix, matrix.conj().T, rtol=0.0, atol=TOLERANCE):
            raise NumericalIntegrityError("density matrix is not Hermitian")
        trace = np.trace(matrix)
        if abs(trace - 1.0) > TOLERANCE:
            raise NumericalIntegrityError(f"density matrix trace is {trace!r}")
        diagonal = np.diag(matrix)
        if np.any(np.abs(diagonal.imag) > TOLERANCE) or np.any(diagonal.real < -TOLERANCE):
            raise NumericalIntegrityError("density matrix diagonal is not real and non-negative")
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()


def permutation_operator(mapping: Mapping[int, int], dim: int, name: str = "") -> Operator:
    """Operator U with U|j> = |mapping[j]>, labels 1-based."""
    if sorted(mapping) != list(range(1, dim + 1)) or sorted(mapping.values()) != list(range(1, dim + 1)):
        raise DimensionMismatchError(f"{mapping} is not a permutation of 1..{dim}")
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for source, target in mapping.items():
        matrix[target - 1, source - 1] = 1.0
    return Operator(matrix, name)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim), "I")


def basis_state(i: int, j: int, dim: int) -> StateVector:
    if not (1 <= i <= dim and 1 <= j <= dim):
        raise DimensionMismatchError(f"|{i}{j}> is not a basis state for dim {dim}")
    amplitudes = np.zeros(dim * dim, dtype=np.complex128)
    amplitudes[(i - 1) * dim + (j - 1)] = 1.0
    return StateVector(dim, dim, amplitudes)


def superposition_state(labels: Sequence[Tuple[int, int]], dim: int) -> StateVector:
    """Equal-weight superposition of the given basis labels, e.g. sqrt(0.5)(|11> + |33>)."""
    amplitudes = np.zeros(dim * dim, dtype=np.complex128)
    weight = np.sqrt(1.0 / len(labels))
    for i, j in labels:
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise DimensionMismatchError(f"|{i}{j}> is not a basis state for dim {dim}")
        amplitudes[(i - 1) * dim + (j - 1)] = weight
    return StateVector(dim, dim, amplitudes)


def uniform_state(dim: int) -> StateVector:
    return StateVector(dim, dim, np.full(dim * dim, 1.0 / dim, dtype=np.complex128))


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Uniform on the complex unit sphere: normal real and imaginary parts, then normalized."""
    raw = rng.standard_normal(dim * dim) + 1j * rng.standard_normal(dim * dim)
    return StateVector.from_amplitudes(raw, dim, normalize=True)


def outer_product(psi: StateVector) -> DensityMatrix:
    """rho = |psi><psi|."""
    norm = float(np.sum(np.abs(psi.amplitudes) ** 2))
    if abs(norm - 1.0) > TOLERANCE:
        raise NormalizationError(f"sum of |u_ij|^2 is {norm!r}, not 1")
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))


def tensor(op_a: Operator, op_b: Operator) -> Operator:
    """Kronecker product with A as the leading factor."""
    return Operator(np.kron(op_a.matrix, op_b.matrix), f"{op_a.name}⊗{op_b.name}")


def conjugate_sandwich(op: Operator, rho: DensityMatrix) -> DensityMatrix:
    """U rho U^dagger."""
    if op.dim != rho.dim:
        raise DimensionMismatchError(f"operator is {op.dim}-d, density matrix is {rho.dim}-d")
    return DensityMatrix(op.matrix @ rho.matrix @ op.matrix.conj().T)


def expectation(observable: Operator, rho: DensityMatrix) -> float:
    """Tr(observable rho), with the imaginary residue checked and dropped."""
    if observable.dim != rho.dim:
        raise DimensionMismatchError(f"observable is {observable.dim}-d, density matrix is {rho.dim}-d")
    if not observable.is_hermitian():
        raise NumericalIntegrityError(f"observable {observable.name or ''} is not Hermitian")
    value = np.trace(observable.matrix @ rho.matrix)
    if abs(value.imag) > TOLERANCE:
        raise NumericalIntegrityError(f"expectation has imaginary part {value.imag!r}")
    return float(value.real)
