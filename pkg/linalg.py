"""
Dense Complex Matrix Core

Hermitian eigendecomposition, Kronecker products, entrywise modulus squared
and the validated quantum-state types used throughout the package.
"""

import json
import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import numpy.typing as npt
import scipy.linalg

import config
from config import Tolerances
from errors import (
    DecompositionError,
    MatrixFileError,
    NotHermitian,
    NotPositiveSemidefinite,
    NotSquare,
    NotUnitary,
    QOutOfRange,
    TraceNotOne,
    ValidationError,
)

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
RealMatrix = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite N x N matrix."""

    matrix: ComplexMatrix

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """N x N matrix with u u^+ = I."""

    matrix: ComplexMatrix

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> ComplexMatrix:
        return self.matrix.conj().T


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending eigenvalues; column k of ``eigenvectors`` pairs with eigenvalue k."""

    eigenvalues: RealMatrix
    eigenvectors: UnitaryMatrix

    def reconstruct(self) -> ComplexMatrix:
        u0 = self.eigenvectors.matrix
        return (u0 * self.eigenvalues) @ u0.conj().T


MatrixLike = Union[ComplexMatrix, DensityMatrix, UnitaryMatrix]


def as_array(M: MatrixLike) -> ComplexMatrix:
    """Unwrap DensityMatrix / UnitaryMatrix, or view raw input as complex."""
    if isinstance(M, (DensityMatrix, UnitaryMatrix)):
        return M.matrix
    return np.asarray(M, dtype=np.complex128)


def _require_square(M: ComplexMatrix) -> None:
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise NotSquare(M.shape)


def _require_finite(M: np.ndarray) -> None:
    if not np.all(np.isfinite(M)):
        raise ValidationError("matrix has non-finite entries")


def hermitian_residual(M: ComplexMatrix) -> float:
    """max |M - M^+|."""
    return float(np.max(np.abs(M - M.conj().T)))


def eig_hermitian(H: MatrixLike, tol: Optional[Tolerances] = None) -> SpectralDecomposition:
    """
    Eigendecomposition of a Hermitian matrix.

    Args:
        H: Square Hermitian matrix.
        tol: Tolerances; defaults to the environment configuration.

    Returns:
        Real ascending eigenvalues with unitary eigenvector columns.
    """
    tol = config.resolve(tol)
    H = as_array(H)
    _require_square(H)
    residual = hermitian_residual(H)
    if residual > tol.herm:
        raise NotHermitian(residual)

    # symmetrize so eigh sees an exactly Hermitian input
    H_sym = 0.5 * (H + H.conj().T)
    eigenvalues, eigenvectors = scipy.linalg.eigh(H_sym)
    spectrum = SpectralDecomposition(
        eigenvalues=np.asarray(eigenvalues, dtype=np.float64),
        eigenvectors=UnitaryMatrix(np.asarray(eigenvectors, dtype=np.complex128)),
    )

    recon = float(np.max(np.abs(spectrum.reconstruct() - H)))
    if recon > tol.recon:
        raise DecompositionError(recon)
    return spectrum


def kron(A: MatrixLike, B: MatrixLike) -> ComplexMatrix:
    """Kronecker product with row-major composite index (i, k)."""
    return np.kron(as_array(A), as_array(B))


def abs_squared(U: MatrixLike) -> RealMatrix:
    """Entrywise |U_ab|^2; doubly stochastic when U is unitary."""
    U = as_array(U)
    return U.real ** 2 + U.imag ** 2


def validate_unitary(M: MatrixLike, tol: Optional[Tolerances] = None) -> UnitaryMatrix:
    """Check u u^+ = I within ``tol.unitary`` and wrap a copy of M."""
    tol = config.resolve(tol)
    M = np.array(as_array(M), dtype=np.complex128)
    _require_square(M)
    _require_finite(M)
    residual = float(np.max(np.abs(M @ M.conj().T - np.eye(M.shape[0]))))
    if residual > tol.unitary:
        raise NotUnitary(residual)
    return UnitaryMatrix(M)


def validate_density(M: MatrixLike, tol: Optional[Tolerances] = None) -> DensityMatrix:
    """
    Check the density-matrix invariants.

    Args:
        M: Candidate square matrix.
        tol: Tolerances; defaults to the environment configuration.

    Returns:
        A DensityMatrix wrapping a private copy of M.

    Raises:
        NotSquare, ValidationError (non-finite entries), NotHermitian,
        TraceNotOne, NotPositiveSemidefinite
    """
    tol = config.resolve(tol)
    M = np.array(as_array(M), dtype=np.complex128)
    _require_square(M)
    _require_finite(M)

    residual = hermitian_residual(M)
    if residual > tol.herm:
        raise NotHermitian(residual)

    trace = float(np.trace(M).real)
    if abs(trace - 1.0) > tol.trace:
        raise TraceNotOne(trace)

    min_eigenvalue = float(scipy.linalg.eigvalsh(0.5 * (M + M.conj().T))[0])
    if min_eigenvalue < -tol.psd:
        raise NotPositiveSemidefinite(min_eigenvalue)

    return DensityMatrix(M)


def matrix_q_power(rho: DensityMatrix, q: float, tol: Optional[Tolerances] = None) -> ComplexMatrix:
    """rho^q through the spectrum, with 0^q = 0."""
    if q < 1:
        raise QOutOfRange(q)
    spectrum = eig_hermitian(rho.matrix, tol)
    powered = np.power(np.clip(spectrum.eigenvalues, 0.0, None), q)
    u0 = spectrum.eigenvectors.matrix
    return (u0 * powered) @ u0.conj().T


def load_matrix_json(path: str) -> ComplexMatrix:
    """
    Read the shared matrix file format.

    The file holds {"n": int, "re": [[...]], "im": [[...]]}; "im" is optional.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except UnicodeDecodeError as e:
        raise MatrixFileError(f"{path}: not UTF-8 text ({e.reason})") from e
    except json.JSONDecodeError as e:
        raise MatrixFileError(f"{path}: not valid JSON ({e})") from e

    if not isinstance(payload, dict) or "re" not in payload:
        raise MatrixFileError(f"{path}: expected an object with 'n' and 're'")

    try:
        re = np.asarray(payload["re"], dtype=np.float64)
        im = np.asarray(payload["im"], dtype=np.float64) if "im" in payload else np.zeros_like(re)
    except (TypeError, ValueError) as e:
        raise MatrixFileError(f"{path}: 're'/'im' must be rectangular lists of numbers ({e})") from e
    n = payload.get("n", re.shape[0] if re.ndim == 2 else None)
    if re.ndim != 2 or re.shape != im.shape or re.shape != (n, n):
        raise MatrixFileError(
            f"{path}: 're'/'im' must both be {n}x{n}, got {re.shape} and {im.shape}"
        )
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise MatrixFileError(f"{path}: matrix entries must be finite")
    logger.debug("loaded %dx%d matrix from %s", n, n, path)
    return re + 1j * im


def dump_matrix_json(M: MatrixLike, path: str) -> None:
    """
    Write M in the format read by load_matrix_json.

    Args:
        M: Square matrix, raw or wrapped.
        path: Destination file; overwritten.
    """
    M = as_array(M)
    _require_square(M)
    payload = {"n": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f)
