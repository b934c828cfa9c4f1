"""State builders shared by the test suites."""

import numpy as np

from linalg import DensityMatrix, UnitaryMatrix, kron, validate_density


def maximally_entangled(n: int = 2) -> DensityMatrix:
    psi = np.eye(n).reshape(-1) / np.sqrt(n)
    return validate_density(np.outer(psi, psi.conj()))


def maximally_mixed(N: int) -> DensityMatrix:
    return validate_density(np.eye(N) / N)


def diagonal_state(*p: float) -> DensityMatrix:
    return validate_density(np.diag(np.asarray(p, dtype=float)))


def basis_state(N: int, index: int = 0) -> DensityMatrix:
    M = np.zeros((N, N))
    M[index, index] = 1.0
    return validate_density(M)


def product_state(*factors: DensityMatrix) -> DensityMatrix:
    M = factors[0].matrix
    for f in factors[1:]:
        M = kron(M, f.matrix)
    return validate_density(M)


def identity(N: int) -> UnitaryMatrix:
    return UnitaryMatrix(np.eye(N, dtype=np.complex128))
