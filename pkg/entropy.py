"""
Tsallis q-Entropy

S_q(p) = (1 - sum_s p_s^q) / (q - 1) for probability vectors and
S_q(rho) = S_q(spectrum of rho) for density matrices, with the Shannon /
von Neumann entropy (natural log) as the q -> 1 branch.
"""

import math
from typing import Optional, Union

import numpy as np

import config
from config import Tolerances
from errors import QOutOfRange
from linalg import DensityMatrix, eig_hermitian
from tomography import TomogramVector

QParameter = float
ProbabilityLike = Union[TomogramVector, np.ndarray, list]


def validate_q(q: QParameter) -> float:
    """Return q as a float, raising QOutOfRange unless it is finite and >= 1."""
    q = float(q)
    if not math.isfinite(q) or q < 1.0:
        raise QOutOfRange(q)
    return q


def _positive_part(p: ProbabilityLike, tol: Optional[Tolerances] = None) -> np.ndarray:
    if not isinstance(p, TomogramVector):
        p = TomogramVector.from_array(p, tol)
    values = p.probabilities
    # clamped noise and padding zeros contribute nothing
    return values[values > 0.0]


def shannon(p: ProbabilityLike, tol: Optional[Tolerances] = None) -> float:
    """-sum p ln p with 0 ln 0 = 0."""
    nz = _positive_part(p, tol)
    return float(-np.sum(nz * np.log(nz)))


def tsallis_classical(p: ProbabilityLike, q: QParameter, tol: Optional[Tolerances] = None) -> float:
    """
    Tsallis entropy of a probability vector.

    Args:
        p: Probability vector; raw arrays are validated with
           TomogramVector.from_array. Zero entries are ignored.
        q: Entropic index, q >= 1.
        tol: Tolerances; ``eps_q`` sets the width of the Shannon branch.

    Returns:
        (1 - sum p^q) / (q - 1), or the Shannon entropy when |q - 1| <= eps_q.
    """
    q = validate_q(q)
    tol = config.resolve(tol)
    if q - 1.0 <= tol.eps_q:
        return shannon(p, tol)
    nz = _positive_part(p, tol)
    return float((1.0 - np.sum(nz ** q)) / (q - 1.0))


def spectrum(rho: DensityMatrix, tol: Optional[Tolerances] = None) -> np.ndarray:
    """Eigenvalues of rho with round-off negatives set to zero."""
    return np.clip(eig_hermitian(rho.matrix, tol).eigenvalues, 0.0, None)


def tsallis_quantum(rho: DensityMatrix, q: QParameter, tol: Optional[Tolerances] = None) -> float:
    """S_q(rho) = -Tr rho^q (rho^{1-q} - 1) / (1 - q), evaluated on the spectrum."""
    q = validate_q(q)
    return tsallis_classical(TomogramVector(spectrum(rho, tol)), q, tol)


def von_neumann(rho: DensityMatrix, tol: Optional[Tolerances] = None) -> float:
    """-Tr rho ln rho, the q = 1 limit of tsallis_quantum."""
    return shannon(TomogramVector(spectrum(rho, tol)), tol)
