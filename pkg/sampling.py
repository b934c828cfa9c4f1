"""
Seeded Random Ensembles

Haar-random unitaries, Hilbert-Schmidt random density matrices of fixed rank
and random pure states. Every sampler draws from an explicit numpy Generator;
``SeededGenerator`` turns (seed, trial index) into an independent stream.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from config import Tolerances
from errors import BadRank, ValidationError
from indexing import FactorShape
from linalg import DensityMatrix, UnitaryMatrix, validate_density, validate_unitary

logger = logging.getLogger(__name__)

_BIT_GENERATORS = {
    "PCG64": np.random.PCG64,
    "PCG64DXSM": np.random.PCG64DXSM,
    "Philox": np.random.Philox,
    "SFC64": np.random.SFC64,
}


@dataclass(frozen=True)
class SeededGenerator:
    """
    A reproducible random stream.

    Identical (seed, algorithm, spawn_key) always yields an identical stream.
    """

    seed: int
    algorithm: str = "PCG64"
    spawn_key: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.algorithm not in _BIT_GENERATORS:
            raise ValidationError(
                f"unknown algorithm {self.algorithm!r}; choose from {sorted(_BIT_GENERATORS)}"
            )
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def substream(self, index: int) -> "SeededGenerator":
        """Independent child stream, e.g. one per trial."""
        return SeededGenerator(self.seed, self.algorithm, self.spawn_key + (int(index),))

    def generator(self) -> np.random.Generator:
        """A fresh numpy Generator positioned at the start of this stream."""
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        return np.random.Generator(_BIT_GENERATORS[self.algorithm](sequence))


RandomSource = Union[SeededGenerator, np.random.Generator]


def as_generator(gen: RandomSource) -> np.random.Generator:
    """Accept a SeededGenerator or a numpy Generator."""
    if isinstance(gen, SeededGenerator):
        return gen.generator()
    return gen


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def haar_unitary(N: int, gen: RandomSource, tol: Optional[Tolerances] = None) -> UnitaryMatrix:
    """
    Haar-distributed N x N unitary.

    QR of a complex Ginibre matrix with the phases of diag(R) moved into Q.
    """
    if N < 1:
        raise ValidationError(f"dimension must be >= 1, got {N}")
    rng = as_generator(gen)
    Z = _ginibre(rng, N, N)
    Q, R = scipy.linalg.qr(Z)
    diagonal = np.diag(R)
    phases = diagonal / np.abs(diagonal)
    return validate_unitary(Q * phases, tol)


def random_product_unitary(shape: FactorShape, gen: RandomSource, tol: Optional[Tolerances] = None) -> List[UnitaryMatrix]:
    """One independent Haar unitary per factor of ``shape``."""
    rng = as_generator(gen)
    return [haar_unitary(n, rng, tol) for n in shape.dims]


def random_density(N: int, gen: RandomSource, rank: Optional[int] = None, tol: Optional[Tolerances] = None) -> DensityMatrix:
    """
    Hilbert-Schmidt random state G G^+ / Tr(G G^+) with G an N x rank Ginibre matrix.

    Args:
        N: Dimension.
        gen: Random source.
        rank: Rank of the state, 1..N; defaults to N.
    """
    rank = N if rank is None else rank
    if N < 1 or not 1 <= rank <= N:
        raise BadRank(rank, N)
    rng = as_generator(gen)
    G = _ginibre(rng, N, rank)
    W = G @ G.conj().T
    W = 0.5 * (W + W.conj().T)
    return validate_density(W / np.trace(W).real, tol)


def random_pure(N: int, gen: RandomSource, tol: Optional[Tolerances] = None) -> DensityMatrix:
    """|psi><psi| for a normalized complex Gaussian vector psi."""
    if N < 1:
        raise ValidationError(f"dimension must be >= 1, got {N}")
    rng = as_generator(gen)
    psi = _ginibre(rng, N, 1)[:, 0]
    psi = psi / np.linalg.norm(psi)
    return validate_density(np.outer(psi, psi.conj()), tol)


def random_angles(gen: RandomSource, count: int) -> np.ndarray:
    """``count`` rows of (theta, phi) uniform on the sphere."""
    rng = as_generator(gen)
    theta = np.arccos(1.0 - 2.0 * rng.random(count))
    phi = 2.0 * np.pi * rng.random(count)
    return np.column_stack([theta, phi])
