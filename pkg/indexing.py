"""
Composite Index Maps

Bijections s <-> (i, k) and s <-> (i, k, l) on 1..N, the stochastic
marginalization matrices built from them, reduced density matrices obtained
by summing over discarded index components, and zero padding of states whose
dimension does not factor as requested.

All maps are row-major: the last factor varies fastest.
"""

import logging
from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from config import Tolerances
from errors import (
    BadPosition,
    EmptyKeepSet,
    IndexOutOfRange,
    ShapeMismatch,
    TargetTooSmall,
    ValidationError,
)
from linalg import DensityMatrix, RealMatrix, validate_density

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class FactorShape:
    """Ordered factor dimensions (n_1, ..., n_f) with N = n_1 * ... * n_f."""

    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims:
            raise ValidationError("a factor shape needs at least one factor")
        if any(n < 1 for n in dims):
            raise ValidationError(f"factor dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def parse(cls, text: str) -> "FactorShape":
        """Parse '2,3' or '2x2x2'."""
        parts = [p for p in text.replace("x", ",").split(",") if p.strip()]
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError:
            raise ValidationError(f"bad shape {text!r}") from None

    @property
    def N(self) -> int:
        return prod(self.dims)

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def kept(self, keep: Iterable[int]) -> "FactorShape":
        positions = normalize_keep(self, keep)
        return FactorShape(tuple(self.dims[p - 1] for p in positions))

    def __str__(self) -> str:
        return ",".join(str(n) for n in self.dims)


def normalize_keep(shape: FactorShape, keep: Iterable[int]) -> Tuple[int, ...]:
    """Validate 1-based factor positions and return them in ascending order."""
    positions = tuple(keep)
    if not positions:
        raise EmptyKeepSet()
    for p in positions:
        if not isinstance(p, (int, np.integer)) or not 1 <= p <= shape.n_factors:
            raise BadPosition(p, shape.n_factors)
    if len(set(positions)) != len(positions):
        raise BadPosition(positions, shape.n_factors)
    return tuple(sorted(int(p) for p in positions))


def compose_index(shape: FactorShape, idx: Sequence[int]) -> int:
    """
    Map a 1-based multi-index to its 1-based composite index.

    Args:
        shape: The factor shape.
        idx: One component per factor, component j in 1..n_j.

    Returns:
        s = 1 + sum_j (i_j - 1) * prod_{j' > j} n_j'
    """
    if len(idx) != shape.n_factors:
        raise IndexOutOfRange(f"index {tuple(idx)} has {len(idx)} components, shape {shape.dims}")
    for i, n in zip(idx, shape.dims):
        if isinstance(i, (bool, np.bool_)) or not isinstance(i, (int, np.integer)):
            raise IndexOutOfRange(f"index component {i!r} is not an integer")
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"index {tuple(idx)} out of range for shape {shape.dims}")
    zero_based = tuple(int(i) - 1 for i in idx)
    return int(np.ravel_multi_index(zero_based, shape.dims)) + 1


def decompose_index(shape: FactorShape, s: int) -> MultiIndex:
    """Inverse of compose_index."""
    if not 1 <= s <= shape.N:
        raise IndexOutOfRange(f"composite index {s} not in 1..{shape.N}")
    return tuple(int(i) + 1 for i in np.unravel_index(int(s) - 1, shape.dims))


@dataclass(frozen=True, eq=False)
class MarginalizationMatrix:
    """0/1 column-stochastic N x N matrix packing a marginal into the leading rows."""

    shape: FactorShape
    keep: Tuple[int, ...]
    matrix: RealMatrix

    @property
    def N(self) -> int:
        return self.shape.N

    @property
    def packed_length(self) -> int:
        """Number of leading rows that can be nonzero."""
        return self.shape.kept(self.keep).N

    def apply(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.N,):
            raise ShapeMismatch(f"vector of length {w.shape[0]} for N = {self.N}")
        return self.matrix @ w


def marginalization_matrix(shape: FactorShape, keep: Iterable[int]) -> MarginalizationMatrix:
    """
    Build the stochastic matrix summing out every factor not in ``keep``.

    Column s carries a single 1 in row compose_index(kept shape, kept components of s).
    """
    positions = normalize_keep(shape, keep)
    kept_dims = tuple(shape.dims[p - 1] for p in positions)

    components = np.unravel_index(np.arange(shape.N), shape.dims)
    kept_components = tuple(components[p - 1] for p in positions)
    rows = np.ravel_multi_index(kept_components, kept_dims)

    matrix = np.zeros((shape.N, shape.N), dtype=np.float64)
    matrix[rows, np.arange(shape.N)] = 1.0
    matrix.setflags(write=False)
    return MarginalizationMatrix(shape=shape, keep=positions, matrix=matrix)


def reduce_density(
    rho: DensityMatrix,
    shape: FactorShape,
    keep: Iterable[int],
    tol: Optional[Tolerances] = None,
) -> DensityMatrix:
    """
    Sum rho over the discarded index components.

    For shape (n, m) keep {1} gives the block-trace matrix rho_1 with
    (rho_1)_jk = Tr rho_jk; keep {2} gives the block sum rho_2 = sum_k rho_kk.

    Returns:
        The reduced matrix of dimension prod(kept dims), validated.
    """
    if shape.N != rho.dim:
        raise ShapeMismatch(f"shape {shape.dims} has N = {shape.N}, matrix has N = {rho.dim}")
    positions = normalize_keep(shape, keep)
    f = shape.n_factors

    row_letters = _LETTERS[:f]
    col_letters = list(_LETTERS[f:2 * f])
    for p in range(1, f + 1):
        if p not in positions:
            # traced components share one letter on both sides
            col_letters[p - 1] = row_letters[p - 1]
    col_letters = "".join(col_letters)
    out = "".join(row_letters[p - 1] for p in positions) + "".join(col_letters[p - 1] for p in positions)

    tensor = rho.matrix.reshape(shape.dims + shape.dims)
    reduced = np.einsum(f"{row_letters}{col_letters}->{out}", tensor)
    k = shape.kept(positions).N
    return validate_density(reduced.reshape(k, k), tol)


def pad_density(rho: DensityMatrix, target: int) -> DensityMatrix:
    """Embed rho in the top-left block of a zero target x target matrix."""
    if target < rho.dim:
        raise TargetTooSmall(target, rho.dim)
    if target == rho.dim:
        return rho
    padded = np.zeros((target, target), dtype=np.complex128)
    padded[: rho.dim, : rho.dim] = rho.matrix
    logger.debug("padded state from N=%d to N=%d", rho.dim, target)
    return DensityMatrix(padded)


def _factorizations(value: int, n_factors: int, smallest: int = 2):
    """Yield non-decreasing factor tuples of ``value`` with every factor >= smallest."""
    if n_factors == 1:
        if value >= smallest:
            yield (value,)
        return
    d = smallest
    while d ** n_factors <= value:
        if value % d == 0:
            for rest in _factorizations(value // d, n_factors - 1, d):
                yield (d,) + rest
        d += 1


def suggest_shape(N: int, n_factors: int) -> FactorShape:
    """
    Smallest N_bar >= N that splits into n_factors integer factors >= 2.

    Among the factorizations of N_bar the most balanced one is returned.
    """
    if N < 1 or n_factors < 1:
        raise ValidationError(f"need N >= 1 and n_factors >= 1, got {N}, {n_factors}")
    target = max(N, 2 ** n_factors)
    while True:
        options = list(_factorizations(target, n_factors))
        if options:
            best = min(options, key=lambda dims: max(dims) - min(dims))
            return FactorShape(best)
        target += 1


def all_multi_indices(shape: FactorShape):
    """Multi-indices of ``shape`` in composite-index order."""
    return product(*(range(1, n + 1) for n in shape.dims))
