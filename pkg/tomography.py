"""
Qudit Tomograms

Tomographic probability vectors w(u) = diag(u rho u^+) of single-qudit states
under global, product and SU(2)-irrep unitaries, their marginals, and the
no-signaling check for marginals of product-unitary tomograms.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence, Union

import numpy as np

import config
from config import Tolerances
from errors import (
    BadSpin,
    DimMismatch,
    EmptyProduct,
    NegativeProbability,
    NotNormalized,
    ShapeMismatch,
    ValidationError,
)
from indexing import FactorShape, marginalization_matrix, normalize_keep, reduce_density
from linalg import (
    DensityMatrix,
    RealMatrix,
    UnitaryMatrix,
    abs_squared,
    eig_hermitian,
    kron,
    validate_unitary,
)
from reports import InequalityId, InequalityReport

logger = logging.getLogger(__name__)

Spin = Union[int, float, str, Fraction]


@dataclass(frozen=True, eq=False)
class TomogramVector:
    """Nonnegative length-N probability vector."""

    probabilities: RealMatrix

    def __post_init__(self):
        self.probabilities.setflags(write=False)

    @classmethod
    def from_array(cls, values, tol: Optional[Tolerances] = None) -> "TomogramVector":
        """
        Validate raw probabilities.

        Entries in [-prob_floor, 0) are clamped to zero; anything lower raises.
        """
        tol = config.resolve(tol)
        p = np.array(values, dtype=np.float64).reshape(-1)
        if p.size == 0:
            raise ValidationError("empty probability vector")
        lowest = float(p.min())
        if lowest < -tol.prob_floor:
            raise NegativeProbability(lowest)
        p[p < 0] = 0.0
        total = float(p.sum())
        if abs(total - 1.0) > tol.trace:
            raise NotNormalized(total)
        return cls(p)

    @property
    def N(self) -> int:
        return self.probabilities.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probabilities, dtype=dtype)


@dataclass(frozen=True)
class SU2Angles:
    """Polar angle theta and azimuth phi (radians) of the quantization axis."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValidationError(f"angles must be finite, got ({self.theta}, {self.phi})")


def _check_dims(rho: DensityMatrix, u: UnitaryMatrix) -> None:
    if rho.dim != u.dim:
        raise DimMismatch(f"state has N = {rho.dim}, unitary has N = {u.dim}")


def tomogram(rho: DensityMatrix, u: UnitaryMatrix, tol: Optional[Tolerances] = None) -> TomogramVector:
    """
    Diagonal of u rho u^+.

    Args:
        rho: Density matrix.
        u: Unitary of the same dimension.

    Returns:
        The tomographic probability vector w(u).
    """
    _check_dims(rho, u)
    U = u.matrix
    diagonal = np.einsum("ij,jk,ik->i", U, rho.matrix, U.conj()).real
    return TomogramVector.from_array(diagonal, tol)


def tomogram_spectral(rho: DensityMatrix, u: UnitaryMatrix, tol: Optional[Tolerances] = None) -> TomogramVector:
    """w(u) = |u u0|^2 lambda, with u0 the eigenvector matrix of rho."""
    _check_dims(rho, u)
    spectrum = eig_hermitian(rho.matrix, tol)
    transition = abs_squared(u.matrix @ spectrum.eigenvectors.matrix)
    return TomogramVector.from_array(transition @ spectrum.eigenvalues, tol)


def product_unitary(parts: Sequence[UnitaryMatrix]) -> UnitaryMatrix:
    """u_1 (x) u_2 (x) ... in the given order."""
    if not parts:
        raise EmptyProduct()
    if len(parts) == 1:
        return parts[0]
    return UnitaryMatrix(reduce(kron, (p.matrix for p in parts)))


def _doubled_spin(j: Spin) -> int:
    try:
        two_j = 2 * Fraction(j)
    except (TypeError, ValueError, ZeroDivisionError):
        raise BadSpin(j) from None
    if two_j.denominator != 1 or two_j < 0:
        raise BadSpin(j)
    return int(two_j)


def wigner_small_d(two_j: int, theta: float) -> RealMatrix:
    """
    Wigner d^j(theta) with rows and columns ordered m = +j, j-1, ..., -j.

    Uses the factorial sum; all spin quantities are doubled so that
    half-integer spins stay in integer arithmetic.
    """
    size = two_j + 1
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    d = np.zeros((size, size), dtype=np.float64)

    for a in range(size):
        two_mp = two_j - 2 * a
        jp_plus, jp_minus = (two_j + two_mp) // 2, (two_j - two_mp) // 2
        for b in range(size):
            two_m = two_j - 2 * b
            j_plus, j_minus = (two_j + two_m) // 2, (two_j - two_m) // 2
            # m' - m as an integer
            delta = (two_mp - two_m) // 2
            norm = math.sqrt(
                math.factorial(jp_plus) * math.factorial(jp_minus)
                * math.factorial(j_plus) * math.factorial(j_minus)
            )
            k_min = max(0, -delta)
            k_max = min(j_plus, jp_minus)
            total = 0.0
            for k in range(k_min, k_max + 1):
                denom = (
                    math.factorial(j_plus - k) * math.factorial(k)
                    * math.factorial(jp_minus - k) * math.factorial(k + delta)
                )
                cos_power = two_j - 2 * k - delta
                sin_power = 2 * k + delta
                total += (-1) ** (k + delta) * c ** cos_power * s ** sin_power / denom
            d[a, b] = norm * total
    return d


def su2_irrep(j: Spin, angles: SU2Angles, tol: Optional[Tolerances] = None) -> UnitaryMatrix:
    """
    SU(2) irrep of spin j rotating the quantization axis to (theta, phi).

    D_{m'm} = exp(-i m' phi) d^j_{m'm}(theta); the third Euler angle is 0.
    Index 1 corresponds to m = +j.
    """
    two_j = _doubled_spin(j)
    d = wigner_small_d(two_j, angles.theta)
    two_m = two_j - 2 * np.arange(two_j + 1)
    phases = np.exp(-0.5j * two_m * angles.phi)
    return validate_unitary(phases[:, None] * d, tol)


def spin_product_unitary(
    spins: Sequence[Spin], angles: Sequence[SU2Angles], tol: Optional[Tolerances] = None
) -> UnitaryMatrix:
    """Spin-tomogram unitary u_1(n_1) (x) u_2(n_2) (x) ... of SU(2) irreps."""
    if len(spins) != len(angles):
        raise DimMismatch(f"{len(spins)} spins but {len(angles)} angle pairs")
    return product_unitary([su2_irrep(j, a, tol) for j, a in zip(spins, angles)])


def marginal_tomogram(
    w: TomogramVector, shape: FactorShape, keep, tol: Optional[Tolerances] = None
) -> TomogramVector:
    """
    Marginal over the factors not in ``keep``, packed into the leading entries.

    Returns:
        marginalization_matrix(shape, keep) @ w as a length-N vector.
    """
    if shape.N != w.N:
        raise ShapeMismatch(f"shape {shape.dims} has N = {shape.N}, tomogram has N = {w.N}")
    M = marginalization_matrix(shape, keep)
    return TomogramVector.from_array(M.apply(w.probabilities), tol)


def check_no_signaling(
    rho: DensityMatrix,
    shape: FactorShape,
    fixed: UnitaryMatrix,
    partners: Sequence[UnitaryMatrix],
    side: int = 1,
    tol: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> InequalityReport:
    """
    Check that a marginal tomogram ignores the unitary on the other factor.

    With side=1, ``fixed`` is u_1 (dimension n) and each partner is a u_2
    (dimension m); the marginal w_1(u_1 (x) u_2) is compared across partners
    and against the tomogram of rho_1 under u_1. side=2 mirrors the roles.

    Returns:
        A NOSIG report with lhs = max deviation, rhs = 0.
    """
    tol = config.resolve(tol)
    if shape.n_factors != 2:
        raise ShapeMismatch(f"no-signaling needs a two-factor shape, got {shape.dims}")
    if shape.N != rho.dim:
        raise ShapeMismatch(f"shape {shape.dims} has N = {shape.N}, state has N = {rho.dim}")
    (side,) = normalize_keep(shape, [side])
    other = 2 if side == 1 else 1
    n_kept = shape.dims[side - 1]
    n_other = shape.dims[other - 1]

    if fixed.dim != n_kept:
        raise DimMismatch(f"fixed unitary has dim {fixed.dim}, factor {side} has {n_kept}")
    for partner in partners:
        if partner.dim != n_other:
            raise DimMismatch(f"partner unitary has dim {partner.dim}, factor {other} has {n_other}")

    reduced = reduce_density(rho, shape, [side], tol)
    reference = tomogram(reduced, fixed, tol).probabilities
    M = marginalization_matrix(shape, [side])

    marginals = []
    for partner in partners:
        parts = [fixed, partner] if side == 1 else [partner, fixed]
        w = tomogram(rho, product_unitary(parts), tol)
        marginals.append(M.apply(w.probabilities)[:n_kept])

    from_reduced = max((float(np.max(np.abs(m - reference))) for m in marginals), default=0.0)
    across = max((float(np.max(np.abs(m - marginals[0]))) for m in marginals), default=0.0)
    deviation = max(from_reduced, across)

    report = InequalityReport.build(
        InequalityId.NOSIG,
        q=1.0,
        N=rho.dim,
        shape=shape.dims,
        lhs=deviation,
        rhs=0.0,
        tolerance=tol.nosig,
        seed=seed,
        extra={
            "side": side,
            "partners": len(partners),
            "max_deviation": deviation,
            "across_partners": across,
            "from_reduced": from_reduced,
        },
    )
    if not report.holds:
        logger.warning("no-signaling deviation %.3e on side %d exceeds %.1e", deviation, side, tol.nosig)
    return report
