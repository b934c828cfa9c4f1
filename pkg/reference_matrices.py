"""
Printed Reference Matrices

Stochastic matrices as printed for the j=5/2 (shape 2,3) and j=7/2
(shape 2,2,2) qudits, spin-projection labels, and the printed element
formulas for the reduced 2x2 matrix of the j=7/2 example.

The printed M12 for j=7/2 sums over both k and l (it keeps only the first
factor), so it is not the (i, k) marginal used by strong subadditivity.
It is kept here as a quarantined fixture and never used in computations.
"""

from fractions import Fraction
from typing import List

import numpy as np

from errors import ShapeMismatch
from linalg import DensityMatrix

M1_J52 = np.array(
    [
        [1, 1, 1, 0, 0, 0],
        [0, 0, 0, 1, 1, 1],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
    ],
    dtype=np.float64,
)

M2_J52 = np.array(
    [
        [1, 0, 0, 1, 0, 0],
        [0, 1, 0, 0, 1, 0],
        [0, 0, 1, 0, 0, 1],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
    ],
    dtype=np.float64,
)

# quarantined: see module docstring
M12_J72_PRINTED = np.array(
    [
        [1, 1, 1, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 1, 1],
    ]
    + [[0] * 8] * 6,
    dtype=np.float64,
)

M23_J72 = np.block(
    [
        [np.eye(4), np.eye(4)],
        [np.zeros((4, 4)), np.zeros((4, 4))],
    ]
)

M2_J72 = np.array(
    [
        [1, 1, 0, 0, 1, 1, 0, 0],
        [0, 0, 1, 1, 0, 0, 1, 1],
    ]
    + [[0] * 8] * 6,
    dtype=np.float64,
)

for _m in (M1_J52, M2_J52, M12_J72_PRINTED, M23_J72, M2_J72):
    _m.setflags(write=False)


def spin_projection(index: int, N: int) -> Fraction:
    """Spin projection m for a 1-based index, with index 1 <-> m = +j."""
    j = Fraction(N - 1, 2)
    return j - (index - 1)


def spin_labels(N: int) -> List[str]:
    """Labels '+5/2', '+3/2', ... for indices 1..N."""
    labels = []
    for index in range(1, N + 1):
        m = spin_projection(index, N)
        sign = "+" if m > 0 else ("-" if m < 0 else "")
        labels.append(f"{sign}{abs(m)}")
    return labels


def printed_rho2_j72(rho: DensityMatrix) -> np.ndarray:
    """
    The 2x2 matrix built from the printed j=7/2 element formulas.

    (rho2)_11 = rho_{7/2,7/2} + rho_{5/2,5/2} + rho_{-1/2,-1/2} + rho_{-3/2,-3/2}
    (rho2)_12 = rho_{-7/2,-3/2} + rho_{-5/2,-1/2} + rho_{1/2,5/2} + rho_{3/2,7/2}
    with (rho2)_22 = 1 - (rho2)_11 and (rho2)_21 the conjugate of (rho2)_12.
    """
    if rho.dim != 8:
        raise ShapeMismatch(f"the j=7/2 formulas need N = 8, got {rho.dim}")
    labels = [spin_projection(i, 8) for i in range(1, 9)]
    pos = {m: i for i, m in enumerate(labels)}

    def element(a: str, b: str) -> complex:
        return complex(rho.matrix[pos[Fraction(a)], pos[Fraction(b)]])

    r11 = sum(element(m, m) for m in ("7/2", "5/2", "-1/2", "-3/2"))
    r12 = (
        element("-7/2", "-3/2")
        + element("-5/2", "-1/2")
        + element("1/2", "5/2")
        + element("3/2", "7/2")
    )
    return np.array([[r11, r12], [np.conj(r12), 1.0 - r11]], dtype=np.complex128)
