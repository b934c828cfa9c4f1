import math

import numpy as np
import pytest

from errors import BadSpin, DimMismatch, EmptyProduct, NegativeProbability, NotNormalized, ShapeMismatch
from indexing import FactorShape, marginalization_matrix, reduce_density
from linalg import UnitaryMatrix, eig_hermitian, validate_density
from reports import InequalityId
from sampling import SeededGenerator, haar_unitary, random_density, random_product_unitary, random_pure
from testing_utils import (
    basis_state,
    diagonal_state,
    identity,
    maximally_entangled,
    maximally_mixed,
    product_state,
)
from tomography import (
    SU2Angles,
    TomogramVector,
    check_no_signaling,
    marginal_tomogram,
    product_unitary,
    spin_product_unitary,
    su2_irrep,
    tomogram,
    tomogram_spectral,
)


def test_tomogram_of_diagonal_state_under_identity():
    """The identity tomogram is the diagonal."""
    p = [0.1, 0.2, 0.3, 0.4]
    np.testing.assert_allclose(tomogram(diagonal_state(*p), identity(4)).probabilities, p, atol=1e-15)


def test_tomogram_of_maximally_mixed_is_uniform(rng):
    """I/N has a uniform tomogram for every unitary."""
    w = tomogram(maximally_mixed(5), haar_unitary(5, rng))
    np.testing.assert_allclose(w.probabilities, np.full(5, 0.2), atol=1e-12)


def test_tomogram_of_pure_state_matches_amplitudes(rng):
    """Pure-state tomograms are |u psi|^2."""
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi /= np.linalg.norm(psi)
    rho = validate_density(np.outer(psi, psi.conj()))
    u = haar_unitary(4, rng)
    expected = np.abs(u.matrix @ psi) ** 2
    np.testing.assert_allclose(tomogram(rho, u).probabilities, expected, atol=1e-12)
    np.testing.assert_allclose(tomogram_spectral(rho, u).probabilities, expected, atol=1e-10)


def test_tomogram_dimension_mismatch(rng):
    """State and unitary must have the same N."""
    with pytest.raises(DimMismatch):
        tomogram(maximally_mixed(3), haar_unitary(4, rng))


def test_tomogram_vector_clamps_round_off():
    """Tiny negatives are clamped and larger ones rejected."""
    w = TomogramVector.from_array([0.5, 0.5 + 5e-13, -5e-13])
    assert w.probabilities[2] == 0.0
    with pytest.raises(NegativeProbability):
        TomogramVector.from_array([0.6, 0.5, -0.1])
    with pytest.raises(NotNormalized):
        TomogramVector.from_array([0.5, 0.6])


def test_spectral_path_with_eigenbasis_dagger_gives_spectrum(rng):
    """u = u0^+ turns the tomogram into the spectrum."""
    rho = random_density(5, rng)
    spectrum = eig_hermitian(rho.matrix)
    u = UnitaryMatrix(spectrum.eigenvectors.matrix.conj().T.copy())
    np.testing.assert_allclose(tomogram_spectral(rho, u).probabilities, spectrum.eigenvalues, atol=1e-12)


def test_spectral_path_on_degenerate_state(rng):
    """Degenerate spectra still match the direct path."""
    for N in (2, 4, 7):
        u = haar_unitary(N, rng)
        np.testing.assert_allclose(tomogram_spectral(maximally_mixed(N), u).probabilities, 1.0 / N, atol=1e-12)


def test_tomogram_paths_agree():
    """Direct and spectral tomograms agree."""
    gen = SeededGenerator(8)
    for trial in range(1000):
        rng = gen.substream(trial).generator()
        N = 2 + trial % 11
        kind = trial % 4
        if kind == 0:
            rho = random_pure(N, rng)
        elif kind == 1:
            # equal weights on a random 2-dimensional subspace
            V = haar_unitary(N, rng).matrix[:, :2]
            rho = validate_density(V @ V.conj().T / 2)
        else:
            rho = random_density(N, rng, rank=1 + trial % N)
        u = haar_unitary(N, rng)
        direct = tomogram(rho, u).probabilities
        spectral = tomogram_spectral(rho, u).probabilities
        assert np.max(np.abs(direct - spectral)) <= 1e-10


def test_product_unitary():
    """Product unitaries are Kronecker products."""
    assert np.array_equal(product_unitary([identity(2), identity(3)]).matrix, np.eye(6))
    with pytest.raises(EmptyProduct):
        product_unitary([])


def test_product_unitary_is_unitary(rng):
    """Products of unitaries are unitary."""
    parts = random_product_unitary(FactorShape((2, 2, 2)), rng)
    u = product_unitary(parts)
    assert u.dim == 8
    np.testing.assert_allclose(u.matrix @ u.dagger, np.eye(8), atol=1e-12)


@pytest.mark.parametrize("j", [0, "1/2", 1, 1.5, "5/2", 3, "7/2"])
def test_su2_identity_at_zero_angles(j):
    """Zero angles give the identity."""
    D = su2_irrep(j, SU2Angles(0.0, 0.0))
    np.testing.assert_allclose(D.matrix, np.eye(D.dim), atol=1e-12)


def test_su2_spin_half_closed_form():
    """Spin 1/2 matches the closed form."""
    theta = 0.7
    D = su2_irrep("1/2", SU2Angles(theta))
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    np.testing.assert_allclose(D.matrix, [[c, -s], [s, c]], atol=1e-15)
    np.testing.assert_allclose(su2_irrep(0.5, SU2Angles(math.pi)).matrix, [[0, -1], [1, 0]], atol=1e-15)


def test_su2_spin_one_closed_form():
    """Spin 1 matches the closed form."""
    theta = 1.1
    D = su2_irrep(1, SU2Angles(theta)).matrix.real
    c = math.cos(theta)
    expected = [
        [(1 + c) / 2, -math.sin(theta) / math.sqrt(2), (1 - c) / 2],
        [math.sin(theta) / math.sqrt(2), c, -math.sin(theta) / math.sqrt(2)],
        [(1 - c) / 2, math.sin(theta) / math.sqrt(2), (1 + c) / 2],
    ]
    np.testing.assert_allclose(D, expected, atol=1e-14)


def test_su2_unitary_for_random_angles(rng):
    """Irreps are unitary at any spin."""
    for theta, phi in rng.uniform(-10, 10, size=(20, 2)):
        D = su2_irrep("5/2", SU2Angles(theta, phi))
        assert D.dim == 6
        np.testing.assert_allclose(D.matrix @ D.dagger, np.eye(6), atol=1e-10)


def test_su2_group_composition_spin_half():
    """Rotations by a and b about one axis compose to a + b."""
    a, b = 0.4, 1.3
    left = su2_irrep("1/2", SU2Angles(a)).matrix @ su2_irrep("1/2", SU2Angles(b)).matrix
    np.testing.assert_allclose(left, su2_irrep("1/2", SU2Angles(a + b)).matrix, atol=1e-10)


@pytest.mark.parametrize("j", [-1, "1/3", 0.25, "abc"])
def test_su2_bad_spin(j):
    """Spins that are not half-integers are rejected."""
    with pytest.raises(BadSpin):
        su2_irrep(j, SU2Angles(0.1))


def test_spin_product_unitary_dimension():
    """Spin products have dimension prod(2j + 1)."""
    u = spin_product_unitary(["1/2", 1], [SU2Angles(0.3, 0.2), SU2Angles(1.0, 2.0)])
    assert u.dim == 6


def test_marginal_tomogram_examples():
    """Marginals of hand-built tomograms."""
    shape = FactorShape((2, 3))
    uniform = TomogramVector.from_array(np.full(6, 1 / 6))
    np.testing.assert_allclose(marginal_tomogram(uniform, shape, [1]).probabilities, [0.5, 0.5, 0, 0, 0, 0], atol=1e-15)

    e1 = TomogramVector.from_array(np.eye(6)[0])
    for keep in ([1], [2], [1, 2]):
        np.testing.assert_array_equal(marginal_tomogram(e1, shape, keep).probabilities, np.eye(6)[0])


def test_marginal_tomogram_middle_factor():
    """Keeping the middle of three factors."""
    # s=1 <-> (1,1,1) and s=6 <-> (2,1,2) both have k = 1
    w = TomogramVector.from_array([0.5, 0, 0, 0, 0, 0.5, 0, 0])
    np.testing.assert_allclose(
        marginal_tomogram(w, FactorShape((2, 2, 2)), [2]).probabilities, [1, 0, 0, 0, 0, 0, 0, 0], atol=1e-15
    )


def test_marginal_tomogram_shape_mismatch():
    """Tomogram length must equal the shape's N."""
    with pytest.raises(ShapeMismatch):
        marginal_tomogram(TomogramVector.from_array(np.full(6, 1 / 6)), FactorShape((2, 2, 2)), [1])


def test_marginalization_preserves_normalization(rng):
    """Marginals still sum to one."""
    shape = FactorShape((2, 3, 2))
    w = tomogram(random_density(12, rng), haar_unitary(12, rng))
    for keep in ([1], [2], [3], [1, 2], [2, 3], [1, 3]):
        assert marginal_tomogram(w, shape, keep).probabilities.sum() == pytest.approx(1.0, abs=1e-12)


def test_marginal_of_product_unitary_tomogram_is_reduced_tomogram(rng):
    """The marginal equals the tomogram of the reduced state."""
    shape = FactorShape((2, 3))
    rho = random_density(6, rng)
    u1, u2 = random_product_unitary(shape, rng)
    w = tomogram(rho, product_unitary([u1, u2]))
    w1 = marginalization_matrix(shape, [1]).apply(w.probabilities)[:2]
    expected = tomogram(reduce_density(rho, shape, [1]), u1).probabilities
    np.testing.assert_allclose(w1, expected, atol=1e-12)


def test_no_signaling_product_state(rng):
    """Product states do not signal."""
    shape = FactorShape((2, 3))
    rho = product_state(random_density(2, rng), random_density(3, rng))
    u1 = haar_unitary(2, rng)
    partners = [haar_unitary(3, rng) for _ in range(5)]
    report = check_no_signaling(rho, shape, u1, partners)
    assert report.inequality is InequalityId.NOSIG
    assert report.holds
    assert report.extra["max_deviation"] <= 1e-12


def test_no_signaling_maximally_entangled(rng):
    """Entangled states do not signal either."""
    shape = FactorShape((2, 2))
    rho = maximally_entangled(2)
    u1 = haar_unitary(2, rng)
    report = check_no_signaling(rho, shape, u1, [haar_unitary(2, rng) for _ in range(10)])
    assert report.extra["max_deviation"] <= 1e-12


def test_no_signaling_random_state_both_sides(rng):
    """Both marginals are invariant for random states."""
    shape = FactorShape((2, 3))
    rho = random_density(6, rng)
    side1 = check_no_signaling(rho, shape, haar_unitary(2, rng), [haar_unitary(3, rng) for _ in range(20)], side=1)
    side2 = check_no_signaling(rho, shape, haar_unitary(3, rng), [haar_unitary(2, rng) for _ in range(20)], side=2)
    assert side1.holds and side2.holds
    assert side2.extra["side"] == 2


def test_no_signaling_with_no_partners_passes(rng):
    """No partners means zero deviation."""
    report = check_no_signaling(random_density(6, rng), FactorShape((2, 3)), haar_unitary(2, rng), [])
    assert report.holds
    assert report.extra["partners"] == 0


def test_no_signaling_dimension_checks(rng):
    """Local unitaries must match their factor and the shape needs two factors."""
    rho = random_density(6, rng)
    with pytest.raises(DimMismatch):
        check_no_signaling(rho, FactorShape((2, 3)), haar_unitary(3, rng), [haar_unitary(3, rng)])
    with pytest.raises(DimMismatch):
        check_no_signaling(rho, FactorShape((2, 3)), haar_unitary(2, rng), [haar_unitary(2, rng)])
    with pytest.raises(ShapeMismatch):
        check_no_signaling(rho, FactorShape((6,)), haar_unitary(6, rng), [])


@pytest.mark.parametrize("dims", [(2, 3), (2, 4)])
def test_no_signaling_over_seeded_ensemble(dims):
    """No-signaling over seeded random states."""
    shape = FactorShape(dims)
    gen = SeededGenerator(17)
    for trial in range(500):
        rng = gen.substream(trial).generator()
        rho = random_density(shape.N, rng)
        n, m = dims
        side1 = check_no_signaling(rho, shape, haar_unitary(n, rng), [haar_unitary(m, rng) for _ in range(20)], 1)
        side2 = check_no_signaling(rho, shape, haar_unitary(m, rng), [haar_unitary(n, rng) for _ in range(20)], 2)
        assert side1.extra["max_deviation"] <= 1e-10
        assert side2.extra["max_deviation"] <= 1e-10


def test_spin_tomogram_no_signaling(rng):
    """Spin irreps do not signal."""
    shape = FactorShape((2, 3))
    rho = basis_state(6, 2)
    u1 = su2_irrep("1/2", SU2Angles(0.3, 1.2))
    partners = [su2_irrep(1, SU2Angles(t, p)) for t, p in rng.uniform(0, 3, size=(6, 2))]
    assert check_no_signaling(rho, shape, u1, partners).holds
