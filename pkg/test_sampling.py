import numpy as np
import pytest

from errors import BadRank, ValidationError
from indexing import FactorShape
from sampling import (
    SeededGenerator,
    as_generator,
    haar_unitary,
    random_angles,
    random_density,
    random_product_unitary,
    random_pure,
)


def test_same_seed_same_stream():
    """Equal seeds draw equal numbers."""
    a = haar_unitary(4, SeededGenerator(42))
    b = haar_unitary(4, SeededGenerator(42))
    np.testing.assert_array_equal(a.matrix, b.matrix)
    c = random_density(5, SeededGenerator(42).substream(3))
    d = random_density(5, SeededGenerator(42).substream(3))
    np.testing.assert_array_equal(c.matrix, d.matrix)


def test_substreams_differ():
    """Different substreams draw different numbers."""
    gen = SeededGenerator(42)
    a = haar_unitary(4, gen.substream(0))
    b = haar_unitary(4, gen.substream(1))
    assert not np.allclose(a.matrix, b.matrix)
    assert gen.substream(2).spawn_key == (2,)
    assert gen.substream(2).substream(5).spawn_key == (2, 5)


@pytest.mark.parametrize("algorithm", ["PCG64", "PCG64DXSM", "Philox", "SFC64"])
def test_algorithms_are_reproducible(algorithm):
    """Every bit generator is reproducible."""
    first = SeededGenerator(7, algorithm).generator().random(5)
    second = SeededGenerator(7, algorithm).generator().random(5)
    np.testing.assert_array_equal(first, second)


def test_seeded_generator_validation():
    """Unknown algorithms and seeds outside 0..2^64-1 are rejected."""
    with pytest.raises(ValidationError):
        SeededGenerator(1, "MT19937X")
    with pytest.raises(ValidationError):
        SeededGenerator(-1)
    with pytest.raises(ValidationError):
        SeededGenerator(2 ** 64)


def test_as_generator_passes_generators_through(rng):
    """Plain numpy generators are used as given."""
    assert as_generator(rng) is rng
    assert isinstance(as_generator(SeededGenerator(1)), np.random.Generator)


def test_haar_unitary_is_unitary(rng):
    """Haar samples are unitary."""
    for N in (1, 2, 3, 8, 16):
        U = haar_unitary(N, rng).matrix
        np.testing.assert_allclose(U @ U.conj().T, np.eye(N), atol=1e-12)
    with pytest.raises(ValidationError):
        haar_unitary(0, rng)


def test_haar_second_moment():
    """E|u_11|^2 = 1/4 for 4x4 Haar samples."""
    rng = SeededGenerator(2024).generator()
    samples = np.array([abs(haar_unitary(4, rng).matrix[0, 0]) ** 2 for _ in range(10_000)])
    assert samples.mean() == pytest.approx(0.25, abs=0.01)


def test_random_product_unitary_dims(rng):
    """Product samples have one factor per shape entry."""
    parts = random_product_unitary(FactorShape((2, 3, 2)), rng)
    assert [p.dim for p in parts] == [2, 3, 2]


def test_random_density_is_a_state(rng):
    """Sampled matrices are valid states."""
    rho = random_density(6, rng).matrix
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-15)
    assert np.linalg.eigvalsh(rho)[0] > 0


@pytest.mark.parametrize("rank", [1, 2, 4, 6])
def test_random_density_rank(rank, rng):
    """Sampled states have the requested rank."""
    rho = random_density(6, rng, rank=rank)
    assert np.linalg.matrix_rank(rho.matrix, tol=1e-10) == rank


def test_random_density_bad_rank(rng):
    """Rank outside 1..N is rejected."""
    with pytest.raises(BadRank):
        random_density(4, rng, rank=0)
    with pytest.raises(BadRank):
        random_density(4, rng, rank=5)


def test_random_pure_is_a_projector(rng):
    """Pure samples square to themselves."""
    rho = random_pure(7, rng).matrix
    np.testing.assert_allclose(rho @ rho, rho, atol=1e-12)
    assert np.trace(rho).real == pytest.approx(1.0)


def test_random_angles_on_the_sphere(rng):
    """Angles stay in range and cos(theta) is centred on zero."""
    angles = random_angles(rng, 500)
    assert angles.shape == (500, 2)
    assert np.all((angles[:, 0] >= 0) & (angles[:, 0] <= np.pi))
    assert np.all((angles[:, 1] >= 0) & (angles[:, 1] < 2 * np.pi))
    # cos(theta) is uniform on [-1, 1]
    assert np.cos(angles[:, 0]).mean() == pytest.approx(0.0, abs=0.15)
