import pytest

from sampling import SeededGenerator


@pytest.fixture
def rng():
    return SeededGenerator(20240601).generator()
