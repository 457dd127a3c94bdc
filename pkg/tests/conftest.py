import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def sample_triples():
    """A fixed family of small triples of different shapes (dims 2 to 8)."""
    from spectral_toolkit.algebra import (
        close_from_generators,
        diagonal_algebra,
        full_matrix_algebra,
    )
    from spectral_toolkit.linop import random_hermitian
    from spectral_toolkit.triple import FiniteSpectralTriple

    rng = np.random.default_rng(99)
    shift5 = np.roll(np.eye(5), 1, axis=0)
    return [
        FiniteSpectralTriple(close_from_generators(2, [X]), np.diag([1.0, -1.0]), "pauli"),
        FiniteSpectralTriple(full_matrix_algebra(3), random_hermitian(3, rng), "m3"),
        FiniteSpectralTriple(diagonal_algebra(4), random_hermitian(4, rng), "diag4"),
        FiniteSpectralTriple(close_from_generators(5, [shift5]), np.diag(np.arange(1.0, 6.0)), "shift5"),
        FiniteSpectralTriple(
            close_from_generators(6, [np.kron(np.eye(3), X), np.diag([1, 1, 2, 2, 3, 3])]),
            random_hermitian(6, rng, 2.0),
            "block6",
        ),
        FiniteSpectralTriple(
            close_from_generators(8, [np.kron(np.eye(4), X), np.kron(np.roll(np.eye(4), 1, axis=0), np.eye(2))]),
            np.diag([1.0, -1, 2, -2, 3, -3, 4, -4]),
            "grid8",
        ),
    ]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
