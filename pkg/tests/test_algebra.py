import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import X
from spectral_toolkit.algebra import (
    amplify_algebra,
    check_closure,
    close_from_generators,
    contains,
    diagonal_algebra,
    direct_sum_algebra,
    full_matrix_algebra,
    invert_in_algebra,
    random_element,
)
from spectral_toolkit.errors import NotInAlgebra, NotInvertible
from spectral_toolkit.linop import identity, op_norm

E12 = np.array([[0, 1], [0, 0]], dtype=complex)


def brute_force_closure_dim(d, gens):
    """Oracle: repeatedly add all products and adjoints until the rank stops growing."""
    span = [identity(d)] + [np.asarray(g, dtype=complex) for g in gens]
    span += [g.conj().T for g in span]

    def rank(mats):
        return np.linalg.matrix_rank(np.array([m.ravel() for m in mats]), tol=1e-9)

    r = rank(span)
    while True:
        span = span + [a @ b for a, b in itertools.product(span, span)]
        # keep an independent subset to bound growth
        basis = []
        for m in span:
            if rank(basis + [m]) > len(basis):
                basis.append(m)
        span = basis
        if len(span) == r:
            return r
        r = len(span)


def test_closure_examples():
    assert close_from_generators(2, []).dim == 1
    assert close_from_generators(2, [X]).dim == 2
    assert close_from_generators(2, [E12]).dim == 4


@pytest.mark.parametrize("d,gens", [
    (2, [X]),
    (2, [E12]),
    (3, [np.diag([1, 2, 2])]),
    (4, [np.kron(np.eye(2), X)]),
    (4, [np.roll(np.eye(4), 1, axis=0)]),
    (3, []),
])
def test_closure_matches_brute_force(d, gens):
    assert close_from_generators(d, gens).dim == brute_force_closure_dim(d, gens)


def test_scalar_case_d1():
    alg = close_from_generators(1, [[[3.0]]])
    assert alg.dim == 1
    assert contains(alg, [[2.5]])[0]


def test_contains_examples():
    pauli = close_from_generators(2, [X])
    for alg in (pauli, full_matrix_algebra(3), diagonal_algebra(3)):
        assert contains(alg, identity(alg.ambient_dim))[0]
    ok, residual = contains(pauli, E12)
    assert not ok
    # oracle: E12 projects to X/2 in span{I, X}, leaving residual ||E12 - X/2|| = 1/2
    assert residual == pytest.approx(op_norm(E12 - X / 2), rel=1e-12)
    for b1, b2 in itertools.product(pauli.basis, repeat=2):
        assert contains(pauli, b1 @ b2)[0]


def test_invert_in_algebra_examples():
    np.testing.assert_allclose(invert_in_algebra(full_matrix_algebra(2), np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))
    pauli = close_from_generators(2, [X])
    inv = invert_in_algebra(pauli, identity(2) + 0.5 * X)
    np.testing.assert_allclose(inv, (identity(2) - 0.5 * X) / 0.75, atol=1e-14)
    np.testing.assert_allclose(inv @ (identity(2) + 0.5 * X), identity(2), atol=1e-14)
    with pytest.raises(NotInvertible):
        invert_in_algebra(full_matrix_algebra(2), E12)


def test_invert_rejects_non_member():
    with pytest.raises(NotInAlgebra):
        invert_in_algebra(close_from_generators(2, [X]), np.diag([1.0, 2.0]))


def test_amplify_and_direct_sum_dimensions():
    pauli = close_from_generators(2, [X])
    assert amplify_algebra(pauli, 3).dim == 2 * 9
    assert amplify_algebra(pauli, 3).ambient_dim == 6
    s = direct_sum_algebra([pauli, full_matrix_algebra(3)])
    assert s.dim == 2 + 9 and s.ambient_dim == 5 and s.summand_dims == (2, 3)
    for alg in (amplify_algebra(pauli, 2), s):
        assert check_closure(alg)


ALGEBRAS = [
    close_from_generators(2, [X]),
    full_matrix_algebra(3),
    diagonal_algebra(4),
    close_from_generators(4, [np.roll(np.eye(4), 1, axis=0)]),
    direct_sum_algebra([full_matrix_algebra(2), diagonal_algebra(2)]),
]


@given(st.integers(0, 2**32 - 1), st.sampled_from(range(len(ALGEBRAS))))
def test_inverse_stays_in_algebra(seed, k):
    alg = ALGEBRAS[k]
    rng = np.random.default_rng(seed)
    a = random_element(alg, rng) + 2.0 * identity(alg.ambient_dim)
    inv = invert_in_algebra(alg, a)
    assert contains(alg, inv)[0]


@given(st.sampled_from(range(len(ALGEBRAS))))
def test_closure_is_idempotent(k):
    alg = ALGEBRAS[k]
    again = close_from_generators(alg.ambient_dim, list(alg.basis))
    assert again.dim == alg.dim


@given(st.integers(0, 2**32 - 1), st.sampled_from(range(len(ALGEBRAS))))
def test_linear_combinations_have_tiny_residual(seed, k):
    alg = ALGEBRAS[k]
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
    m = alg.element(coeffs)
    _, residual = contains(alg, m)
    assert residual <= 1e-10 * op_norm(m)


def test_random_element_uses_unit_disc_and_normalizes(rng):
    alg = full_matrix_algebra(3)
    a = random_element(alg, rng)
    assert op_norm(a) == pytest.approx(1.0)
    raw = random_element(alg, rng, normalize=False)
    assert np.all(np.abs(alg.coordinates(raw)) <= 1.0 + 1e-12)
