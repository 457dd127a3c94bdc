import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import X, sample_triples
from spectral_toolkit.algebra import random_element
from spectral_toolkit.linop import adjoint, identity
from spectral_toolkit.normladder import (
    knorm,
    ladder,
    lemma_constants,
    seminorm,
    seminorms,
    verify_product_estimate,
)

TRIPLES = sample_triples()
PAULI = TRIPLES[0]


def test_pauli_ladder_against_exact_fractions():
    # oracle: ||∂^k X|| = 2^k, so T_k = 2^k / k! as exact rationals
    exact = [Fraction(2**k, math.factorial(k)) for k in range(4)]
    assert seminorms(PAULI, X, 3) == pytest.approx([float(f) for f in exact], rel=1e-14)
    assert [float(f) for f in exact] == pytest.approx([1, 2, 2, 4 / 3])
    partial = [sum(exact[: k + 1]) for k in range(4)]
    assert partial == [1, 3, 5, Fraction(19, 3)]
    rep = ladder(PAULI, X, 3, "X")
    assert rep.norms == pytest.approx([float(f) for f in partial], rel=1e-14)
    assert rep.to_record()["element"] == "X"


def test_unit_ladder():
    for t in TRIPLES:
        one = identity(t.hilbert_dim)
        assert seminorm(t, one, 0) == pytest.approx(1.0)
        for k in range(1, 5):
            assert seminorm(t, one, k) <= 1e-12
            assert knorm(t, one, k) == pytest.approx(1.0)


def test_norms_are_exact_running_sums(rng):
    t = TRIPLES[3]
    rep = ladder(t, random_element(t.algebra, rng), 5)
    running = 0.0
    for s, n in zip(rep.seminorms, rep.norms):
        running += s
        assert n == running


def test_lemma_constants_examples():
    c = lemma_constants(PAULI, X, 2)
    assert c.eta == pytest.approx((2.0, 6.0))
    assert c.alpha == pytest.approx((4.0,))
    unit = lemma_constants(PAULI, identity(2), 4)
    assert max(unit.eta) <= 1e-12 and max(unit.alpha) <= 1e-12


def test_lemma_constants_recursion_exact(rng):
    t = TRIPLES[4]
    c = lemma_constants(t, random_element(t.algebra, rng), 5)
    for k in range(len(c.alpha)):
        assert c.eta[k + 1] == c.eta[k] + c.alpha[k]


def test_product_estimate_hand_instance():
    holds, margin = verify_product_estimate(PAULI, X, X, 1)
    assert holds
    # LHS = ||X X||_1 = ||I||_1 = 1, RHS = ||X||_0 ||X||_1 + eta_1 ||X||_0 = 3 + 2
    assert margin == pytest.approx(4.0, abs=1e-13)


def test_product_estimate_with_unit(rng):
    t = TRIPLES[1]
    x = random_element(t.algebra, rng)
    holds, margin = verify_product_estimate(t, identity(3), x, 3)
    assert holds and abs(margin) <= 1e-12


SEEDS = st.integers(0, 2**32 - 1)
INDEX = st.sampled_from(range(len(TRIPLES)))


@given(SEEDS, INDEX, st.integers(0, 5))
def test_submultiplicative(seed, k, n):
    t = TRIPLES[k]
    rng = np.random.default_rng(seed)
    a, b = random_element(t.algebra, rng), random_element(t.algebra, rng)
    assert knorm(t, a @ b, n) <= knorm(t, a, n) * knorm(t, b, n) * (1 + 1e-9)


@given(SEEDS, INDEX, st.integers(0, 5))
def test_star_invariance(seed, k, n):
    t = TRIPLES[k]
    a = random_element(t.algebra, np.random.default_rng(seed))
    assert seminorms(t, adjoint(a), n) == pytest.approx(seminorms(t, a, n), rel=1e-10, abs=1e-12)
    assert abs(knorm(t, adjoint(a), n) - knorm(t, a, n)) <= 1e-10 * knorm(t, a, n)


@given(SEEDS, INDEX, st.integers(0, 4))
def test_recursion_and_monotonicity(seed, k, n):
    t = TRIPLES[k]
    a = random_element(t.algebra, np.random.default_rng(seed))
    step = knorm(t, a, n) + seminorm(t, a, n + 1)
    independent = math.fsum(seminorms(t, a, n + 1))
    assert abs(knorm(t, a, n + 1) - step) <= 1e-12 * max(1.0, independent)
    assert abs(knorm(t, a, n + 1) - independent) <= 1e-12 * max(1.0, independent)
    assert knorm(t, a, n) <= knorm(t, a, n + 1)


@given(SEEDS, INDEX, st.integers(1, 4))
def test_product_estimate_random(seed, k, n):
    t = TRIPLES[k]
    rng = np.random.default_rng(seed)
    a, x = random_element(t.algebra, rng), random_element(t.algebra, rng)
    holds, margin = verify_product_estimate(t, a, x, n)
    assert holds
