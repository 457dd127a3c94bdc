"""Finite spectral triples ``(A, H, D)``.

At finite dimension ``D`` is just a Hermitian matrix: compact resolvent,
bounded commutators and regularity (``A`` inside every domain of
``delta^k``) hold automatically, and so does goodness, since the algebra
is already complete for every norm of the ladder.  These conditions are
therefore documented here rather than tested.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import (
    MEMBERSHIP_TOL,
    StarAlgebra,
    amplify_algebra,
    block_diag,
    direct_sum_algebra,
    require_member,
)
from .linop import abs_operator, as_operator, commutator, hermitian_part, identity

MAX_LADDER_DEPTH = 6


@dataclass(frozen=True, eq=False)
class FiniteSpectralTriple:
    algebra: StarAlgebra
    dirac: np.ndarray = field(repr=False)
    name: str = "triple"
    max_ladder_depth: int = MAX_LADDER_DEPTH

    def __post_init__(self):
        d = self.algebra.ambient_dim
        dirac = hermitian_part(as_operator(self.dirac, d))
        dirac.setflags(write=False)
        object.__setattr__(self, "dirac", dirac)

    @property
    def hilbert_dim(self):
        return self.algebra.ambient_dim

    @cached_property
    def abs_dirac(self):
        return abs_operator(self.dirac)

    def __repr__(self):
        return f"FiniteSpectralTriple(name={self.name!r}, hilbert_dim={self.hilbert_dim}, algebra_dim={self.algebra.dim})"


def _check_depth(triple, k):
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    if k > triple.max_ladder_depth:
        raise ValueError(f"order {k} exceeds max_ladder_depth={triple.max_ladder_depth}")


def _iterated_commutators(op, a, k):
    out = [a]
    for _ in range(k):
        out.append(commutator(op, out[-1]))
    return out


def d_powers(triple, a, k, tol=MEMBERSHIP_TOL):
    """``[a, ∂a, ..., ∂^k a]`` with ``∂ = [D, .]``."""
    _check_depth(triple, k)
    a = require_member(triple.algebra, a, tol)
    return _iterated_commutators(triple.dirac, a, k)


def d_derivation(triple, a, k=1, tol=MEMBERSHIP_TOL):
    """k-fold commutator of ``a`` with the Dirac operator."""
    return d_powers(triple, a, k, tol)[-1]


def delta_derivation(triple, a, k=1, tol=MEMBERSHIP_TOL):
    """k-fold commutator of ``a`` with ``|D|``."""
    _check_depth(triple, k)
    a = require_member(triple.algebra, a, tol)
    return _iterated_commutators(triple.abs_dirac, a, k)[-1]


def amplify(triple, n):
    """The matrix amplification ``K_n = (M_n(A), H ⊗ C^n, D ⊗ I_n)``.

    Matrices over ``A`` are laid out block-major (entry ``(i, j)`` of an
    element of ``M_n(A)`` is the ``(i, j)`` block), so ``D ⊗ I_n`` is
    realised as ``kron(I_n, D)``.
    """
    n = int(n)
    if n == 1:
        return triple
    return FiniteSpectralTriple(
        amplify_algebra(triple.algebra, n),
        np.kron(identity(n), triple.dirac),
        name=f"{triple.name}[M{n}]",
        max_ladder_depth=triple.max_ladder_depth,
    )


def diagonal_embedding(a, n):
    """``a ⊗ I_n`` in the block-major layout used by :func:`amplify`."""
    return np.kron(identity(int(n)), as_operator(a))


def direct_sum(triples):
    triples = list(triples)
    if not triples:
        raise ValueError("direct sum of an empty family")
    if len(triples) == 1:
        return triples[0]
    return FiniteSpectralTriple(
        direct_sum_algebra([t.algebra for t in triples]),
        block_diag([t.dirac for t in triples]),
        name="+".join(t.name for t in triples),
        max_ladder_depth=min(t.max_ladder_depth for t in triples),
    )
