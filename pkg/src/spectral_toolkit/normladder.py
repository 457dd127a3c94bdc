"""Seminorms ``T_k(a) = ||∂^k a|| / k!`` and the norm ladder ``||a||_n = sum_{k<=n} T_k(a)``."""

import math
from dataclasses import dataclass

from .algebra import MEMBERSHIP_TOL
from .linop import op_norm
from .triple import d_powers

INEQUALITY_SLACK = 1e-9


@dataclass(frozen=True)
class NormLadderReport:
    element_label: str
    depth: int
    seminorms: tuple
    norms: tuple

    def to_record(self):
        return {
            "element": self.element_label,
            "depth": self.depth,
            "seminorms": list(self.seminorms),
            "norms": list(self.norms),
        }


@dataclass(frozen=True)
class LemmaConstants:
    """``eta[k-1]`` is the constant for ``||.||_k``; ``alpha[k-1]`` is ``alpha(a, k)``."""

    eta: tuple
    alpha: tuple


def seminorms(triple, a, n, tol=MEMBERSHIP_TOL):
    """``[T_0(a), ..., T_n(a)]``."""
    return [op_norm(p) / math.factorial(k) for k, p in enumerate(d_powers(triple, a, n, tol))]


def _partial_sums(values):
    out = []
    total = 0.0
    for v in values:
        total += v
        out.append(total)
    return out


def seminorm(triple, a, k, tol=MEMBERSHIP_TOL):
    return seminorms(triple, a, k, tol)[k]


def knorm(triple, a, n, tol=MEMBERSHIP_TOL):
    return _partial_sums(seminorms(triple, a, n, tol))[n]


def ladder(triple, a, n, label="a", tol=MEMBERSHIP_TOL):
    t = seminorms(triple, a, n, tol)
    return NormLadderReport(label, n, tuple(t), tuple(_partial_sums(t)))


def lemma_constants(triple, a, n, tol=MEMBERSHIP_TOL):
    """Constants of the product estimate ``||ax||_n <= ||a||_0 ||x||_n + eta_n ||x||_{n-1}``.

    ``eta_1 = ||[D, a]||`` and ``eta_{k+1} = eta_k + alpha(a, k)`` where
    ``alpha(a, k) = max_{1<=j<=k+1} C(k+1, j) ||∂^j a||``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    norms = [op_norm(p) for p in d_powers(triple, a, n, tol)]
    eta = [norms[1]]
    alpha = []
    for k in range(1, n):
        alpha.append(max(math.comb(k + 1, j) * norms[j] for j in range(1, k + 2)))
        eta.append(eta[-1] + alpha[-1])
    return LemmaConstants(tuple(eta), tuple(alpha))


def verify_product_estimate(triple, a, x, n, slack=INEQUALITY_SLACK, tol=MEMBERSHIP_TOL):
    """Check the product estimate for ``a . x`` at level ``n``.

    Returns ``(holds, margin)`` with ``margin = rhs - lhs``.
    """
    consts = lemma_constants(triple, a, n, tol)
    lhs = knorm(triple, a @ x, n, tol)
    x_norms = _partial_sums(seminorms(triple, x, n, tol))
    rhs = knorm(triple, a, 0, tol) * x_norms[n] + consts.eta[n - 1] * x_norms[n - 1]
    margin = rhs - lhs
    return margin >= -slack * max(rhs, 1.0), margin
