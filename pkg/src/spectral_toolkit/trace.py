"""Traces on finite *-algebras, unimodular kernels, and logarithmic-mean
(Dixmier-type) estimates for singular-value sequences.

A :class:`TraceFunctional` is normalized, Hermitian, positive and tracial.
Continuity in the ladder topology is automatic for a linear functional on a
finite-dimensional space, so only the algebraic axioms are checked.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    MEMBERSHIP_TOL,
    StarAlgebra,
    amplify_algebra,
    direct_sum_algebra,
    random_element,
    require_member,
    split_blocks,
)
from .errors import BadWeights, LengthMismatch, NotSorted
from .linop import adjoint, as_operator, identity
from .omega import LIE_TOL, in_lie_algebra

TRACE_TOL = 1e-10
CONVERGENCE_TOL = 5e-3


@dataclass(frozen=True, eq=False)
class TraceFunctional:
    """Linear functional ``x -> sum_k coefficients[k] <b_k, x>`` on ``algebra``.

    Since the basis is orthonormal, ``coefficients[k]`` is the value on the
    ``k``-th basis element.
    """

    algebra: StarAlgebra
    coefficients: np.ndarray = field(repr=False)

    def __call__(self, x):
        return complex(self.coefficients @ self.algebra.coordinates(x))

    @property
    def density(self):
        """``W`` with ``T(x) = tr(W x) / d`` for every ``x`` in the algebra."""
        return np.einsum("k,kab->ba", self.coefficients, np.conj(self.algebra.basis))


def _from_definition(algebra, fn):
    coeffs = np.array([fn(b) for b in algebra.basis], dtype=np.complex128)
    return TraceFunctional(algebra, coeffs)


def normalized_matrix_trace(algebra):
    """``x -> tr(x) / d`` restricted to ``algebra``."""
    d = algebra.ambient_dim
    return _from_definition(algebra, lambda b: np.trace(b) / d)


def amplified_trace(trace, n):
    """``T_[n](a) = (1/n) sum_i T(a_ii)`` on ``M_n(A)`` (block-major layout)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return trace
    d = trace.algebra.ambient_dim
    big = amplify_algebra(trace.algebra, n)
    return _from_definition(big, lambda b: sum(trace(blk) for blk in split_blocks(b, [d] * n)) / n)


def convex_combination(traces, weights):
    """``T^[u](a_1 + ... + a_k) = sum_i u_i T_i(a_i)`` on the direct-sum algebra."""
    traces = list(traces)
    u = np.asarray(weights, dtype=float)
    if u.shape != (len(traces),) or not traces:
        raise BadWeights(f"need one weight per trace ({len(traces)}), got {u.shape}")
    if np.any(u < 0) or abs(u.sum() - 1.0) > 1e-12:
        raise BadWeights(f"weights must be nonnegative and sum to 1, got {u.tolist()}")
    if len(traces) == 1:
        return traces[0]
    algebra = direct_sum_algebra([t.algebra for t in traces])
    dims = algebra.summand_dims

    def value(b):
        return sum(w * t(blk) for w, t, blk in zip(u, traces, split_blocks(b, dims)))

    return _from_definition(algebra, value)


def component_trace(traces, i):
    """``T^(i)(a_1 + ... + a_k) = T_i(a_i)``."""
    u = np.zeros(len(traces))
    u[i] = 1.0
    return convex_combination(traces, u)


def check_trace_axioms(trace, rng=None, samples=20):
    """Residuals of the four algebraic trace axioms.

    * ``tracial``: ``max |T(b_i b_j) - T(b_j b_i)|`` over all basis pairs
    * ``hermitian``: ``max |T(b*) - conj T(b)|`` over the basis
    * ``positive``: largest violation of ``T(a*a) >= 0`` (negative real part
      or imaginary part) over random elements
    * ``normalized``: ``|T(I) - 1|``
    """
    rng = np.random.default_rng(0) if rng is None else rng
    alg = trace.algebra
    d = alg.ambient_dim
    basis = alg.basis
    w = trace.density
    wb = np.einsum("ab,ibc->iac", w, basis)
    pair = np.einsum("iac,jca->ij", wb, basis) / d
    tracial = float(np.max(np.abs(pair - pair.T)))
    herm = max(abs(trace(adjoint(b)) - np.conj(c)) for b, c in zip(basis, trace.coefficients))
    positive = 0.0
    for _ in range(samples):
        a = random_element(alg, rng)
        v = trace(adjoint(a) @ a)
        positive = max(positive, -v.real, abs(v.imag))
    return {
        "tracial": tracial,
        "hermitian": float(herm),
        "positive": float(positive),
        "normalized": abs(trace(identity(d)) - 1.0),
    }


def unimodular_kernel_project(trace, a, tol=MEMBERSHIP_TOL):
    """Split ``a = (a - T(a) I) + T(a) I``; returns ``(a - T(a) I, T(a))``."""
    a = require_member(trace.algebra, a, tol)
    t = trace(a)
    return a - t * identity(a.shape[0]), t


def in_unimodular_omega_algebra(trace, form, x, tol=TRACE_TOL, lie_tol=LIE_TOL):
    """Membership in ``{x : x*Ω + Ωx = 0, T(x) = 0}``.

    Returns ``(member, lie_residual, trace_residual)``.
    """
    x = as_operator(x)
    in_lie, lie_res = in_lie_algebra(form, x, lie_tol)
    t_res = abs(trace(x))
    t_ok = t_res <= tol * (1.0 + np.linalg.norm(x, 2))
    return in_lie and t_ok, lie_res, t_res


def separation_witness(t1, t2, tol=1e-6):
    """An element of ``ker t1`` on which ``t2`` is nonzero, or ``None``.

    Picks the basis element ``b`` where the traces differ most and returns
    ``(a, t1(a), t2(a))`` with ``a = b - t1(b) I``.
    """
    diffs = np.abs(t1.coefficients - t2.coefficients)
    k = int(np.argmax(diffs))
    if diffs[k] <= tol:
        return None
    b = t1.algebra.basis[k]
    a = b - t1.coefficients[k] * identity(b.shape[0])
    return a, t1(a), t2(a)


@dataclass(frozen=True)
class DixmierEstimate:
    d: float
    partial_means: tuple
    extrapolated: float
    converged: bool

    def to_record(self):
        return {
            "d": self.d,
            "partial_means": [[n, m] for n, m in self.partial_means],
            "extrapolated": self.extrapolated,
            "converged": self.converged,
        }


def _extrapolate(ns, means, fit_points):
    ns = np.asarray(ns[-fit_points:], dtype=float)
    means = np.asarray(means[-fit_points:], dtype=float)
    if len(ns) == 1:
        return float(means[0])
    design = np.column_stack([np.ones_like(ns), 1.0 / np.log(ns)])
    coef, *_ = np.linalg.lstsq(design, means, rcond=None)
    return float(coef[0])


def _converged(means, tol):
    if len(means) < 2:
        return False
    last, prev = means[-1], means[-2]
    scale = max(abs(last), abs(prev))
    return scale == 0.0 or abs(last - prev) < tol * scale


def dixmier_mean(singular_values, checkpoints, d=1.0, convergence_tol=CONVERGENCE_TOL, fit_points=3):
    """Logarithmic means ``(1/log N) sum_{i<N} mu_i`` at each checkpoint ``N``.

    The limit is estimated by least-squares fitting ``mean(N) = c + b/log N``
    over the last ``fit_points`` checkpoints and reporting ``c``.
    """
    mu = np.asarray(singular_values, dtype=float)
    if mu.ndim != 1:
        raise ValueError("singular values must be a flat sequence")
    if np.any(mu < 0):
        raise ValueError("singular values must be nonnegative")
    if np.any(np.diff(mu) > 0):
        i = int(np.argmax(np.diff(mu) > 0))
        raise NotSorted(f"sequence increases at index {i + 1}")
    ns = sorted(int(n) for n in checkpoints)
    if not ns or ns[0] < 2 or ns[-1] > len(mu) or len(set(ns)) != len(ns):
        raise ValueError(f"checkpoints must be distinct integers in [2, {len(mu)}]")
    prefix = np.cumsum(mu)
    means = [float(prefix[n - 1] / np.log(n)) for n in ns]
    return DixmierEstimate(
        float(d),
        tuple(zip(ns, means)),
        _extrapolate(ns, means, fit_points),
        _converged(means, convergence_tol),
    )


def harmonic_sequence(n):
    return 1.0 / np.arange(1, n + 1, dtype=float)


def geometric_sequence(n, ratio=0.5):
    return ratio ** np.arange(n, dtype=float)


def circle_dirac_eigenvalues(n):
    """Eigenvalues ``1, -1, 2, -2, ..., n, -n`` of a truncated circle Dirac operator."""
    k = np.arange(1, n + 1, dtype=float)
    return np.column_stack([k, -k]).ravel()


def hypertrace_estimate(dirac_eigenvalues, l_diag, d, checkpoints, convergence_tol=CONVERGENCE_TOL):
    """Logarithmic-mean estimate of ``Tr_ω(L |D|^{-d})`` for simultaneously diagonal ``L`` and ``D``.

    The positive and negative parts of the diagonal of ``L |D|^{-d}`` are
    sorted separately and their estimates subtracted, so the estimate is odd
    and positively homogeneous in ``L``.  Additivity holds only in the limit.
    """
    lam = np.asarray(dirac_eigenvalues, dtype=float)
    l_vals = np.asarray(l_diag, dtype=float)
    if lam.shape != l_vals.shape:
        raise LengthMismatch(f"{lam.shape[0]} Dirac eigenvalues against {l_vals.shape[0]} entries of L")
    if np.any(lam == 0):
        raise ValueError("|D|^{-d} needs nonzero Dirac eigenvalues")
    prod = l_vals * np.abs(lam) ** (-float(d))
    pos = np.sort(np.clip(prod, 0.0, None))[::-1]
    neg = np.sort(np.clip(-prod, 0.0, None))[::-1]
    ep = dixmier_mean(pos, checkpoints, d, convergence_tol)
    en = dixmier_mean(neg, checkpoints, d, convergence_tol)
    means = tuple((n, mp - mn) for (n, mp), (_, mn) in zip(ep.partial_means, en.partial_means))
    return DixmierEstimate(
        float(d),
        means,
        ep.extrapolated - en.extrapolated,
        _converged([m for _, m in means], convergence_tol),
    )


def normalized_hypertrace(dirac_eigenvalues, l_diag, d, checkpoints):
    """``Ξ(L) / Ξ(I)`` from the extrapolated estimates."""
    num = hypertrace_estimate(dirac_eigenvalues, l_diag, d, checkpoints)
    den = hypertrace_estimate(dirac_eigenvalues, np.ones(len(l_diag)), d, checkpoints)
    return num.extrapolated / den.extrapolated
