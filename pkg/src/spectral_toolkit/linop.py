"""Dense complex matrices viewed as operators on a finite-dimensional Hilbert space.

Operators are plain square ``complex128`` numpy arrays; the helpers here
validate shape and supply the handful of operations the rest of the
package builds on.
"""

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotInvertible

HERMITIAN_TOL = 1e-10
SINGULAR_TOL = 1e-12


def as_operator(a, dim=None):
    """Return ``a`` as a square complex array, optionally checking its dimension."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"operator must be a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatch(f"expected a {dim}x{dim} operator, got {arr.shape[0]}x{arr.shape[0]}")
    return arr


def identity(dim):
    return np.eye(dim, dtype=np.complex128)


def adjoint(a):
    return np.conj(as_operator(a)).T


def op_norm(a):
    """Operator (spectral) norm, i.e. the largest singular value."""
    a = as_operator(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def smallest_singular_value(a):
    a = as_operator(a)
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def commutator(a, b):
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"commutator of {a.shape} and {b.shape} operators")
    return a @ b - b @ a


def hermitian_defect(a):
    """Return ``||a - a*||``."""
    a = as_operator(a)
    return op_norm(a - adjoint(a))


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = as_operator(a)
    return hermitian_defect(a) <= tol * (1.0 + op_norm(a))


def hermitian_part(a, tol=HERMITIAN_TOL):
    """Symmetrize ``a`` as ``(a + a*)/2`` after checking it is Hermitian within ``tol``."""
    a = as_operator(a)
    defect = hermitian_defect(a)
    if defect > tol * (1.0 + op_norm(a)):
        raise NotHermitian(f"operator is not Hermitian: ||A - A*|| = {defect:.3e}")
    return 0.5 * (a + adjoint(a))


def abs_operator(d, tol=HERMITIAN_TOL):
    """Absolute value ``|D| = sqrt(D D)`` of a Hermitian operator.

    Computed from the eigendecomposition of the symmetrized input by
    replacing each eigenvalue with its modulus.
    """
    h = hermitian_part(d, tol)
    w, v = np.linalg.eigh(h)
    out = (v * np.abs(w)) @ adjoint(v)
    return 0.5 * (out + adjoint(out))


def matrix_inverse(a, tol=SINGULAR_TOL):
    """Inverse of ``a``; raises :class:`NotInvertible` when
    ``sigma_min(a) <= tol * ||a||``."""
    a = as_operator(a)
    s = np.linalg.svd(a, compute_uv=False)
    smin = float(s[-1]) if s.size else 0.0
    if s.size == 0 or smin <= tol * float(s[0]) or smin == 0.0:
        raise NotInvertible(smin)
    return np.linalg.inv(a)


def frobenius_inner(a, b):
    """Normalized Frobenius inner product ``tr(a* b) / d``."""
    a = as_operator(a)
    b = as_operator(b)
    return complex(np.vdot(a, b) / a.shape[0])


def random_hermitian(dim, rng, scale=1.0):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (g + np.conj(g).T)
    return scale * h / op_norm(h)


def random_matrix(dim, rng, scale=1.0):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * g / op_norm(g)


def random_unitary(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
