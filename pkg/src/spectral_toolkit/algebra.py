"""Finite unital *-subalgebras of ``M_d(C)``.

An algebra is stored as an orthonormal basis for the normalized Frobenius
inner product ``<a, b> = tr(a* b) / d``.  Internally the basis lives as the
columns of a ``(d*d, m)`` matrix of scaled vectorizations, so membership is
a single projection.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NotInAlgebra
from .linop import as_operator, identity, matrix_inverse, op_norm, SINGULAR_TOL

MEMBERSHIP_TOL = 1e-8


def _vec(a):
    a = np.asarray(a)
    d = a.shape[-1]
    return a.reshape(a.shape[:-2] + (d * d,)) / np.sqrt(d)


def _unvec(v, d):
    v = np.asarray(v)
    return v.reshape(v.shape[:-1] + (d, d)) * np.sqrt(d)


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    """Unital *-subalgebra of ``d x d`` matrices given by an orthonormal basis.

    ``summand_dims`` is set for algebras built by :func:`direct_sum_algebra`
    and records the block sizes of the summands.
    """

    ambient_dim: int
    columns: np.ndarray = field(repr=False)
    summand_dims: tuple = None

    @property
    def dim(self):
        return self.columns.shape[1]

    @property
    def basis(self):
        """Basis as an ``(m, d, d)`` array of matrices."""
        return _unvec(self.columns.T, self.ambient_dim)

    def coordinates(self, m):
        m = as_operator(m, self.ambient_dim)
        return np.conj(self.columns.T) @ _vec(m)

    def element(self, coords):
        return _unvec(self.columns @ np.asarray(coords, dtype=np.complex128), self.ambient_dim)

    def __repr__(self):
        return f"StarAlgebra(ambient_dim={self.ambient_dim}, dim={self.dim})"


def _orthonormal_extension(q, candidates, tol):
    """Columns spanning ``span(q, candidates)`` beyond ``span(q)``."""
    if candidates.shape[1] == 0:
        return candidates[:, :0]
    scale = np.linalg.norm(candidates, axis=0)
    # products that vanish in exact arithmetic come out at round-off size;
    # normalizing them would promote noise to new directions
    keep = scale > tol * scale.max()
    c = candidates[:, keep] / scale[keep]
    if c.shape[1] == 0:
        return c
    for _ in range(2):
        c = c - q @ (np.conj(q.T) @ c)
    norms = np.linalg.norm(c, axis=0)
    c = c[:, norms > tol]
    if c.shape[1] == 0:
        return c
    qr_q, qr_r, _ = scipy.linalg.qr(c, mode="economic", pivoting=True)
    diag = np.abs(np.diag(qr_r))
    rank = int(np.sum(diag > tol))
    new = qr_q[:, :rank]
    new = new - q @ (np.conj(q.T) @ new)
    new, _ = np.linalg.qr(new)
    return new


def _from_columns(d, columns, summand_dims=None):
    columns = np.ascontiguousarray(columns, dtype=np.complex128)
    columns.setflags(write=False)
    return StarAlgebra(d, columns, summand_dims)


def close_from_generators(ambient_dim, generators=(), tol=MEMBERSHIP_TOL):
    """Smallest unital *-subalgebra of ``M_d`` containing ``generators``.

    The span of ``{I} U generators U adjoints`` is repeatedly enlarged by
    pairwise products of basis elements until it stops growing.  The
    resulting subspace does not depend on generator order; the basis does.
    """
    d = int(ambient_dim)
    if d < 1:
        raise ValueError("ambient_dim must be positive")
    gens = [as_operator(g, d) for g in generators]
    start = [identity(d)] + gens + [np.conj(g).T for g in gens]
    q = np.zeros((d * d, 0), dtype=np.complex128)
    new = _orthonormal_extension(q, _vec(np.array(start)).T, tol)
    q = np.hstack([q, new])
    while new.shape[1] and q.shape[1] < d * d:
        b_all = _unvec(q.T, d)
        b_new = _unvec(new.T, d)
        prods = np.concatenate(
            [
                np.einsum("iab,jbc->ijac", b_new, b_all).reshape(-1, d, d),
                np.einsum("iab,jbc->ijac", b_all, b_new).reshape(-1, d, d),
                np.conj(np.swapaxes(b_new, 1, 2)),
            ]
        )
        new = _orthonormal_extension(q, _vec(prods).T, tol)
        q = np.hstack([q, new])
    if q.shape[1] > d * d:
        raise AssertionError("closure produced more than d^2 basis vectors")
    return _from_columns(d, q)


def full_matrix_algebra(d):
    return _from_columns(d, np.eye(d * d, dtype=np.complex128))


def diagonal_algebra(d):
    cols = np.zeros((d * d, d), dtype=np.complex128)
    for i in range(d):
        cols[i * d + i, i] = 1.0
    return _from_columns(d, cols)


def contains(algebra, m, tol=MEMBERSHIP_TOL):
    """Return ``(is_member, residual)`` for the projection of ``m`` onto the algebra."""
    m = as_operator(m, algebra.ambient_dim)
    v = _vec(m)
    resid_vec = v - algebra.columns @ (np.conj(algebra.columns.T) @ v)
    residual = float(np.linalg.norm(resid_vec))
    return residual <= tol * (1.0 + op_norm(m)), residual


def require_member(algebra, m, tol=MEMBERSHIP_TOL):
    ok, residual = contains(algebra, m, tol)
    if not ok:
        raise NotInAlgebra(residual)
    return as_operator(m)


def invert_in_algebra(algebra, a, tol=MEMBERSHIP_TOL, singular_tol=SINGULAR_TOL):
    """Inverse of ``a`` together with a membership cross-check of the result."""
    a = require_member(algebra, a, tol)
    inv = matrix_inverse(a, singular_tol)
    ok, residual = contains(algebra, inv, tol)
    if not ok:
        raise NotInAlgebra(residual, f"inverse left the algebra (residual {residual:.3e}); tolerance breakdown")
    return inv


def random_element(algebra, rng, normalize=True):
    """Random combination of basis elements with coefficients uniform in the unit disc."""
    m = algebra.dim
    r = np.sqrt(rng.uniform(0.0, 1.0, m))
    theta = rng.uniform(0.0, 2 * np.pi, m)
    x = algebra.element(r * np.exp(1j * theta))
    if normalize:
        n = op_norm(x)
        if n > 0:
            x = x / n
    return x


def amplify_algebra(algebra, n):
    """``M_n(A)`` in block-major layout, basis ``sqrt(n) * kron(E_ij, b)``."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return algebra
    d = algebra.ambient_dim
    basis = algebra.basis
    mats = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n))
            e[i, j] = 1.0
            mats.extend(np.sqrt(n) * np.kron(e, b) for b in basis)
    return _from_columns(n * d, _vec(np.array(mats)).T)


def block_diag(blocks):
    blocks = [as_operator(b) for b in blocks]
    return scipy.linalg.block_diag(*blocks).astype(np.complex128)


def direct_sum_algebra(algebras):
    """Direct sum ``A_1 + ... + A_k`` acting block-diagonally."""
    algebras = list(algebras)
    if not algebras:
        raise ValueError("direct sum of an empty family")
    if len(algebras) == 1:
        return algebras[0]
    dims = tuple(a.ambient_dim for a in algebras)
    total = sum(dims)
    mats = []
    for idx, alg in enumerate(algebras):
        scale = np.sqrt(total / dims[idx])
        for b in alg.basis:
            blocks = [np.zeros((k, k)) for k in dims]
            blocks[idx] = b
            mats.append(scale * block_diag(blocks))
    return _from_columns(total, _vec(np.array(mats)).T, dims)


def split_blocks(x, dims):
    """Diagonal blocks of ``x`` for the block sizes ``dims``."""
    x = as_operator(x, sum(dims))
    out = []
    start = 0
    for k in dims:
        out.append(x[start:start + k, start:start + k])
        start += k
    return out


def check_closure(algebra, tol=MEMBERSHIP_TOL):
    """Largest membership residual over the unit, basis adjoints and basis products."""
    d = algebra.ambient_dim
    b = algebra.basis
    cands = [identity(d)]
    cands.extend(np.conj(x).T for x in b)
    prods = np.einsum("iab,jbc->ijac", b, b).reshape(-1, d, d)
    v = _vec(np.concatenate([np.array(cands), prods])).T
    resid = v - algebra.columns @ (np.conj(algebra.columns.T) @ v)
    return float(np.max(np.linalg.norm(resid, axis=0)))

