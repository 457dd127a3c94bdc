"""Ω-forms and the groups they preserve.

An Ω-form is an invertible ``Ω`` with ``Ω^{-1} = Ω* = εΩ``, ``ε = ±1``.  It
defines the antilinear involution ``σ(a) = -ε Ω a* Ω``, the real Lie algebra
``{x : x*Ω + Ωx = 0}`` of σ-fixed points and the group ``{a : a*Ωa = Ω}``.
Unitary (``Ω = I``), symplectic (``Ω = [[0, -I], [I, 0]]``) and
pseudo-unitary (``Ω = diag(I_p, -I_q)``) groups are the standard instances.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import MEMBERSHIP_TOL, random_element, require_member
from .errors import BadBlockLayout, DimensionMismatch, NotAnOmegaForm, NotInvertible
from .linop import adjoint, as_operator, identity, matrix_inverse, op_norm, random_matrix

FORM_TOL = 1e-10
LIE_TOL = 1e-9
GROUP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OmegaForm:
    omega: np.ndarray = field(repr=False)
    epsilon: int

    @property
    def dim(self):
        return self.omega.shape[0]


def make_omega(omega, algebra=None, tol=FORM_TOL):
    """Validate ``omega`` as an Ω-form and infer its sign ``ε``.

    Raises :class:`NotAnOmegaForm` naming the identity that fails.
    """
    omega = as_operator(omega)
    if algebra is not None:
        require_member(algebra, omega, MEMBERSHIP_TOL)
    scale = tol * (1.0 + op_norm(omega))
    try:
        inv = matrix_inverse(omega)
    except NotInvertible as exc:
        raise NotAnOmegaForm("invertible", str(exc)) from exc
    om_star = adjoint(omega)
    r_inv = op_norm(inv - om_star)
    if r_inv > scale:
        raise NotAnOmegaForm("inverse=adjoint", f"||Ω^-1 - Ω*|| = {r_inv:.3e}")
    r_plus = op_norm(om_star - omega)
    r_minus = op_norm(om_star + omega)
    eps = 1 if r_plus <= r_minus else -1
    if min(r_plus, r_minus) > scale:
        raise NotAnOmegaForm("adjoint=±Ω", f"Ω* is neither Ω nor -Ω (residuals {r_plus:.3e}, {r_minus:.3e})")
    r_sq = op_norm(omega @ omega - eps * identity(omega.shape[0]))
    if r_sq > scale:
        raise NotAnOmegaForm("square=εI", f"||Ω² - εI|| = {r_sq:.3e}")
    om = omega.copy()
    om.setflags(write=False)
    return OmegaForm(om, eps)


def unitary_omega(n, unit_dim=1):
    return identity(n * unit_dim)


def symplectic_omega(n, unit_dim=1):
    """``Ω(n) = [[0, -I_n], [I_n, 0]]`` over an algebra acting on ``C^unit_dim``."""
    base = np.block([[np.zeros((n, n)), -np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    return np.kron(base, np.eye(unit_dim)).astype(np.complex128)


def pseudo_unitary_omega(p, q, unit_dim=1):
    """``I(p, q) = diag(I_p, -I_q)`` over an algebra acting on ``C^unit_dim``."""
    base = np.diag([1.0] * p + [-1.0] * q)
    return np.kron(base, np.eye(unit_dim)).astype(np.complex128)


def _check_dim(form, x):
    x = as_operator(x)
    if x.shape[0] != form.dim:
        raise DimensionMismatch(f"operator of dimension {x.shape[0]} against a form of dimension {form.dim}")
    return x


def sigma(form, a):
    a = _check_dim(form, a)
    return -form.epsilon * form.omega @ adjoint(a) @ form.omega


def in_lie_algebra(form, x, tol=LIE_TOL):
    """Return ``(member, residual)`` for ``x*Ω + Ωx = 0``.

    The fixed-point test ``σ(x) = x`` is evaluated as well; the two must agree.
    """
    x = _check_dim(form, x)
    bound = tol * (1.0 + op_norm(x) * op_norm(form.omega))
    residual = op_norm(adjoint(x) @ form.omega + form.omega @ x)
    fixed = op_norm(sigma(form, x) - x)
    if (residual <= bound) != (fixed <= bound):
        raise ArithmeticError(
            f"Lie-algebra tests disagree: ||x*Ω + Ωx|| = {residual:.3e}, ||σ(x) - x|| = {fixed:.3e}"
        )
    return residual <= bound, residual


def in_group(form, a, tol=GROUP_TOL):
    """Return ``(member, residual)`` for ``a*Ωa = Ω`` with ``a`` invertible.

    On success the inverse formula ``a^{-1} = εΩa*Ω`` is cross-checked.
    """
    a = _check_dim(form, a)
    try:
        inv = matrix_inverse(a)
    except NotInvertible:
        return False, float("inf")
    a_norm = op_norm(a)
    bound = tol * (1.0 + a_norm ** 2 * op_norm(form.omega))
    residual = op_norm(adjoint(a) @ form.omega @ a - form.omega)
    ok = residual <= bound
    if ok:
        inv_resid = op_norm(inv - form.epsilon * form.omega @ adjoint(a) @ form.omega)
        inv_bound = bound * (1.0 + op_norm(inv)) ** 2
        if inv_resid > inv_bound:
            raise ArithmeticError(f"group member fails the inverse identity (residual {inv_resid:.3e})")
    return ok, residual


def real_form_split(form, x):
    """``x = u + i w`` with ``u``, ``w`` both σ-fixed."""
    x = _check_dim(form, x)
    sx = sigma(form, x)
    return 0.5 * (x + sx), (x - sx) / 2j


def random_lie_element(form, rng, algebra=None, scale=1.0):
    """Random σ-fixed element (inside ``algebra`` when given) of operator norm ``scale``."""
    for _ in range(100):
        if algebra is None:
            x = random_matrix(form.dim, rng)
        else:
            x = random_element(algebra, rng)
        u = 0.5 * (x + sigma(form, x))
        n = op_norm(u)
        if n > 1e-8:
            return scale * u / n
    raise RuntimeError("could not sample a nonzero Lie-algebra element")


FAMILIES = ("unitary", "symplectic", "pseudo_unitary")


@dataclass(frozen=True)
class BlockReport:
    family: str
    membership: str
    residuals: dict
    tolerance: float

    @property
    def passed(self):
        return all(r <= self.tolerance for r in self.residuals.values())

    @property
    def failing(self):
        return [name for name, r in self.residuals.items() if r > self.tolerance]


def _block_sizes(family, dim, p=None, q=None):
    if family in ("unitary", "symplectic"):
        if dim % 2:
            raise BadBlockLayout(f"{family} blocks need an even dimension, got {dim}")
        return dim // 2, dim // 2
    if family == "pseudo_unitary":
        if not p or not q or p < 1 or q < 1:
            raise BadBlockLayout("pseudo_unitary needs positive p and q")
        if dim % (p + q):
            raise BadBlockLayout(f"dimension {dim} is not a multiple of p+q={p + q}")
        h = dim // (p + q)
        return p * h, q * h
    raise BadBlockLayout(f"unknown family {family!r}")


def family_form(family, dim, p=None, q=None):
    """The Ω-form whose group the block equations of ``family`` describe."""
    r, s = _block_sizes(family, dim, p, q)
    if family == "unitary":
        return make_omega(unitary_omega(dim))
    if family == "symplectic":
        return make_omega(symplectic_omega(r))
    return make_omega(pseudo_unitary_omega(r, s))


def _rect_adjoint(m):
    # off-diagonal blocks are rectangular when p != q
    return np.conj(m).T


def _rect_norm(m):
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def classify_blocks(family, a, membership="group", p=None, q=None, tol=None):
    """Evaluate the 2x2 block equations characterizing a classical group or its Lie algebra.

    ``a = [[a, b], [c, d]]`` is split according to the family's layout
    (halves for unitary and symplectic, ``p*h`` and ``q*h`` rows for
    pseudo-unitary over an algebra acting on ``C^h``).  Returns a
    :class:`BlockReport` with one residual per equation.
    """
    x = as_operator(a)
    dim = x.shape[0]
    r, _ = _block_sizes(family, dim, p, q)
    a_, b_ = x[:r, :r], x[:r, r:]
    c_, d_ = x[r:, :r], x[r:, r:]
    h, nrm = _rect_adjoint, _rect_norm
    i_r = identity(r)
    i_s = identity(dim - r)
    if membership == "group":
        tol = GROUP_TOL if tol is None else tol
        bound = tol * (1.0 + op_norm(x) ** 2)
        if family == "unitary":
            res = {
                "a*a+c*c=I": nrm(h(a_) @ a_ + h(c_) @ c_ - i_r),
                "b*b+d*d=I": nrm(h(b_) @ b_ + h(d_) @ d_ - i_s),
                "a*b+c*d=0": nrm(h(a_) @ b_ + h(c_) @ d_),
            }
        elif family == "symplectic":
            res = {
                "c*a=a*c": nrm(h(c_) @ a_ - h(a_) @ c_),
                "d*b=b*d": nrm(h(d_) @ b_ - h(b_) @ d_),
                "d*a-b*c=I": nrm(h(d_) @ a_ - h(b_) @ c_ - i_r),
            }
        else:
            res = {
                "a*a-c*c=I_p": nrm(h(a_) @ a_ - h(c_) @ c_ - i_r),
                "d*d-b*b=I_q": nrm(h(d_) @ d_ - h(b_) @ b_ - i_s),
                "a*b=c*d": nrm(h(a_) @ b_ - h(c_) @ d_),
            }
    elif membership == "lie_algebra":
        tol = LIE_TOL if tol is None else tol
        bound = tol * (1.0 + op_norm(x))
        if family == "unitary":
            res = {
                "a*+a=0": nrm(h(a_) + a_),
                "d*+d=0": nrm(h(d_) + d_),
                "c=-b*": nrm(c_ + h(b_)),
            }
        elif family == "symplectic":
            res = {
                "d=-a*": nrm(d_ + h(a_)),
                "b*=b": nrm(h(b_) - b_),
                "c*=c": nrm(h(c_) - c_),
            }
        else:
            res = {
                "a*+a=0": nrm(h(a_) + a_),
                "d*+d=0": nrm(h(d_) + d_),
                "c=b*": nrm(c_ - h(b_)),
            }
    else:
        raise ValueError(f"membership must be 'group' or 'lie_algebra', got {membership!r}")
    return BlockReport(family, membership, res, bound)
