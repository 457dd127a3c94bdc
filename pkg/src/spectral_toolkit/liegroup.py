"""Exponential map, its derivative, the logarithm near the identity, product
integrals and logarithmic derivatives of group-valued curves."""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InsufficientSamples, OutsideNeighborhood
from .linop import (
    SINGULAR_TOL,
    as_operator,
    commutator,
    identity,
    matrix_inverse,
    op_norm,
    smallest_singular_value,
)

_TAYLOR_DEGREE = 18
_TAYLOR_RADIUS = 0.5
GATEAUX_TAIL_TOL = 1e-12
FD_STEP = 1e-5


def exp_map(v):
    """Matrix exponential by scaling and squaring around a degree-18 Taylor core."""
    v = as_operator(v)
    d = v.shape[0]
    norm1 = float(np.max(np.sum(np.abs(v), axis=0))) if d else 0.0
    s = 0
    if norm1 > _TAYLOR_RADIUS:
        s = int(math.ceil(math.log2(norm1 / _TAYLOR_RADIUS)))
    x = v / (2.0 ** s)
    # Horner form of sum_{k<=m} x^k / k!
    out = identity(d)
    for k in range(_TAYLOR_DEGREE, 0, -1):
        out = identity(d) + (x @ out) / k
    for _ in range(s):
        out = out @ out
    return out


def exp_series(v, terms=60):
    """Plain partial sum ``sum_{n<terms} v^n / n!``; a cross-check for small ``||v||``."""
    v = as_operator(v)
    term = identity(v.shape[0])
    out = term.copy()
    for n in range(1, terms):
        term = term @ v / n
        out = out + term
    return out


def gateaux_order(v_norm, w_norm, tol=GATEAUX_TAIL_TOL, max_order=1000):
    """Smallest ``N`` with ``||w|| e^{||v||} ||v||^N / N! < tol``."""
    if w_norm == 0.0:
        return 1
    bound = w_norm * math.exp(v_norm)
    n = 1
    term = v_norm
    while bound * term >= tol:
        n += 1
        if n > max_order:
            raise ValueError("Gateaux series did not reach the requested tail bound")
        term *= v_norm / n
    return n


def exp_gateaux(v, w, order=None):
    """Directional derivative of ``exp`` at ``v`` along ``w``.

    Sums ``sum_{n=1}^{N} (1/n!) sum_{j<n} v^j w v^{n-1-j}``.  When ``order``
    is omitted, ``N`` is the smallest order whose tail bound
    ``||w|| e^{||v||} ||v||^N / N!`` is below ``1e-12``.
    """
    v = as_operator(v)
    w = as_operator(w, v.shape[0])
    if order is None:
        order = gateaux_order(op_norm(v), op_norm(w))
    if order < 1:
        raise ValueError("truncation order must be >= 1")
    # S_n = sum_{j<n} v^j w v^{n-1-j};  S_{n+1} = v S_n + w v^n
    s_n = w.copy()
    v_pow = v.copy()
    out = w.copy()
    fact = 1.0
    for n in range(1, order):
        s_n = v @ s_n + w @ v_pow
        v_pow = v_pow @ v
        fact *= n + 1
        out = out + s_n / fact
    return out


def log_near_identity(g, warn_radius=0.5):
    """Principal logarithm of ``g`` for ``||g - I|| < 1``.

    Inverse scaling and squaring: take square roots until ``||g - I|| <= 0.05``,
    sum the Mercator series, and rescale by the number of roots taken.
    """
    g = as_operator(g)
    ident = identity(g.shape[0])
    dist = op_norm(g - ident)
    if dist >= 1.0:
        raise OutsideNeighborhood(f"||g - I|| = {dist:.6g} >= 1")
    if dist > warn_radius:
        warnings.warn(f"||g - I|| = {dist:.3g} exceeds {warn_radius}; logarithm may be ill-conditioned", stacklevel=2)
    roots = 0
    while dist > 0.05:
        g = scipy.linalg.sqrtm(g).astype(np.complex128)
        roots += 1
        dist = op_norm(g - ident)
    x = g - ident
    out = np.zeros_like(x)
    power = ident
    for m in range(1, 40):
        power = power @ x
        out = out + ((-1) ** (m + 1) / m) * power
        if dist ** (m + 1) / (m + 1) < 1e-18:
            break
    return out * (2.0 ** roots)


def ode_residual(v, t_grid, h=FD_STEP):
    """Max over ``t_grid`` of ``||(d/dt) exp(tv) - v exp(tv)||`` using central differences."""
    v = as_operator(v)
    worst = 0.0
    for t in t_grid:
        deriv = (exp_map((t + h) * v) - exp_map((t - h) * v)) / (2 * h)
        worst = max(worst, op_norm(deriv - v @ exp_map(t * v)))
    return worst


def bch_defect(u, v):
    """``||log(e^u e^v) - (u + v + [u, v]/2)||``; third order in the size of ``u, v``."""
    u = as_operator(u)
    v = as_operator(v)
    z = log_near_identity(exp_map(u) @ exp_map(v))
    return op_norm(z - (u + v + 0.5 * commutator(u, v)))


@dataclass(frozen=True, eq=False)
class CurveSample:
    """A group-valued curve known at increasing sample times."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=np.complex128)
        if times.ndim != 1 or values.ndim != 3 or len(times) != len(values):
            raise ValueError("times and values must have matching lengths")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def check_invertible(self, tol=SINGULAR_TOL):
        for t, g in zip(self.times, self.values):
            if smallest_singular_value(g) <= tol * op_norm(g):
                raise ValueError(f"curve value at t={t} is not invertible")

    def at(self, t, atol=1e-12):
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > atol:
            raise KeyError(f"t={t} is not a sample time")
        return self.values[i]


def sample_curve(fn, times):
    times = np.asarray(sorted(set(float(t) for t in times)))
    return CurveSample(times, np.array([as_operator(fn(t)) for t in times]))


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Piecewise-constant Lie-algebra path: ``values[k]`` on ``[breakpoints[k], breakpoints[k+1])``."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=np.complex128)
        if bp.ndim != 1 or len(bp) < 2 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing with at least two entries")
        if vals.ndim != 3 or len(vals) != len(bp) - 1:
            raise ValueError("need one value per subinterval")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @classmethod
    def discretize(cls, fn, a, b, steps, rule="midpoint"):
        """Step approximation of ``fn`` on ``[a, b]`` using ``steps`` equal intervals.

        ``rule`` picks the sample point inside each interval: ``"left"`` or
        ``"midpoint"``.
        """
        bp = np.linspace(a, b, steps + 1)
        if rule == "left":
            pts = bp[:-1]
        elif rule == "midpoint":
            pts = 0.5 * (bp[:-1] + bp[1:])
        else:
            raise ValueError(f"unknown rule {rule!r}")
        return cls(bp, np.array([as_operator(fn(t)) for t in pts]))

    def value_at(self, t):
        k = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        k = min(max(k, 0), len(self.values) - 1)
        return self.values[k]


def product_integral(step, samples=()):
    """Product integral of a step function.

    For ``t`` in ``[t_k, t_{k+1})`` the value is
    ``exp((t - t_k) X_k) exp((t_k - t_{k-1}) X_{k-1}) ... exp((t_1 - t_0) X_0)``.
    The result is sampled at every breakpoint and at each requested point of
    ``[t_0, t_m]``.
    """
    bp = step.breakpoints
    d = step.values.shape[1]
    at_breaks = [identity(d)]
    for k in range(len(step.values)):
        at_breaks.append(exp_map((bp[k + 1] - bp[k]) * step.values[k]) @ at_breaks[-1])
    extra = [float(t) for t in samples if bp[0] <= t <= bp[-1]]
    times = np.array(sorted(set(bp.tolist()) | set(extra)))
    values = []
    for t in times:
        k = int(np.searchsorted(bp, t, side="right")) - 1
        if k >= len(step.values):
            values.append(at_breaks[-1])
            continue
        values.append(exp_map((t - bp[k]) * step.values[k]) @ at_breaks[k])
    return CurveSample(times, np.array(values))


def log_derivative(curve, t, max_step=1e-3):
    """Finite-difference estimate of ``U'(t) U(t)^{-1}`` at a sample time ``t``.

    Uses the three-point (second-order) formula on the neighbouring samples;
    for a C^1 curve this is the limit of ``(U(t + s/n) U(t)^{-1})^n``.
    """
    times = curve.times
    i = int(np.argmin(np.abs(times - t)))
    if abs(times[i] - t) > 1e-12:
        raise InsufficientSamples(f"t={t} is not a sample time")
    if i == 0 or i == len(times) - 1:
        raise InsufficientSamples(f"t={t} needs a sample on each side")
    h1 = times[i] - times[i - 1]
    h2 = times[i + 1] - times[i]
    if max(h1, h2) > max_step:
        raise InsufficientSamples(f"neighbouring samples at t={t} are {max(h1, h2):.3g} apart (max {max_step})")
    u_prev, u, u_next = curve.values[i - 1], curve.values[i], curve.values[i + 1]
    deriv = (
        -h2 / (h1 * (h1 + h2)) * u_prev
        + (h2 - h1) / (h1 * h2) * u
        + h1 / (h2 * (h1 + h2)) * u_next
    )
    return deriv @ matrix_inverse(u)
