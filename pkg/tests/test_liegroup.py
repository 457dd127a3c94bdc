
import numpy as np
import pytest
import scipy.integrate
import scipy.linalg
from hypothesis import given, strategies as st

from spectral_toolkit.errors import InsufficientSamples, OutsideNeighborhood
from spectral_toolkit.liegroup import (
    CurveSample,
    StepFunction,
    bch_defect,
    exp_gateaux,
    exp_map,
    exp_series,
    gateaux_order,
    log_derivative,
    log_near_identity,
    ode_residual,
    product_integral,
    sample_curve,
)
from spectral_toolkit.linop import commutator, identity, op_norm, random_matrix

SEEDS = st.integers(0, 2**32 - 1)
DIMS = st.integers(1, 6)


def block_frechet(v, w):
    """Oracle: the top-right block of exp([[v, w], [0, v]]) is the derivative of exp at v along w."""
    d = v.shape[0]
    big = np.block([[v, w], [np.zeros_like(v), v]])
    return scipy.linalg.expm(big)[:d, d:]


def test_exp_examples():
    np.testing.assert_allclose(exp_map([[0, 1], [0, 0]]), [[1, 1], [0, 1]], atol=1e-15)
    np.testing.assert_allclose(exp_map(np.diag([np.log(2), 0])), np.diag([2.0, 1.0]), rtol=1e-15)


@given(SEEDS, DIMS, st.floats(0.01, 8.0))
def test_exp_matches_scipy(seed, d, scale):
    v = random_matrix(d, np.random.default_rng(seed), scale)
    ref = scipy.linalg.expm(v)
    assert op_norm(exp_map(v) - ref) <= 1e-12 * op_norm(ref)


@given(SEEDS, DIMS)
def test_series_cross_check_at_small_norm(seed, d):
    v = random_matrix(d, np.random.default_rng(seed), 0.5)
    assert op_norm(exp_series(v) - exp_map(v)) <= 1e-14


@given(SEEDS, DIMS)
def test_commuting_homomorphism(seed, d):
    rng = np.random.default_rng(seed)
    u = random_matrix(d, rng)
    v = 0.3 * u @ u - 0.7 * u  # polynomial in u, hence commuting
    assert op_norm(commutator(u, v)) <= 1e-14
    assert op_norm(exp_map(u + v) - exp_map(u) @ exp_map(v)) <= 1e-9


def test_gateaux_at_zero_is_identity_map(rng):
    w = random_matrix(3, rng)
    np.testing.assert_allclose(exp_gateaux(np.zeros((3, 3)), w, 5), w)


def test_gateaux_divided_differences(rng):
    lam = np.array([0.3, -0.8, 1.1, 0.0])
    w = random_matrix(4, rng)
    li, lj = np.meshgrid(lam, lam, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        dd = np.where(np.isclose(li, lj), np.exp(li), (np.exp(li) - np.exp(lj)) / (li - lj))
    np.testing.assert_allclose(exp_gateaux(np.diag(lam), w), dd * w, atol=1e-13)


@given(SEEDS, DIMS, st.floats(0.05, 3.0))
def test_gateaux_matches_block_oracle(seed, d, scale):
    rng = np.random.default_rng(seed)
    v = random_matrix(d, rng, scale)
    w = random_matrix(d, rng)
    ref = block_frechet(v, w)
    assert op_norm(exp_gateaux(v, w) - ref) <= 1e-11 * max(1.0, op_norm(ref))


def test_gateaux_order_meets_tail_bound():
    import math
    for vn in (0.1, 1.0, 3.0):
        n = gateaux_order(vn, 1.0)
        assert math.exp(vn) * vn**n / math.factorial(n) < 1e-12
        assert math.exp(vn) * vn ** (n - 1) / math.factorial(n - 1) >= 1e-12


def test_gateaux_forward_difference_is_first_order(rng):
    v, w = random_matrix(3, rng), random_matrix(3, rng)
    g = exp_gateaux(v, w)
    errs = [op_norm((exp_map(v + h * w) - exp_map(v)) / h - g) for h in (1e-4, 1e-5)]
    assert 8 <= errs[0] / errs[1] <= 12


def test_log_examples():
    assert op_norm(log_near_identity(identity(3))) == 0.0
    with pytest.raises(OutsideNeighborhood):
        log_near_identity(np.diag([2.0, 1.0]))
    with pytest.warns(UserWarning):
        log_near_identity(np.diag([1.7, 1.0]))


@given(SEEDS, DIMS)
def test_log_exp_roundtrip(seed, d):
    v = random_matrix(d, np.random.default_rng(seed), 0.3)
    assert op_norm(log_near_identity(exp_map(v)) - v) <= 1e-8


@given(SEEDS, DIMS, st.floats(0.05, 0.49))
def test_log_matches_scipy_logm(seed, d, r):
    rng = np.random.default_rng(seed)
    g = identity(d) + random_matrix(d, rng, r)
    ref = scipy.linalg.logm(g)
    out = log_near_identity(g)
    assert op_norm(out - ref) <= 1e-10
    assert op_norm(exp_map(out) - g) <= 1e-9 * op_norm(g)


def test_ode_residual_examples(rng):
    grid = [0.0, 0.25, 0.5, 1.0]
    assert ode_residual(np.zeros((3, 3)), grid) <= 1e-10
    for _ in range(10):
        assert ode_residual(random_matrix(4, rng, rng.uniform(0.1, 1.0)), grid) <= 1e-7
    # diagonal v reduces to scalar ODEs; compare against the scalar central difference
    lam = np.array([0.5, -0.2])
    h = 1e-5
    scalar = np.abs((np.exp((1 + h) * lam) - np.exp((1 - h) * lam)) / (2 * h) - lam * np.exp(lam))
    assert ode_residual(np.diag(lam), [1.0]) == pytest.approx(scalar.max(), rel=1e-3, abs=1e-12)


def test_bch_defect_is_third_order(rng):
    u, v = random_matrix(3, rng), random_matrix(3, rng)
    d = [bch_defect(s * u, s * v) for s in (0.1, 0.05, 0.025)]
    assert 7 <= d[0] / d[1] <= 9 and 7 <= d[1] / d[2] <= 9


def test_product_integral_constant(rng):
    v = random_matrix(3, rng)
    step = StepFunction([0.0, 1.0], [v])
    curve = product_integral(step)
    np.testing.assert_allclose(curve.at(1.0), exp_map(v), atol=1e-14)


def test_product_integral_two_equal_steps(rng):
    v = random_matrix(3, rng)
    a, m, b = 0.2, 0.7, 1.5
    curve = product_integral(StepFunction([a, m, b], [v, v]))
    np.testing.assert_allclose(curve.at(b), exp_map((b - m) * v) @ exp_map((m - a) * v), atol=1e-13)
    np.testing.assert_allclose(curve.at(b), exp_map((b - a) * v), atol=1e-13)


def smooth_path(t):
    return np.array([[0.3 * np.sin(t), 1.0 + t], [-0.5 * t * t, 0.2 * np.cos(2 * t)]], dtype=complex)


def ode_reference(fn, a, b, d):
    """Oracle: integrate g' = X(t) g with a tight Runge-Kutta solver."""
    def rhs(t, y):
        g = y[: d * d].reshape(d, d) + 1j * y[d * d:].reshape(d, d)
        out = fn(t) @ g
        return np.concatenate([out.real.ravel(), out.imag.ravel()])
    y0 = np.concatenate([np.eye(d).ravel(), np.zeros(d * d)])
    sol = scipy.integrate.solve_ivp(rhs, (a, b), y0, method="DOP853", rtol=1e-12, atol=1e-13)
    y = sol.y[:, -1]
    return y[: d * d].reshape(d, d) + 1j * y[d * d:].reshape(d, d)


def test_product_integral_converges_to_ode_solution():
    ref = ode_reference(smooth_path, 0.0, 1.0, 2)
    errs = []
    for k in range(4, 9):
        curve = product_integral(StepFunction.discretize(smooth_path, 0.0, 1.0, 2**k))
        errs.append(op_norm(curve.at(1.0) - ref))
    assert errs[-1] < 1e-5
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))


def test_log_derivative_one_parameter_subgroup(rng):
    v = random_matrix(3, rng)
    curve = sample_curve(lambda t: exp_map(t * v), np.linspace(-0.01, 1.01, 2041))
    for t in (0.0, 0.5, 1.0):
        assert op_norm(log_derivative(curve, t) - v) <= 1e-5


def test_log_derivative_product_rule_at_zero(rng):
    v, w = random_matrix(3, rng), random_matrix(3, rng)
    times = np.linspace(-1e-3, 1e-3, 21)
    curve = sample_curve(lambda t: exp_map(t * v) @ exp_map(t * w), times)
    parts = [sample_curve(lambda t, u=u: exp_map(t * u), times) for u in (v, w)]
    total = log_derivative(curve, 0.0)
    assert op_norm(total - (v + w)) <= 1e-6
    assert op_norm(total - sum(log_derivative(p, 0.0) for p in parts)) <= 1e-6


def test_log_derivative_of_product_integral_recovers_steps():
    step = StepFunction.discretize(smooth_path, 0.0, 1.0, 8)
    bp = step.breakpoints
    samples = []
    for k in range(len(step.values)):
        samples.extend([bp[k] + 0.5 * (bp[k + 1] - bp[k]) + s for s in (-1e-4, 0.0, 1e-4)])
    curve = product_integral(step, samples)
    for k in range(len(step.values)):
        mid = bp[k] + 0.5 * (bp[k + 1] - bp[k])
        assert op_norm(log_derivative(curve, mid) - step.values[k]) <= 1e-6


def test_log_derivative_errors(rng):
    curve = sample_curve(lambda t: exp_map(t * identity(2)), [0.0, 0.5, 1.0])
    with pytest.raises(InsufficientSamples):
        log_derivative(curve, 0.0)
    with pytest.raises(InsufficientSamples):
        log_derivative(curve, 0.5)
    with pytest.raises(InsufficientSamples):
        log_derivative(curve, 0.25)


def test_curve_sample_validation():
    with pytest.raises(ValueError):
        CurveSample([0.0, 0.0], np.array([np.eye(2), np.eye(2)]))
    curve = CurveSample([0.0, 1.0], np.array([np.eye(2), np.zeros((2, 2))]))
    with pytest.raises(ValueError):
        curve.check_invertible()
    with pytest.raises(ValueError):
        StepFunction([1.0, 0.0], [np.eye(2)])
