"""Seeded randomized property campaigns.

Each suite draws its instances from a numpy ``Generator`` in a fixed order
and records one margin per (property, instance).  A margin is
``tolerance - residual`` (or ``rhs - lhs`` for inequalities); the property
holds on the instance iff the margin is nonnegative.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import liegroup, normladder, omega, trace
from .algebra import amplify_algebra, contains, random_element
from .linop import adjoint, commutator, identity, op_norm, random_matrix
from .triple import amplify, d_derivation, delta_derivation, diagonal_embedding, direct_sum

# tolerances pinned for the acceptance suite
SUBMULT_SLACK = 1e-9
STAR_TOL = 1e-10
RECURSION_TOL = 1e-12
LEIBNIZ_TOL = 1e-10
GRADIENT_RATIO = (8.0, 12.0)
CENTRAL_FD_TOL = 1e-8
ODE_TOL = 1e-7
ROUNDTRIP_TOL = 1e-8
BCH_RATIO = (7.0, 9.0)
SIGMA_TOL = 1e-9
EXP_GROUP_TOL = 1e-7
SPLIT_TOL = 1e-12
AMPLIFY_TOL = 1e-10
TRACE_AXIOM_TOL = 1e-10


def _serialize(value):
    if isinstance(value, np.ndarray):
        return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(value)]
    if isinstance(value, (list, tuple)):
        return [_serialize(v) for v in value]
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


@dataclass
class Campaign:
    """Accumulates per-instance margins for a named campaign."""

    name: str
    records: list = field(default_factory=list)
    failures: dict = field(default_factory=dict)

    def check(self, prop, instance, margin, detail=None):
        margin = float(margin)
        ok = bool(margin >= 0.0) and not math.isnan(margin)
        self.records.append(
            {"campaign": self.name, "property": prop, "instance": int(instance), "margin": margin, "pass": ok}
        )
        if not ok and prop not in self.failures and detail is not None:
            self.failures[prop] = {"instance": int(instance), "data": _serialize(detail)}
        return ok

    def summary(self):
        """Per-property ``{instances, worst_margin, pass, failing_instance}``."""
        out = {}
        for rec in self.records:
            s = out.setdefault(rec["property"], {"instances": 0, "worst_margin": math.inf, "pass": True})
            s["instances"] += 1
            s["worst_margin"] = min(s["worst_margin"], rec["margin"])
            s["pass"] = s["pass"] and rec["pass"]
        for prop, s in out.items():
            if not s["pass"]:
                s["failing_instance"] = self.failures.get(prop)
        return out

    @property
    def passed(self):
        return all(r["pass"] for r in self.records)

    def count(self, prop):
        return sum(1 for r in self.records if r["property"] == prop)


def norm_ladder_suite(campaign, triple, rng, instances, depth=5):
    """Submultiplicativity, *-invariance, recursion and monotonicity of the ladder."""
    depth = min(depth, triple.max_ladder_depth - 1)
    for i in range(instances):
        a = random_element(triple.algebra, rng)
        b = random_element(triple.algebra, rng)
        ta = normladder.seminorms(triple, a, depth + 1)
        tb = normladder.seminorms(triple, b, depth)
        tab = normladder.seminorms(triple, a @ b, depth)
        tas = normladder.seminorms(triple, adjoint(a), depth)
        na = np.cumsum(ta)
        nb, nab, nas = np.cumsum(tb), np.cumsum(tab), np.cumsum(tas)
        for n in range(depth + 1):
            rhs = na[n] * nb[n] * (1 + SUBMULT_SLACK)
            campaign.check("submultiplicative", i, rhs - nab[n], (a, b, n))
            campaign.check("star_invariant", i, STAR_TOL * na[n] - abs(nas[n] - na[n]), (a, n))
            # recursion cross-checked against an independent compensated sum
            independent = math.fsum(ta[: n + 2])
            step = normladder.knorm(triple, a, n + 1) - (normladder.knorm(triple, a, n) + ta[n + 1])
            campaign.check("recursion", i, RECURSION_TOL * max(1.0, independent) - max(abs(step), abs(na[n + 1] - independent)), (a, n))
            campaign.check("monotone", i, na[n + 1] - na[n], (a, n))


def product_estimate_suite(campaign, triple, rng, instances, max_n=4):
    max_n = min(max_n, triple.max_ladder_depth)
    for i in range(instances):
        a = random_element(triple.algebra, rng)
        x = random_element(triple.algebra, rng)
        n = int(rng.integers(1, max_n + 1))
        _, margin = normladder.verify_product_estimate(triple, a, x, n)
        slack = normladder.INEQUALITY_SLACK * max(1.0, normladder.knorm(triple, a @ x, n))
        campaign.check("product_estimate", i, margin + slack, (a, x, n))


def derivation_suite(campaign, triple, rng, instances, max_k=4):
    """Leibniz rule for ∂, the sign rule for δ on adjoints, and annihilation of the unit."""
    max_k = min(max_k, triple.max_ladder_depth)
    d = triple.hilbert_dim
    for i in range(instances):
        a = random_element(triple.algebra, rng)
        b = random_element(triple.algebra, rng)
        lhs = d_derivation(triple, a @ b)
        rhs = d_derivation(triple, a) @ b + a @ d_derivation(triple, b)
        scale = 1.0 + op_norm(lhs) + op_norm(rhs)
        campaign.check("leibniz", i, LEIBNIZ_TOL * scale - op_norm(lhs - rhs), (a, b))
        for k in range(1, max_k + 1):
            da = delta_derivation(triple, a, k)
            das = delta_derivation(triple, adjoint(a), k)
            err = op_norm(das - (-1) ** k * adjoint(da))
            campaign.check("delta_sign_rule", i, LEIBNIZ_TOL * (1.0 + op_norm(da)) - err, (a, k))
    for k in range(1, max_k + 1):
        scale = op_norm(triple.dirac) ** k
        campaign.check("unit_annihilated", k, LEIBNIZ_TOL * (1 + scale) - op_norm(d_derivation(triple, identity(d), k)))
        campaign.check("unit_annihilated", k, LEIBNIZ_TOL * (1 + scale) - op_norm(delta_derivation(triple, identity(d), k)))


def _sample(algebra, dim, rng, scale):
    if algebra is None:
        return random_matrix(dim, rng, scale)
    return scale * random_element(algebra, rng)


def exp_suite(campaign, dim, rng, instances, algebra=None):
    """Derivative, ODE, round-trip, BCH and homomorphism checks for ``exp``.

    Elements are drawn from ``algebra`` when given, otherwise from ``M_dim``.
    """
    grid = [0.0, 0.25, 0.5, 1.0]
    for i in range(instances):
        v = _sample(algebra, dim, rng, rng.uniform(0.2, 1.0))
        w = _sample(algebra, dim, rng, rng.uniform(0.2, 1.0))
        g = liegroup.exp_gateaux(v, w)
        errs = [op_norm((liegroup.exp_map(v + h * w) - liegroup.exp_map(v)) / h - g) for h in (1e-4, 1e-5)]
        if errs[0] < 1e-13:
            # derivative is exact to round-off (e.g. commuting nilpotent data)
            campaign.check("gateaux_first_order", i, 1e-13 - errs[1], (v, w))
        else:
            ratio = errs[0] / errs[1]
            campaign.check("gateaux_first_order", i, min(ratio - GRADIENT_RATIO[0], GRADIENT_RATIO[1] - ratio), (v, w))
        h = liegroup.FD_STEP
        central = (liegroup.exp_map(v + h * w) - liegroup.exp_map(v - h * w)) / (2 * h)
        campaign.check("gateaux_central_fd", i, CENTRAL_FD_TOL - op_norm(central - g), (v, w))
        campaign.check("ode_residual", i, ODE_TOL - liegroup.ode_residual(v, grid), v)
        small = _sample(algebra, dim, rng, 0.3)
        back = liegroup.log_near_identity(liegroup.exp_map(small))
        campaign.check("log_exp_roundtrip", i, ROUNDTRIP_TOL - op_norm(back - small), small)
        u1 = _sample(algebra, dim, rng, 1.0)
        u2 = _sample(algebra, dim, rng, 1.0)
        defects = [liegroup.bch_defect(s * u1, s * u2) for s in (0.1, 0.05, 0.025)]
        if defects[0] < 1e-13:
            campaign.check("bch_third_order", i, 1e-13 - max(defects), (u1, u2))
        else:
            ratios = [defects[0] / defects[1], defects[1] / defects[2]]
            m = min(min(r - BCH_RATIO[0], BCH_RATIO[1] - r) for r in ratios)
            campaign.check("bch_third_order", i, m, (u1, u2))
        c = 0.5 * u1 + 0.3 * u1 @ u1
        lhs = liegroup.exp_map(u1 + c)
        rhs = liegroup.exp_map(u1) @ liegroup.exp_map(c)
        campaign.check("commuting_homomorphism", i, 1e-9 * op_norm(lhs) - op_norm(lhs - rhs), u1)


def omega_suite(campaign, form, rng, instances, algebra=None, family=None, p=None, q=None):
    """σ identities, exp-into-group, block characterizations and the real-form split."""
    dim = form.dim
    for i in range(instances):
        x = _sample(algebra, dim, rng, 1.0)
        y = _sample(algebra, dim, rng, 1.0)
        lam = complex(rng.standard_normal(), rng.standard_normal())
        sx, sy = omega.sigma(form, x), omega.sigma(form, y)
        campaign.check("sigma_involution", i, SIGMA_TOL - op_norm(omega.sigma(form, sx) - x), x)
        campaign.check(
            "sigma_antilinear", i,
            SIGMA_TOL * (1 + abs(lam)) - op_norm(omega.sigma(form, x + lam * y) - (sx + np.conj(lam) * sy)), (x, y),
        )
        campaign.check(
            "sigma_bracket", i, SIGMA_TOL - op_norm(omega.sigma(form, commutator(x, y)) - commutator(sx, sy)), (x, y)
        )
        campaign.check("sigma_star", i, SIGMA_TOL - op_norm(omega.sigma(form, adjoint(x)) - adjoint(sx)), x)
        u, w = omega.real_form_split(form, x)
        campaign.check("split_reconstruction", i, SPLIT_TOL * (1 + op_norm(x)) - op_norm(u + 1j * w - x), x)
        fixed_err = max(op_norm(omega.sigma(form, u) - u), op_norm(omega.sigma(form, w) - w))
        campaign.check("split_sigma_fixed", i, 1e-10 * (1 + op_norm(x)) - fixed_err, x)

        v = omega.random_lie_element(form, rng, algebra, scale=rng.uniform(0.1, 2.0))
        in_lie, _ = omega.in_lie_algebra(form, v)
        campaign.check("lie_sample_fixed", i, 0.0 if in_lie else -1.0, v)
        g = liegroup.exp_map(v)
        ok, res = omega.in_group(form, g, tol=EXP_GROUP_TOL)
        campaign.check("exp_in_group", i, EXP_GROUP_TOL - res, v)
        if algebra is not None:
            member, _ = contains(algebra, g)
            campaign.check("exp_in_algebra", i, 0.0 if member else -1.0, v)

        # group closure under products, inverses and conjugation
        h_el = liegroup.exp_map(omega.random_lie_element(form, rng, algebra, scale=0.7))
        base = max(res, omega.in_group(form, h_el)[1], 1e-15)
        prod_res = omega.in_group(form, g @ h_el, tol=1.0)[1]
        inv_res = omega.in_group(form, np.linalg.inv(g), tol=1.0)[1]
        conj_res = omega.in_group(form, g @ h_el @ np.linalg.inv(g), tol=1.0)[1]
        growth = 10 * base * (1 + op_norm(g)) ** 4 * (1 + op_norm(h_el)) ** 2
        campaign.check("group_closure", i, growth - max(prod_res, inv_res, conj_res), (g, h_el))

        if family is not None:
            non_member = liegroup.exp_map(_sample(algebra, dim, rng, 0.8))
            cases = [("group", g), ("group", non_member), ("lie_algebra", v), ("lie_algebra", x)]
            for kind, el in cases:
                rep = omega.classify_blocks(family, el, kind, p=p, q=q)
                if kind == "group":
                    direct = omega.in_group(form, el)[0]
                else:
                    direct = omega.in_lie_algebra(form, el)[0]
                campaign.check(f"blocks_agree_{kind}", i, 0.0 if rep.passed == direct else -1.0, el)


def trace_axiom_suite(campaign, tr, rng, samples=20, label="trace"):
    res = trace.check_trace_axioms(tr, rng, samples)
    for axiom, r in res.items():
        campaign.check(f"{label}_{axiom}", 0, TRACE_AXIOM_TOL - r)


def kernel_suite(campaign, tr, rng, instances):
    """The decomposition ``a = (a - T(a)I) + T(a)I`` and ``T([a, b]) = 0``."""
    d = tr.algebra.ambient_dim
    for i in range(instances):
        a = random_element(tr.algebra, rng)
        b = random_element(tr.algebra, rng)
        k, t = trace.unimodular_kernel_project(tr, a)
        campaign.check("kernel_trace_zero", i, 1e-12 - abs(tr(k)), a)
        err = op_norm(k + t * identity(d) - a)
        campaign.check("kernel_reconstruction", i, 1e-14 * (1 + op_norm(a)) - err, a)
        campaign.check("commutator_in_kernel", i, TRACE_AXIOM_TOL - abs(tr(commutator(a, b))), (a, b))


def separation_suite(campaign, traces, rng, pairs, min_gap=0.1):
    """Witnesses separating the kernels of distinct convex combinations of two traces."""
    done = 0
    while done < pairs:
        u1, v1 = rng.uniform(0, 1, 2)
        if abs(u1 - v1) < min_gap:
            continue
        tu = trace.convex_combination(traces, [u1, 1 - u1])
        tv = trace.convex_combination(traces, [v1, 1 - v1])
        wit = trace.separation_witness(tu, tv)
        if wit is None:
            campaign.check("separation_witness", done, -1.0, [u1, v1])
        else:
            _, t_a, tprime_a = wit
            campaign.check("separation_witness", done, min(1e-12 - abs(t_a), abs(tprime_a) - 1e-8), [u1, v1])
        done += 1


def unimodular_omega_suite(campaign, tr, form, rng, instances):
    """Membership in the unimodular Ω-algebra equals the conjunction of its two tests."""
    alg = tr.algebra
    d = alg.ambient_dim
    for i in range(instances):
        v = omega.random_lie_element(form, rng, alg)
        # iI is σ-fixed for every form, so this keeps v in the Lie algebra
        v = v - 1j * tr(v).imag * identity(d)
        candidates = [v, _sample(alg, d, rng, 1.0), 1j * identity(d)]
        for j, x in enumerate(candidates):
            member, lie_res, t_res = trace.in_unimodular_omega_algebra(tr, form, x)
            lie_ok = omega.in_lie_algebra(form, x)[0]
            t_ok = t_res <= trace.TRACE_TOL * (1 + op_norm(x))
            campaign.check("unimodular_conjunction", 3 * i + j, 0.0 if member == (lie_ok and t_ok) else -1.0, x)
            if member:
                g = liegroup.exp_map(x)
                campaign.check("unimodular_exp_in_group", 3 * i + j, EXP_GROUP_TOL - omega.in_group(form, g, EXP_GROUP_TOL)[1], x)


def amplification_suite(campaign, triple, n, rng, instances, depth=3):
    """``||a ⊗ I_n||_k`` in ``K_n`` against ``||a||_k`` in ``K``."""
    big = amplify(triple, n)
    for i in range(instances):
        a = random_element(triple.algebra, rng)
        small = np.cumsum(normladder.seminorms(triple, a, depth))
        large = np.cumsum(normladder.seminorms(big, diagonal_embedding(a, n), depth))
        err = float(np.max(np.abs(small - large)))
        campaign.check(f"amplified_norms_n{n}", i, AMPLIFY_TOL * max(1.0, small[-1]) - err, a)
    return big


def verify_triple(triple, rng, instances, depth=5):
    """Full invariant suite on one triple; returns the campaigns run."""
    depth = min(depth, triple.max_ladder_depth - 1)
    out = []
    c = Campaign(f"{triple.name}:norm_ladder")
    norm_ladder_suite(c, triple, rng, instances, depth)
    out.append(c)
    c = Campaign(f"{triple.name}:product_estimate")
    product_estimate_suite(c, triple, rng, instances, min(4, depth))
    out.append(c)
    c = Campaign(f"{triple.name}:derivations")
    derivation_suite(c, triple, rng, max(1, instances // 4), min(4, depth))
    out.append(c)
    c = Campaign(f"{triple.name}:exp")
    exp_suite(c, triple.hilbert_dim, rng, max(1, instances // 10), triple.algebra)
    out.append(c)
    out.extend(omega_campaigns(triple, rng, max(1, instances // 10)))
    out.extend(trace_campaigns(triple, rng, max(1, instances // 10)))
    return out


def omega_campaigns(triple, rng, instances):
    """Ω = I on ``A`` and the symplectic / pseudo-unitary forms on ``M_2(A)``."""
    d = triple.hilbert_dim
    out = []
    c = Campaign(f"{triple.name}:omega_unitary")
    form = omega.make_omega(identity(d), triple.algebra)
    omega_suite(c, form, rng, instances, triple.algebra, "unitary" if d % 2 == 0 else None)
    out.append(c)
    m2 = amplify_algebra(triple.algebra, 2)
    c = Campaign(f"{triple.name}:omega_symplectic")
    form = omega.make_omega(omega.symplectic_omega(1, d), m2)
    omega_suite(c, form, rng, instances, m2, "symplectic")
    out.append(c)
    c = Campaign(f"{triple.name}:omega_pseudo_unitary")
    form = omega.make_omega(omega.pseudo_unitary_omega(1, 1, d), m2)
    omega_suite(c, form, rng, instances, m2, "pseudo_unitary", 1, 1)
    out.append(c)
    return out


def trace_campaigns(triple, rng, instances):
    out = []
    tr = trace.normalized_matrix_trace(triple.algebra)
    tr2 = trace.amplified_trace(tr, 2)
    c = Campaign(f"{triple.name}:trace")
    trace_axiom_suite(c, tr, rng, label="trace")
    trace_axiom_suite(c, tr2, rng, label="amplified_trace")
    kernel_suite(c, tr, rng, instances)
    kernel_suite(c, tr2, rng, instances)
    out.append(c)
    pair = direct_sum([triple, triple])
    traces = [tr, tr]
    c = Campaign(f"{triple.name}:direct_sum_traces")
    for k, t in enumerate([trace.component_trace(traces, 0), trace.component_trace(traces, 1)]):
        trace_axiom_suite(c, t, rng, label=f"component{k}")
    t_half = trace.convex_combination(traces, [0.5, 0.5])
    trace_axiom_suite(c, t_half, rng, label="convex")
    separation_suite(c, traces, rng, instances)
    same = pair.algebra.dim == t_half.algebra.dim
    c.check("direct_sum_algebra_matches", 0, 0.0 if same else -1.0)
    out.append(c)
    c = Campaign(f"{triple.name}:unimodular")
    unimodular_omega_suite(c, tr, omega.make_omega(identity(triple.hilbert_dim)), rng, instances)
    out.append(c)
    return out

