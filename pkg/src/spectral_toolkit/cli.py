"""Command-line front end.

    spectral-toolkit <command> --config <path> [--instances N] [--seed S]
                     [--depth n] [--json <out>] [--n K] [--suite NAME]

The report body is a JSON-lines stream: one header line, then one record
``{campaign, property, instance, margin, pass}`` per check.  It depends only
on the configuration and seed.  Wall time and the per-property summary go to
stdout as plain text.  The exit status is 0 iff every record passed.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import campaigns as cp
from . import normladder, omega, trace
from .algebra import random_element
from .config import build_triple, dixmier_sequence, load_config, parse_matrix
from .errors import ParseError, SpectralToolkitError, UnknownCommand, ValidationError

COMMANDS = ("norms", "verify", "group-check", "exp-check", "trace-check", "dixmier", "amplify")
AMPLIFY_SUITES = ("norm_ladder", "product_estimate", "verify")


def _rng(seed, index):
    return np.random.default_rng([int(seed), int(index)])


def _triples(cfg):
    if not cfg.triples:
        raise ValidationError(f"{cfg.source}: no triples configured")
    return [(i, t, build_triple(t)) for i, t in enumerate(cfg.triples)]


def cmd_norms(cfg, args):
    out = []
    for i, tcfg, triple in _triples(cfg):
        rng = _rng(args.seed, i)
        depth = min(args.depth if args.depth is not None else tcfg.ladder_depth, triple.max_ladder_depth)
        c = cp.Campaign(f"{triple.name}:norms")
        named = [(f"generator{j}", g) for j, g in enumerate(tcfg.algebra_generators)]
        sampled = [(f"sample{k}", random_element(triple.algebra, rng)) for k in range(args.instances)]
        for k, (label, a) in enumerate(named + sampled):
            rep = normladder.ladder(triple, a, depth, label)
            c.check("ladder_monotone", k, float(np.min(np.diff(rep.norms))) if depth else 0.0, a)
            c.records[-1].update(rep.to_record())
        out.append(c)
    return out


def cmd_verify(cfg, args):
    out = []
    for i, tcfg, triple in _triples(cfg):
        depth = args.depth if args.depth is not None else tcfg.ladder_depth
        out.extend(cp.verify_triple(triple, _rng(args.seed, i), args.instances, depth))
    return out


def cmd_exp_check(cfg, args):
    out = []
    for i, _, triple in _triples(cfg):
        c = cp.Campaign(f"{triple.name}:exp")
        cp.exp_suite(c, triple.hilbert_dim, _rng(args.seed, i), args.instances, triple.algebra)
        out.append(c)
    return out


def cmd_trace_check(cfg, args):
    out = []
    for i, _, triple in _triples(cfg):
        out.extend(cp.trace_campaigns(triple, _rng(args.seed, i), args.instances))
    return out


def cmd_amplify(cfg, args):
    if args.suite not in AMPLIFY_SUITES:
        raise ValidationError(f"--suite must be one of {', '.join(AMPLIFY_SUITES)}, got {args.suite!r}")
    if args.n < 1:
        raise ValidationError(f"--n must be positive, got {args.n}")
    out = []
    for i, tcfg, triple in _triples(cfg):
        rng = _rng(args.seed, i)
        depth = args.depth if args.depth is not None else tcfg.ladder_depth
        c = cp.Campaign(f"{triple.name}:amplify{args.n}")
        big = cp.amplification_suite(c, triple, args.n, rng, args.instances, min(3, depth))
        out.append(c)
        if args.suite == "verify":
            out.extend(cp.verify_triple(big, rng, args.instances, depth))
        elif args.suite == "norm_ladder":
            c = cp.Campaign(f"{big.name}:norm_ladder")
            cp.norm_ladder_suite(c, big, rng, args.instances, min(depth, big.max_ladder_depth - 1))
            out.append(c)
        else:
            c = cp.Campaign(f"{big.name}:product_estimate")
            cp.product_estimate_suite(c, big, rng, args.instances, min(4, depth))
            out.append(c)
    return out


def cmd_group_check(cfg, args):
    spec = cfg.group_check
    if not isinstance(spec, dict):
        raise ParseError(f"{cfg.source}: group-check needs a 'group_check' section")
    for key in ("family", "element"):
        if key not in spec:
            raise ParseError(f"{cfg.source}: group_check: missing field {key!r}")
    family = spec["family"]
    membership = spec.get("membership", "group")
    p, q = spec.get("p"), spec.get("q")
    x = parse_matrix(spec["element"], "group_check.element")
    form = omega.family_form(family, x.shape[0], p, q)
    report = omega.classify_blocks(family, x, membership, p, q)
    c = cp.Campaign(f"group_check:{family}:{membership}")
    for name, res in report.residuals.items():
        c.check(name, 0, report.tolerance - res, x)
    if membership == "group":
        ok, res = omega.in_group(form, x)
        bound = omega.GROUP_TOL * (1.0 + np.linalg.norm(x, 2) ** 2 * np.linalg.norm(form.omega, 2))
        c.check("a*Ωa=Ω", 0, bound - res, x)
    else:
        ok, res = omega.in_lie_algebra(form, x)
        bound = omega.LIE_TOL * (1.0 + np.linalg.norm(x, 2) * np.linalg.norm(form.omega, 2))
        c.check("x*Ω+Ωx=0", 0, bound - res, x)
    c.check("blocks_agree_with_form", 0, 0.0 if ok == report.passed else -1.0, x)
    return [c]


def cmd_dixmier(cfg, args):
    spec = cfg.dixmier
    if not isinstance(spec, dict) or "sequence" not in spec:
        raise ParseError(f"{cfg.source}: dixmier needs a 'dixmier' section with a 'sequence'")
    d = float(spec.get("d", 1))
    checkpoints = [int(float(n)) for n in spec.get("checkpoints", [])]
    lam, mu = dixmier_sequence(spec["sequence"])
    if lam is not None:
        n = max(checkpoints) if checkpoints else len(lam)
        est = trace.hypertrace_estimate(lam[:n], np.ones(n), d, checkpoints or [n])
    else:
        est = trace.dixmier_mean(mu, checkpoints or [len(mu)], d)
    c = cp.Campaign("dixmier")
    for k, (n, m) in enumerate(est.partial_means):
        c.check("partial_mean", k, 0.0 if np.isfinite(m) else -1.0)
        c.records[-1].update({"N": n, "value": m})
    expected, tol = spec.get("expected"), spec.get("tolerance")
    margin = 0.0
    if expected is not None:
        margin = float(tol if tol is not None else 0.01) - abs(est.extrapolated - float(expected))
    c.check("extrapolated", 0, margin)
    c.records[-1].update({"value": est.extrapolated, "converged": est.converged})
    return [c]


HANDLERS = {
    "norms": cmd_norms,
    "verify": cmd_verify,
    "group-check": cmd_group_check,
    "exp-check": cmd_exp_check,
    "trace-check": cmd_trace_check,
    "dixmier": cmd_dixmier,
    "amplify": cmd_amplify,
}


def report_body(command, seed, instances, results):
    """Deterministic JSON-lines report for a list of campaigns."""
    header = {"command": command, "seed": seed, "instances": instances}
    lines = [json.dumps(header, sort_keys=True)]
    for c in results:
        for rec in c.records:
            lines.append(json.dumps(rec, sort_keys=True))
        for prop, fail in sorted(c.failures.items()):
            lines.append(json.dumps({"campaign": c.name, "property": prop, "failing_instance": fail}, sort_keys=True))
    return "\n".join(lines) + "\n"


def format_summary(command, results, elapsed):
    lines = [f"{command}: {sum(len(c.records) for c in results)} checks in {elapsed:.2f} s"]
    for c in results:
        for prop, s in c.summary().items():
            status = "PASS" if s["pass"] else "FAIL"
            lines.append(f"  {status}  {c.name:40s} {prop:28s} n={s['instances']:<5d} worst margin {s['worst_margin']:.3e}")
            if not s["pass"] and s.get("failing_instance"):
                lines.append(f"        first failing instance: {s['failing_instance']['instance']}")
    return "\n".join(lines)


def run_command(command, args):
    """Run ``command``; returns ``(exit_status, report_body, campaigns)``."""
    if command not in HANDLERS:
        raise UnknownCommand(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    cfg = load_config(args.config)
    if args.seed is None:
        args.seed = cfg.seed
    if args.instances is None:
        args.instances = cfg.instances
    if args.instances < 1:
        raise ValidationError(f"--instances must be positive, got {args.instances}")
    results = HANDLERS[command](cfg, args)
    status = 0 if all(c.passed for c in results) else 1
    return status, report_body(command, args.seed, args.instances, results), results


def build_parser():
    p = argparse.ArgumentParser(prog="spectral-toolkit", description="Verification campaigns for finite spectral triples.")
    p.add_argument("command", help=" | ".join(COMMANDS))
    p.add_argument("--config", required=True, help="YAML configuration file")
    p.add_argument("--instances", type=int, default=None, help="random instances per campaign")
    p.add_argument("--seed", type=int, default=None, help="PRNG seed (overrides the config)")
    p.add_argument("--depth", type=int, default=None, help="ladder depth (overrides the config)")
    p.add_argument("--json", default=None, help="write the JSON-lines report here ('-' for stdout)")
    p.add_argument("--n", type=int, default=2, help="amplification size for 'amplify'")
    p.add_argument("--suite", default="verify", help=f"sub-suite for 'amplify': {', '.join(AMPLIFY_SUITES)}")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        status, body, results = run_command(args.command, args)
    except UnknownCommand as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpectralToolkitError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - start
    summary_stream = sys.stdout
    if args.json == "-":
        sys.stdout.write(body)
        summary_stream = sys.stderr
    elif args.json:
        with open(args.json, "w") as fh:
            fh.write(body)
    print(format_summary(args.command, results, elapsed), file=summary_stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
