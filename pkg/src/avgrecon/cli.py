"""Command-line front end.

Exit codes: 0 ok, 2 config error, 3 oracle failure, 4 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import io
import math
import sys

import numpy as np

from . import config as cfgmod
from .errors import ConfigError, PreconditionFailed, QuadratureNotConverged
from .experiments import match_table_rows, run_experiment1, run_experiment2
from .extension import build_plan
from .kernel import phi_values, spectrum_table
from .measures import validate_measure
from .oracles import check_partial_expansion, run_all
from .reconstruct import (
    ReconstructionConfig,
    beta_constant,
    choose_k_flagged,
    collect_samples,
    fmt,
    reconstruct_many,
    sweep,
)
from .signals import BandSignal, eval_signal

EXIT_OK, EXIT_CONFIG, EXIT_ORACLE, EXIT_NUMERICS = 0, 2, 3, 4


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(float(v)) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def _context(args):
    measure = cfgmod.load_measure(args.measure)
    return validate_measure(measure, cfgmod.parse_real(args.delta))


def _signal(args, delta) -> BandSignal:
    if getattr(args, "config", None):
        sections = cfgmod.read_sections(args.config)
        return cfgmod.signal_from_section(sections.get("signal", {"target": ['"sinc"']}), delta)
    return BandSignal.sinc_target(delta)


def _k_for(args, ctx):
    if getattr(args, "k", None):
        return args.k
    n = getattr(args, "n", None) or 1
    return choose_k_flagged(ReconstructionConfig(ctx, n))[0]


def cmd_validate(args):
    ctx = _context(args)
    beta = beta_constant(ctx)
    rows = [("sigma", ctx.sigma), ("delta", ctx.delta), ("gamma", ctx.gamma), ("beta", beta), ("beta_e", beta * math.e)]
    _emit(_csv(["quantity", "value"], rows), args.output)
    return EXIT_OK


def cmd_plan_dump(args):
    ctx = _context(args)
    plan = build_plan(ctx, _k_for(args, ctx))
    rows = []
    for name in ("d", "dprime", "q"):
        rows.extend((name, j, float(v)) for j, v in enumerate(getattr(plan, name)))
    rows.extend(("c", j, v) for j, v in enumerate(plan.c_float))
    rows.append(("vk", 0, plan.vk))
    _emit(_csv(["quantity", "j", "value"], rows), args.output)
    return EXIT_OK


def cmd_kernel_emit(args):
    ctx = _context(args)
    plan = build_plan(ctx, _k_for(args, ctx))
    xs = np.linspace(cfgmod.parse_real(args.x_min), cfgmod.parse_real(args.x_max), args.points)
    vals = phi_values(plan, xs, args.quad_tol)
    _emit(_csv(["x", "phi"], zip(xs.tolist(), vals.tolist())), args.output)
    return EXIT_OK


def cmd_kernel_spectrum(args):
    ctx = _context(args)
    plan = build_plan(ctx, _k_for(args, ctx))
    edge = 2 * math.pi - ctx.delta + 0.5
    xis = np.linspace(-edge, edge, args.points)
    _emit(_csv(["xi", "phi_hat"], zip(xis.tolist(), spectrum_table(plan, xis).tolist())), args.output)
    return EXIT_OK


def cmd_reconstruct(args):
    ctx = _context(args)
    f = _signal(args, ctx.delta)
    cfg = ReconstructionConfig(ctx, args.n, k_override=args.k, c_h=args.c_h, quad_tol=args.quad_tol)
    k, capped = choose_k_flagged(cfg)
    if capped:
        print(f"warning: k capped at {k}", file=sys.stderr)
    plan = build_plan(ctx, k)
    xs = cfgmod.parse_grid(args.x_grid)
    rec = reconstruct_many(cfg, plan, collect_samples(ctx, f, args.n), xs)
    exact = eval_signal(f, xs)
    rows = [(x, k, fx, r, abs(fx - r)) for x, fx, r in zip(xs.tolist(), exact.tolist(), rec.tolist())]
    _emit(_csv(["x", "k", "f", "reconstruction", "error"], rows), args.output)
    return EXIT_OK


def cmd_sweep(args):
    ctx = _context(args)
    f = _signal(args, ctx.delta)
    ns = cfgmod.parse_int_list(args.n_list)
    report = sweep(ctx, f, ns, args.c_h, args.quad_tol, cfgmod.parse_grid(args.x_grid), args.workers)
    _emit(report.to_csv(with_timing=not args.no_timing), args.output)
    return EXIT_OK


def cmd_verify(args):
    contexts = [validate_measure(cfgmod.load_measure(args.measure), cfgmod.parse_real(d)) for d in cfgmod.parse_list(args.deltas, conv=str)]
    k_values = range(1, args.k_max + 1)
    reports = run_all(contexts, k_values, seed=args.seed)
    for ctx in contexts:
        reports.append(check_partial_expansion(ctx, BandSignal.sinc_target(ctx.delta), [4, 8, 16, 24]))
    rows = [(r.name, "pass" if r.passed else "fail", r.residual, r.tolerance, repr(_short(r.params)).replace(",", ";")) for r in reports]
    _emit(_csv(["check", "status", "residual", "tolerance", "params"], rows), args.output)
    for r in reports:
        print(r.line() if len(r.line()) < 160 else r.line()[:157] + "...", file=sys.stderr)
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed", file=sys.stderr)
    return EXIT_ORACLE if failed else EXIT_OK


def _short(params):
    return {k: v for k, v in params.items() if k not in ("terms", "errors", "slack")}


def _experiment(args, runner):
    config = cfgmod.load_experiment_config(args.config) if args.config else None
    if config is not None and args.c_h is not None:
        config.c_h = args.c_h
    report = runner(config, workers=args.workers)
    output = args.output or (config.output if config else None)
    _emit(report.to_csv(with_delta=True, with_timing=False), output)
    return report


def cmd_experiment1(args):
    _experiment(args, run_experiment1)
    return EXIT_OK


def cmd_experiment2(args):
    report = _experiment(args, run_experiment2)
    for label, (delta, dev) in match_table_rows(report).items():
        print(f"table row delta={label}: best match delta={delta:.6f} (max log10 deviation {dev:.3f})", file=sys.stderr)
    return EXIT_OK


def _add_common(p, n=False):
    p.add_argument("--measure", default="experiment2", help="preset (experiment1, experiment2, point) or config file")
    p.add_argument("--delta", default="pi/2")
    p.add_argument("--output")
    if n:
        p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="avgrecon", description=__doc__, allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a measure and print gamma, beta")
    p.add_argument("--measure", default="experiment2")
    p.add_argument("--delta", default="pi/2")
    p.add_argument("--output")
    p.set_defaults(func=cmd_validate)

    plan = sub.add_parser("plan").add_subparsers(dest="plan_command", required=True)
    p = plan.add_parser("dump", help="d, d', q, c and V_k as CSV")
    _add_common(p, n=True)
    p.set_defaults(func=cmd_plan_dump)

    kern = sub.add_parser("kernel").add_subparsers(dest="kernel_command", required=True)
    p = kern.add_parser("emit", help="phi(x) on a uniform grid")
    _add_common(p, n=True)
    p.add_argument("--x-min", default="-10")
    p.add_argument("--x-max", default="10")
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--quad-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_kernel_emit)
    p = kern.add_parser("spectrum", help="phi_hat(xi) on a uniform grid")
    _add_common(p, n=True)
    p.add_argument("--points", type=int, default=401)
    p.set_defaults(func=cmd_kernel_spectrum)

    p = sub.add_parser("reconstruct", help="A_n f on a grid in (0, 1)")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--config", help="config file with a [signal] section")
    p.add_argument("--x-grid", default="default")
    p.add_argument("--c-h", type=float, default=1.0)
    p.add_argument("--quad-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("sweep", help="error report over several n")
    _add_common(p)
    p.add_argument("--n-list", default="2,4,6,8,10,12")
    p.add_argument("--config", help="config file with a [signal] section")
    p.add_argument("--x-grid", default="default")
    p.add_argument("--c-h", type=float, default=1.0)
    p.add_argument("--quad-tol", type=float, default=1e-12)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="omit the ms column (byte-stable output)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run every oracle")
    p.add_argument("--measure", default="experiment2")
    p.add_argument("--deltas", default="pi/3,pi/2,2pi/3")
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    for name, func in (("experiment1", cmd_experiment1), ("experiment2", cmd_experiment2)):
        p = sub.add_parser(name, help=f"reproduce {name}")
        p.add_argument("--config")
        p.add_argument("--output")
        p.add_argument("--c-h", type=float, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, PreconditionFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureNotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())
