"""Truncated reconstruction ``A_n``, choice of k, error bound and sinc baseline."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, DomainError, PreconditionFailed
from .extension import MAX_ORDER, ExtensionPlan, build_plan
from .kernel import KernelTable, phi_values
from .measures import MeasureContext
from .signals import BandSignal, SampleVector, average_samples, collect_samples, eval_signal, signal_norm

SQRT_2PI = math.sqrt(2 * math.pi)
SILVER2 = (1 + math.sqrt(2)) ** 2
DEFAULT_GRID = np.arange(1, 10) / 10


def beta_constant(ctx: MeasureContext) -> float:
    """``beta = (1+sqrt2)^2 (gamma + sigma(pi-delta)) / (2 gamma (pi-delta))``."""
    g, s, d = ctx.gamma, ctx.sigma, ctx.delta
    return SILVER2 * (g + s * (math.pi - d)) / (2 * g * (math.pi - d))


def decay_rate(ctx: MeasureContext) -> float:
    """Exponent per sample in the bound, ``1 / (beta e)``."""
    return 1.0 / (beta_constant(ctx) * math.e)


@dataclass(frozen=True)
class ReconstructionConfig:
    ctx: MeasureContext
    n: int
    k_override: Optional[int] = None
    c_h: float = 1.0
    quad_tol: float = 1e-12

    @property
    def beta(self):
        return beta_constant(self.ctx)


def choose_k_flagged(cfg: ReconstructionConfig) -> tuple[int, bool]:
    """``(k, capped)`` with ``k = 1 + floor(n / (beta e))`` clipped to 12."""
    if cfg.k_override is not None:
        return cfg.k_override, False
    if cfg.n < 1:
        raise ValueError("n must be positive")
    k = 1 + math.floor(cfg.n / (cfg.beta * math.e))
    if k > MAX_ORDER:
        return MAX_ORDER, True
    return k, False


def choose_k(cfg: ReconstructionConfig) -> int:
    return choose_k_flagged(cfg)[0]


def plan_for(cfg: ReconstructionConfig) -> ExtensionPlan:
    return build_plan(cfg.ctx, choose_k(cfg))


def reconstruct_many(cfg: ReconstructionConfig, plan: ExtensionPlan, samples: SampleVector, xs):
    """``(A_n f)(x) = (2pi)^-1/2 sum_{|j|<=n} mu_j(f) phi(x - j)`` for x in (0, 1)."""
    if samples.n != cfg.n:
        raise DimensionMismatch(f"samples cover n={samples.n}, config has n={cfg.n}")
    xs = np.asarray(xs, dtype=float)
    if np.any((xs <= 0) | (xs >= 1)):
        raise DomainError("reconstruction is defined on (0, 1); translate the samples for other x")
    table = KernelTable.build(plan, xs.ravel(), cfg.n, cfg.quad_tol)
    return (table.values @ samples.as_array() / SQRT_2PI).reshape(xs.shape)


def reconstruct_at(cfg: ReconstructionConfig, plan: ExtensionPlan, samples: SampleVector, x: float) -> float:
    return float(reconstruct_many(cfg, plan, samples, np.array([x]))[0])


def reconstruct_translated(cfg: ReconstructionConfig, plan: ExtensionPlan, sampler: Callable, x: float) -> float:
    """Reconstruct at any non-integer x by shifting to (0, 1).

    ``sampler(js)`` must return ``mu_j(f)`` for an array of integers. With
    ``m = floor(x)`` the samples ``mu_{m+j}(f)`` are the samples of
    ``f(. + m)``, whose value at ``x - m`` is ``f(x)``.
    """
    m = math.floor(x)
    local = x - m
    vals = np.asarray(sampler(np.arange(m - cfg.n, m + cfg.n + 1)), dtype=float)
    return reconstruct_at(cfg, plan, SampleVector(cfg.n, tuple(vals.tolist())), local)


def kcondition_sides(ctx: MeasureContext, k: int) -> tuple[float, float]:
    """Both sides of ``(e sigma delta / gamma) k^(3/4) <= 4 (1+sqrt2)^(2k)``."""
    lhs = math.e * ctx.sigma * ctx.delta / ctx.gamma * k**0.75
    rhs = 4 * (1 + math.sqrt(2)) ** (2 * k)
    return lhs, rhs


def error_bound(cfg: ReconstructionConfig) -> float:
    """Worst-case error of ``A_n`` per unit ``||f||``.

    Raises PreconditionFailed if ``n < beta e`` or the k-condition fails.
    """
    ctx, n = cfg.ctx, cfg.n
    beta = cfg.beta
    be = beta * math.e
    if n < be:
        raise PreconditionFailed(f"n={n} is below beta*e={be:.4f}")
    k = choose_k(cfg)
    lhs, rhs = kcondition_sides(ctx, k)
    if lhs > rhs:
        raise PreconditionFailed(f"k-condition fails for k={k}: {lhs:.4g} > {rhs:.4g}")
    const = 4 * SILVER2 * cfg.c_h / (ctx.gamma * math.pi)
    return (
        const
        * (2 / beta) ** 0.25
        * math.e**0.75
        * math.sqrt(1 + 2 * be)
        * n ** (-0.75)
        * math.exp(-n / be)
    )


def error_bound_or_nan(cfg: ReconstructionConfig) -> float:
    try:
        return error_bound(cfg)
    except PreconditionFailed:
        return math.nan


def sinc_baseline_many(f: BandSignal, n: int, xs):
    """Truncated Shannon series ``sum_{|j|<=n} f(j) sinc(x - j)``."""
    xs = np.asarray(xs, dtype=float)
    if np.any((xs <= 0) | (xs >= 1)):
        raise DomainError("baseline is evaluated on (0, 1)")
    js = np.arange(-n, n + 1)
    return np.sinc(np.subtract.outer(xs, js)) @ eval_signal(f, js.astype(float))


def sinc_baseline(f: BandSignal, n: int, x: float) -> float:
    return float(sinc_baseline_many(f, n, np.array([x]))[0])


def baseline_extremal_signal(delta: float, n: int, x: float) -> BandSignal:
    """Unit-norm f in B_delta maximizing the baseline error at x.

    The error functional is ``<f, r>`` with
    ``r = K(. - x) - sum_{|j|<=n} sinc(x - j) K(. - j)``, so ``r/||r||`` is
    extremal and its error equals ``||r||``.
    """
    js = np.arange(-n, n + 1, dtype=float)
    r = BandSignal(delta, (float(x), *js.tolist()), (1.0, *(-np.sinc(x - js)).tolist()))
    return r.scaled(1.0 / signal_norm(r))


def baseline_worst_error(delta: float, n: int, xs=DEFAULT_GRID) -> float:
    """``max_x sup_{||f||=1} |f(x) - sum f(j) sinc(x-j)|`` over the grid."""
    worst = 0.0
    for x in np.asarray(xs, dtype=float):
        f = baseline_extremal_signal(delta, n, x)
        worst = max(worst, abs(sinc_baseline(f, n, x) - f(x)))
    return worst


def measured_error(cfg: ReconstructionConfig, plan: ExtensionPlan, f: BandSignal, xs=DEFAULT_GRID) -> float:
    """``max_x |f(x) - (A_n f)(x)|`` over the grid."""
    samples = collect_samples(cfg.ctx, f, cfg.n)
    rec = reconstruct_many(cfg, plan, samples, xs)
    return float(np.max(np.abs(eval_signal(f, np.asarray(xs, dtype=float)) - rec)))


@dataclass(frozen=True)
class ReportRow:
    n: int
    k: int
    measured_error: float
    bound: float
    baseline_error: float
    runtime_ms: float
    capped: bool = False
    delta: float = math.nan


@dataclass
class ErrorReport:
    rows: list[ReportRow] = field(default_factory=list)

    HEADER = ("n", "k", "error", "bound", "baseline", "ms")

    def sorted_rows(self):
        return sorted(self.rows, key=lambda r: (r.delta, r.n))

    def to_csv(self, with_delta=False, with_timing=True) -> str:
        cols = (["delta"] if with_delta else []) + list(self.HEADER[:5])
        if with_timing:
            cols.append("ms")
        lines = [",".join(cols)]
        for r in self.sorted_rows():
            vals = ([fmt(r.delta)] if with_delta else []) + [
                str(r.n),
                str(r.k),
                fmt(r.measured_error),
                fmt(r.bound),
                fmt(r.baseline_error),
            ]
            if with_timing:
                vals.append(f"{r.runtime_ms:.1f}")
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"


def fmt(v: float) -> str:
    return "nan" if math.isnan(v) else f"{v:.17g}"


def sweep_cell(ctx: MeasureContext, f: BandSignal, n: int, c_h=1.0, quad_tol=1e-12, xs=DEFAULT_GRID, k_override=None) -> ReportRow:
    start = time.perf_counter()
    cfg = ReconstructionConfig(ctx, n, k_override=k_override, c_h=c_h, quad_tol=quad_tol)
    k, capped = choose_k_flagged(cfg)
    plan = build_plan(ctx, k)
    err = measured_error(cfg, plan, f, xs)
    bound = error_bound_or_nan(cfg) * signal_norm(f)
    xs_arr = np.asarray(xs, dtype=float)
    base = float(np.max(np.abs(sinc_baseline_many(f, n, xs_arr) - eval_signal(f, xs_arr))))
    ms = 1000 * (time.perf_counter() - start)
    return ReportRow(n, k, err, bound, base, ms, capped, ctx.delta)


def sweep(ctx: MeasureContext, f: BandSignal, ns, c_h=1.0, quad_tol=1e-12, xs=DEFAULT_GRID, workers=1) -> ErrorReport:
    """One report row per n; cells are independent and may run in threads."""
    cell = lambda n: sweep_cell(ctx, f, n, c_h, quad_tol, xs)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(cell, ns))
    else:
        rows = [cell(n) for n in ns]
    return ErrorReport(rows)


def samples_for(ctx: MeasureContext, f: BandSignal):
    """Sampler closure for ``reconstruct_translated``."""
    return lambda js: average_samples(ctx, f, js)
