"""Independent checks of the kernel construction and of the error analysis.

Each check returns an OracleReport; none of them raise on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .extension import (
    ExtensionPlan,
    hilbert_matrix,
    moment_polynomial,
    phi_hat,
    phi_hat_derivative,
)
from .kernel import band_l1_norm, l1_norm_phik
from .measures import MeasureContext, w_value
from .quadrature import panel_rule
from .reconstruct import (
    ReconstructionConfig,
    beta_constant,
    build_plan,
    choose_k,
    measured_error,
)
from .signals import BandSignal, signal_norm

SILVER = 1 + math.sqrt(2)


@dataclass(frozen=True)
class OracleReport:
    name: str
    passed: bool
    residual: float
    tolerance: float
    params: dict = field(default_factory=dict)

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        extra = " ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{flag} {self.name} residual={self.residual:.3e} tol={self.tolerance:.1e} {extra}".rstrip()


def _report(name, residual, tol, **params):
    residual = float(residual)
    return OracleReport(name, bool(residual <= tol), residual, tol, params)


def _plan_params(plan):
    return {"delta": round(plan.delta, 6), "sigma": plan.ctx.sigma, "k": plan.k}


def check_dual_identity(plan: ExtensionPlan, grid_size=1001, tol=1e-12) -> OracleReport:
    """``max |phi_hat W - 1|`` over a uniform grid on [-delta, delta]."""
    if grid_size < 11:
        raise ValueError("grid_size must be at least 11")
    xi = np.linspace(-plan.delta, plan.delta, grid_size)
    res = np.max(np.abs(phi_hat(plan, xi) * w_value(plan.ctx, xi) - 1.0))
    return _report("dual_identity", res, tol, **_plan_params(plan))


def check_gluing(plan: ExtensionPlan, rel_tol=1e-9, abs_floor=1e-12) -> OracleReport:
    """Outer-piece derivatives 0..k-1 at delta against ``d_j``.

    Relative error, except where ``d_j == 0`` (then absolute against
    ``abs_floor``, reported in units of ``rel_tol``).
    """
    worst = 0.0
    for j in range(plan.k):
        got = phi_hat_derivative(plan, j, plan.delta)
        want = plan.d[j]
        if want != 0:
            worst = max(worst, abs(got - want) / abs(want))
        else:
            worst = max(worst, abs(got) / abs_floor * rel_tol)
    return _report("gluing_at_delta", worst, rel_tol, **_plan_params(plan))


def check_support(plan: ExtensionPlan, tol=1e-12) -> OracleReport:
    """Derivatives 0..k-1 vanish at ``2pi - delta`` and beyond."""
    worst = max(abs(phi_hat_derivative(plan, j, plan.support)) for j in range(plan.k))
    beyond = np.abs(phi_hat(plan, plan.support + np.array([0.0, 1e-9, 0.5, 3.0])))
    worst = max(worst, float(np.max(beyond)))
    return _report("vanishing_at_support", worst, tol, **_plan_params(plan))


def check_continuity(plan: ExtensionPlan, tol=1e-10) -> OracleReport:
    """Evaluation path: ``phi_hat`` just outside the band equals ``1/W(delta)``."""
    eps = 1e-13 * plan.delta
    outside = phi_hat(plan, plan.delta * (1 + 1e-15) + eps)
    res = abs(outside - 1.0 / w_value(plan.ctx, plan.delta))
    return _report("continuity_at_delta", res, tol, **_plan_params(plan))


def check_moments(plan: ExtensionPlan, tol=1e-10) -> OracleReport:
    """Relative residual of ``H_k c = q`` in floating point."""
    h = hilbert_matrix(plan.k).to_float()
    q = np.array(plan.q)
    res = np.linalg.norm(h @ np.array(plan.c_float) - q) / max(np.linalg.norm(q), 1e-300)
    return _report("hilbert_residual", res, tol, **_plan_params(plan))


def check_moment_recovery(plan: ExtensionPlan, tol=1e-10) -> OracleReport:
    """Moments ``int_0^1 g t^j`` by quadrature against ``q_j`` (relative)."""
    t, w = panel_rule(0.0, 1.0, 4, 32)
    g = moment_polynomial(plan, t)
    mom = np.array([np.dot(w, g * t**j) for j in range(plan.k)])
    q = np.array(plan.q)
    res = np.max(np.abs(mom - q)) / max(np.max(np.abs(q)), 1e-300)
    return _report("moment_recovery", res, tol, **_plan_params(plan))


def check_vk(plan: ExtensionPlan, tol=1e-8) -> OracleReport:
    """``V_k`` against ``sqrt(2pi - 2delta) ||phi_hat^(k)||_{L2[delta, 2pi-delta]}``."""
    xi, w = panel_rule(plan.delta, plan.support, 8, 32)
    t = (plan.support - xi) / plan.width
    deriv = (-1.0 / plan.width) ** plan.k * moment_polynomial(plan, t)
    numeric = math.sqrt(plan.width) * math.sqrt(float(np.dot(w, deriv**2)))
    res = abs(numeric - plan.vk) / max(plan.vk, 1e-300)
    return _report("vk_consistency", res, tol, **_plan_params(plan))


def _random_orthogonal_polynomial(rng, k, extra=4):
    """Exact rational coefficients of a polynomial of degree < k + extra with
    vanishing moments against ``1, t, ..., t^(k-1)`` on [0, 1]."""
    deg = k + extra
    a = [Fraction(int(v), 1000) for v in rng.integers(-1000, 1001, size=deg)]
    # moments m_j = sum_i a_i / (i + j + 1); subtract the projection b = H_k^{-1} m
    m = [sum(a[i] * Fraction(1, i + j + 1) for i in range(deg)) for j in range(k)]
    from .extension import hilbert_inverse

    b = hilbert_inverse(k) @ m
    return [a[i] - (b[i] if i < k else 0) for i in range(deg)]


def check_optimality(plan: ExtensionPlan, rng, trials=20, tol=1e-12) -> OracleReport:
    """Feasible competitors ``g + h`` never have a smaller L2[0, 1] norm.

    ``h`` has zero moments against ``t^j`` for ``j < k``; norms are taken by
    Gauss-Legendre quadrature, independent of the Hilbert algebra.
    """
    t, w = panel_rule(0.0, 1.0, 4, 32)
    g = moment_polynomial(plan, t)
    g_norm = math.sqrt(float(np.dot(w, g * g)))
    worst = -math.inf
    for _ in range(trials):
        coeffs = _random_orthogonal_polynomial(rng, plan.k)
        h = np.polynomial.polynomial.polyval(t, [float(v) for v in coeffs])
        h_norm = math.sqrt(float(np.dot(w, h * h)))
        scale = 10.0 ** rng.uniform(-6, 0) * max(g_norm, 1.0) / max(h_norm, 1e-300)
        comp = g + scale * h
        decrease = g_norm - math.sqrt(float(np.dot(w, comp * comp)))
        worst = max(worst, decrease)
    return _report("optimality", max(worst, 0.0), tol, trials=trials, **_plan_params(plan))


def d_bound(ctx: MeasureContext, j: int) -> float:
    """``(sigma/2)^j j^j / gamma^(j+1)`` with ``0^0 = 1``."""
    return (ctx.sigma / 2) ** j * (j**j if j else 1) / ctx.gamma ** (j + 1)


def check_d_bound(plan: ExtensionPlan) -> OracleReport:
    """``|d_j| <= (sigma/2)^j j^j / gamma^(j+1)``; residual is the worst excess."""
    excess = max(abs(dj) - d_bound(plan.ctx, j) for j, dj in enumerate(plan.d))
    return _report("d_bound", max(excess, 0.0), 0.0, **_plan_params(plan))


def q_norm_bound(ctx: MeasureContext, k: int) -> float:
    """``2 sqrt(k) ((pi-delta) sigma)^(k-1) gamma^-k (k-1)^(k-1) (1 + gamma/(sigma(pi-delta)))^(k-1)``.

    Folded as ``(sigma(pi-delta) + gamma)^(k-1)`` so sigma = 0 is allowed.
    """
    g, s, d = ctx.gamma, ctx.sigma, ctx.delta
    km1 = (k - 1) ** (k - 1) if k > 1 else 1
    return 2 * math.sqrt(k) / g**k * km1 * (s * (math.pi - d) + g) ** (k - 1)


def check_q_norm(plan: ExtensionPlan) -> OracleReport:
    excess = np.linalg.norm(plan.q) - q_norm_bound(plan.ctx, plan.k)
    return _report("q_norm_bound", max(excess, 0.0), 0.0, **_plan_params(plan))


def jacobi_eigenvalues(matrix, dps=60, sweeps=100):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations at ``dps`` digits."""
    with mpmath.workdps(dps):
        a = mpmath.matrix(matrix)
        n = a.rows
        eps = mpmath.mpf(10) ** (-dps + 5)
        for _ in range(sweeps):
            off = mpmath.sqrt(sum(a[i, j] ** 2 for i in range(n) for j in range(n) if i != j))
            if off < eps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if a[p, q] == 0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2 * a[p, q])
                    sign = 1 if theta >= 0 else -1
                    t = sign / (abs(theta) + mpmath.sqrt(theta**2 + 1))
                    c = 1 / mpmath.sqrt(t**2 + 1)
                    s = t * c
                    for r in range(n):
                        arp, arq = a[r, p], a[r, q]
                        a[r, p] = c * arp - s * arq
                        a[r, q] = s * arp + c * arq
                    for r in range(n):
                        apr, aqr = a[p, r], a[q, r]
                        a[p, r] = c * apr - s * aqr
                        a[q, r] = s * apr + c * aqr
        return sorted(a[i, i] for i in range(n))


def hilbert_min_eigenvalue(k: int, dps=60):
    """``rho_min(H_k)`` as an mpf at ``dps`` digits."""
    entries = [[mpmath.mpf(v.numerator) / v.denominator for v in row] for row in hilbert_matrix(k).entries]
    with mpmath.workdps(dps):
        return jacobi_eigenvalues(entries, dps)[0]


def hilbert_constant_terms(k_max: int) -> list[float]:
    """``rho_min(H_k)^(-1/2) k^(1/4) (1+sqrt2)^(-2k)`` for k = 1..k_max."""
    if not 1 <= k_max <= 12:
        raise ValueError("k_max must lie in [1, 12]")
    out = []
    for k in range(1, k_max + 1):
        rho = hilbert_min_eigenvalue(k)
        with mpmath.workdps(60):
            term = rho ** mpmath.mpf(-0.5) * mpmath.mpf(k) ** mpmath.mpf(0.25) * (1 + mpmath.sqrt(2)) ** (-2 * k)
        out.append(float(term))
    return out


def hilbert_spectral_constant(k_max=12) -> OracleReport:
    """Empirical ``C_H`` as the maximum term over k <= k_max."""
    terms = hilbert_constant_terms(k_max)
    c_hat = max(terms)
    finite = all(math.isfinite(v) and v > 0 for v in terms)
    residual = 0.0 if finite else math.inf
    return OracleReport("hilbert_spectral_constant", finite, residual, 0.0, {"k_max": k_max, "C_H": c_hat, "terms": terms})


_C_HAT_CACHE: dict[int, float] = {}


def empirical_c_h(k_max=12) -> float:
    if k_max not in _C_HAT_CACHE:
        _C_HAT_CACHE[k_max] = max(hilbert_constant_terms(k_max))
    return _C_HAT_CACHE[k_max]


def proof_chain_links(plan: ExtensionPlan, c_hat=None) -> dict[str, tuple[float, float]]:
    """``{link: (lhs, rhs)}`` for the four inequalities bounding ``||phi_hat^(k)||_1``."""
    ctx, k = plan.ctx, plan.k
    c_hat = empirical_c_h() if c_hat is None else c_hat
    g, s, d = ctx.gamma, ctx.sigma, ctx.delta
    band = band_l1_norm(plan)
    band_rhs = 2 * d * (s / 2) ** k / g ** (k + 1) * k**k
    qnorm = float(np.linalg.norm(plan.q))
    quad_lhs = math.sqrt(plan.quad_form)
    quad_rhs = c_hat * k ** (-0.25) * SILVER ** (2 * k) * qnorm
    total = l1_norm_phik(plan)
    beta = beta_constant(ctx)
    bk = (beta * (k - 1)) ** (k - 1) if k > 1 else 1.0
    total_rhs = 8 * SILVER**2 * c_hat / g * k**0.25 * bk
    return {
        "band_l1": (band, band_rhs),
        "quadratic_form": (quad_lhs, quad_rhs),
        "q_norm": (qnorm, q_norm_bound(ctx, k)),
        "total_l1": (total, total_rhs),
    }


LINK_REL_TOL = 1e-12


def check_proof_chain(plan: ExtensionPlan, c_hat=None) -> OracleReport:
    """All four links must hold; residual = worst excess.

    At k = 1 the quadratic-form link is an identity when ``c_hat`` comes from
    k = 1, so each right side gets a 1e-12 relative allowance for rounding.
    """
    links = proof_chain_links(plan, c_hat)
    excess = max(lhs - rhs * (1 + LINK_REL_TOL) for lhs, rhs in links.values())
    slack = {name: rhs - lhs for name, (lhs, rhs) in links.items()}
    return _report("proof_chain", max(excess, 0.0), 0.0, **_plan_params(plan), slack=slack)


def check_partial_expansion(ctx: MeasureContext, f: BandSignal, n_list, plan=None, quad_tol=1e-12) -> OracleReport:
    """Truncation errors shrink with n and end below ``1e-3 ||f||``.

    With ``plan=None`` each n uses the rule-of-thumb k. Residual is the
    final error relative to ``||f||``.
    """
    norm = signal_norm(f)
    errs = []
    for n in n_list:
        cfg = ReconstructionConfig(ctx, n, quad_tol=quad_tol)
        p = plan if plan is not None else build_plan(ctx, choose_k(cfg))
        errs.append(measured_error(cfg, p, f))
    if norm == 0:
        return _report("partial_expansion", max(errs), 0.0, n=list(n_list))
    rel = errs[-1] / norm
    ok = rel <= 1e-3 and errs[-1] <= errs[0]
    return OracleReport("partial_expansion", bool(ok), rel, 1e-3, {"n": list(n_list), "errors": errs})


def plan_checks(plan: ExtensionPlan, rng=None) -> list[OracleReport]:
    rng = np.random.default_rng(0) if rng is None else rng
    return [
        check_dual_identity(plan),
        check_gluing(plan),
        check_support(plan),
        check_continuity(plan),
        check_moments(plan),
        check_moment_recovery(plan),
        check_vk(plan),
        check_optimality(plan, rng),
        check_d_bound(plan),
        check_q_norm(plan),
        check_proof_chain(plan),
    ]


def run_all(contexts, k_values=range(1, 6), seed=0) -> list[OracleReport]:
    """Every plan-level oracle for each (context, k), plus the Hilbert constant."""
    rng = np.random.default_rng(seed)
    reports = [hilbert_spectral_constant(12)]
    for ctx in contexts:
        for k in k_values:
            reports.extend(plan_checks(build_plan(ctx, k), rng))
    return reports
