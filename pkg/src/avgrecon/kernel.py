"""Time-domain reconstruction kernel phi and its decay diagnostics.

Fourier convention: ``fhat(xi) = (2pi)^-1/2 int f(x) exp(-i x xi) dx``. Since
``phi_hat`` is even and supported in ``[-(2pi - delta), 2pi - delta]``,

    phi(x) = sqrt(2/pi) * int_0^{2pi - delta} phi_hat(xi) cos(x xi) dxi.

All factors of sqrt(2 pi) live in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import QuadratureNotConverged
from .extension import ExtensionPlan, moment_polynomial, phi_hat
from .measures import inverse_w_derivatives
from .quadrature import panel_rule

NODES_PER_PANEL = 32
MAX_DOUBLINGS = 3
SQRT_2PI = math.sqrt(2 * math.pi)


def _panels_for(xmax):
    return max(4, 2 * math.ceil(abs(xmax)))


def _cosine_transform(plan: ExtensionPlan, xs, panels):
    pts_b, wts_b = panel_rule(0.0, plan.delta, panels, NODES_PER_PANEL)
    pts_o, wts_o = panel_rule(plan.delta, plan.support, panels, NODES_PER_PANEL)
    pts = np.concatenate([pts_b, pts_o])
    # band nodes sit strictly inside [0, delta], so phi_hat picks 1/W there
    wts = np.concatenate([wts_b, wts_o]) * phi_hat(plan, pts)
    return math.sqrt(2 / math.pi) * (np.cos(np.multiply.outer(xs, pts)) @ wts)


def phi_values(plan: ExtensionPlan, xs, quad_tol=1e-12):
    """phi at many points; certified by comparing against doubled panels."""
    if quad_tol < 1e-14:
        raise ValueError("quad_tol must be at least 1e-14")
    xs = np.asarray(xs, dtype=float)
    flat = xs.ravel()
    if flat.size == 0:
        return xs.copy()
    panels = _panels_for(np.max(np.abs(flat)))
    coarse = _cosine_transform(plan, flat, panels)
    for _ in range(MAX_DOUBLINGS):
        panels *= 2
        fine = _cosine_transform(plan, flat, panels)
        err = float(np.max(np.abs(fine - coarse)))
        if err <= quad_tol:
            return fine.reshape(xs.shape)
        coarse = fine
    raise QuadratureNotConverged(f"phi quadrature change {err:.3e} exceeds {quad_tol:.1e}")


def phi_value(plan: ExtensionPlan, x: float, quad_tol=1e-12) -> float:
    return float(phi_values(plan, np.array([x]), quad_tol)[0])


def _abs_integral(func, a, b, rel_tol, samples=4001):
    """``int_a^b |func|`` splitting at sign changes of a smooth ``func``."""
    grid = np.linspace(a, b, samples)
    vals = func(grid)
    cuts = [a]
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        cuts.append(brentq(lambda s: float(func(np.array([s]))[0]), grid[i], grid[i + 1], xtol=1e-15))
    cuts.append(b)

    def piecewise(panels):
        total = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi <= lo:
                continue
            p, w = panel_rule(lo, hi, panels, NODES_PER_PANEL)
            total += abs(float(np.dot(w, func(p))))
        return total

    coarse = piecewise(2)
    for panels in (4, 8, 16):
        fine = piecewise(panels)
        if abs(fine - coarse) <= rel_tol * max(abs(fine), 1e-300):
            return fine
        coarse = fine
    raise QuadratureNotConverged("absolute-value quadrature did not settle")


def band_l1_norm(plan: ExtensionPlan, order=None, rel_tol=1e-9) -> float:
    """``||(1/W)^(order)||_{L1[-delta, delta]}``, default order k."""
    m = plan.k if order is None else order
    if m == 0:
        func = lambda x: inverse_w_derivatives(plan.ctx, 0, x)[0]
    else:
        func = lambda x: inverse_w_derivatives(plan.ctx, m, x)[m]
    # |(1/W)^(m)| is even for every m
    return 2.0 * _abs_integral(func, 0.0, plan.delta, rel_tol)


def outer_l1_norm(plan: ExtensionPlan) -> float:
    """``||phi_hat^(k)||_{L1[delta, 2pi - delta]}``.

    With ``phi_hat^(k)(xi) = (-1/width)^k g(t)`` and ``dxi = width dt`` this is
    ``int_0^1 |g| / width^(k-1)``, integrated exactly between the real roots.
    """
    coeffs = np.array(plan.c_float)
    roots = np.roots(coeffs[::-1]) if len(coeffs) > 1 else np.array([])
    cuts = sorted({0.0, 1.0, *(float(r.real) for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1)})
    antider = np.concatenate([[0.0], coeffs / np.arange(1, len(coeffs) + 1)])
    prim = np.polynomial.polynomial.Polynomial(antider)
    total = sum(abs(prim(hi) - prim(lo)) for lo, hi in zip(cuts[:-1], cuts[1:]))
    return float(total) / plan.width ** (plan.k - 1)


def l1_norm_phik(plan: ExtensionPlan) -> float:
    """``||phi_hat^(k)||_{L1}`` over the whole support (both halves)."""
    return band_l1_norm(plan) + 2.0 * outer_l1_norm(plan)


def decay_envelope(l1k: float, k: int, u):
    """Upper bound ``||phi_hat^(k)||_1 / (sqrt(2pi) |u|^k)`` on ``|phi(u)|``."""
    return l1k / (SQRT_2PI * np.abs(u) ** k)


@dataclass
class KernelTable:
    """``phi(x - j)`` for every grid point x and ``j = -n..n``."""

    plan: ExtensionPlan
    grid: np.ndarray
    n: int
    values: np.ndarray
    quad_tol: float
    _l1k: float | None = field(default=None, repr=False)

    @classmethod
    def build(cls, plan: ExtensionPlan, grid, n: int, quad_tol=1e-12):
        grid = np.asarray(grid, dtype=float)
        js = np.arange(-n, n + 1)
        values = phi_values(plan, np.subtract.outer(grid, js), quad_tol)
        return cls(plan, grid, n, values, quad_tol)

    @property
    def offsets(self):
        return np.subtract.outer(self.grid, np.arange(-self.n, self.n + 1))

    @property
    def l1k(self):
        if self._l1k is None:
            self._l1k = l1_norm_phik(self.plan)
        return self._l1k


def tail_sum_bound(n: int, k: int) -> float:
    """``sum_{|j| > n} |x - j|^-2k <= (1 + 2n/(2k-1)) / n^(2k)`` for x in (0, 1)."""
    return (1 + 2 * n / (2 * k - 1)) / n ** (2 * k)


def tail_l2(table: KernelTable, x: float) -> float:
    """Certified upper bound on ``(sum_{|j| > n} phi(x - j)^2)^(1/2)``.

    Terms with ``n < |j| <= 4n`` are summed directly (each padded by the
    quadrature tolerance); beyond that the decay envelope and an integral
    comparison bound the rest.
    """
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    n, k = table.n, table.plan.k
    far = 4 * n
    js = np.concatenate([np.arange(-far, -n), np.arange(n + 1, far + 1)])
    near = np.abs(phi_values(table.plan, x - js, table.quad_tol)) + table.quad_tol
    m = float(far)
    remainder = 2 * (m ** (-2 * k) + m ** (1 - 2 * k) / (2 * k - 1))
    remainder *= table.l1k**2 / (2 * math.pi)
    return math.sqrt(float(np.dot(near, near)) + remainder)


def spectrum_table(plan: ExtensionPlan, xis):
    return np.asarray(phi_hat(plan, np.asarray(xis, dtype=float)))


def plancherel_check(plan: ExtensionPlan, half_width=60.0, points=6001, quad_tol=1e-10):
    """Return ``(int |phi|^2 over [-L, L], int |phi_hat|^2)``.

    Coarse: only meant to catch a wrong sqrt(2pi) factor.
    """
    x, w = panel_rule(0.0, half_width, points // NODES_PER_PANEL + 1, NODES_PER_PANEL)
    time_side = 2.0 * float(np.dot(w, phi_values(plan, x, quad_tol) ** 2))
    xi, v = panel_rule(0.0, plan.delta, 8, NODES_PER_PANEL)
    xo, vo = panel_rule(plan.delta, plan.support, 8, NODES_PER_PANEL)
    freq_side = 2.0 * (float(np.dot(v, phi_hat(plan, xi) ** 2)) + float(np.dot(vo, phi_hat(plan, xo) ** 2)))
    return time_side, freq_side
