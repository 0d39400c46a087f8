"""Minimal-norm smooth extension of 1/W beyond the band.

On ``[delta, 2pi - delta]`` the kernel spectrum is written as
``psi(t)`` with ``t = (2pi - delta - xi) / (2pi - 2delta)``. ``psi`` vanishes
to order k at t = 0, matches the derivatives of 1/W at t = 1, and its k-th
derivative ``g(t) = sum c_j t^j`` has the least L2 norm on [0, 1] among all
such extensions. ``c`` solves the Hilbert system ``H_k c = q``, done here in
exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import OrderTooLarge, OutOfDomain
from .measures import MeasureContext, inverse_w_derivatives, w_value

MAX_ORDER = 12


def _check_order(k):
    if not 1 <= k <= MAX_ORDER:
        raise OrderTooLarge(f"k must lie in [1, {MAX_ORDER}], got {k}")


@dataclass(frozen=True)
class RationalMatrix:
    """Square matrix of exact rationals, stored row-major as tuples."""

    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self):
        return len(self.entries)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            cols = list(zip(*other.entries))
            return RationalMatrix(
                tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.entries)
            )
        vec = list(other)
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def __eq__(self, other):
        if isinstance(other, RationalMatrix):
            return self.entries == other.entries
        return [list(r) for r in self.entries] == [list(r) for r in other]

    def __hash__(self):
        return hash(self.entries)

    def to_float(self):
        return np.array([[float(v) for v in row] for row in self.entries])

    @classmethod
    def identity(cls, k):
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)))


def hilbert_matrix(k: int) -> RationalMatrix:
    """``H_k(i, j) = 1 / (i + j + 1)``, zero-based."""
    return RationalMatrix(tuple(tuple(Fraction(1, i + j + 1) for j in range(k)) for i in range(k)))


def hilbert_inverse(k: int) -> RationalMatrix:
    """Exact inverse of ``H_k`` from its closed-form integer entries."""
    _check_order(k)
    C = math.comb
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            v = (-1) ** (i + j) * (i + j + 1) * C(k + i, k - j - 1) * C(k + j, k - i - 1) * C(i + j, i) ** 2
            row.append(Fraction(v))
        rows.append(tuple(row))
    return RationalMatrix(tuple(rows))


def inv_w_derivatives(ctx: MeasureContext, k: int) -> np.ndarray:
    """``d_j = (1/W)^(j)(delta)`` for ``j = 0..k-1``."""
    _check_order(k)
    return inverse_w_derivatives(ctx, k - 1, ctx.delta)


def boundary_to_moments(dprime, k: int):
    """Moments ``q_j = int_0^1 psi^(k)(t) t^j dt`` from ``d'_j = psi^(j)(1)``.

    Repeated integration by parts gives
    ``q_j = d'_{k-1} + sum_{l=1}^{j} (-1)^l j!/(j-l)! d'_{k-l-1}``.
    Exact when given Fractions; otherwise floats.
    """
    dprime = list(dprime)
    if len(dprime) != k:
        raise ValueError(f"expected {k} boundary values, got {len(dprime)}")
    q = []
    for j in range(k):
        acc = dprime[k - 1]
        for l in range(1, j + 1):
            acc = acc + (-1) ** l * math.perm(j, l) * dprime[k - l - 1]
        q.append(acc)
    return q


@dataclass(frozen=True)
class ExtensionPlan:
    ctx: MeasureContext
    k: int
    d: tuple[float, ...]
    dprime: tuple[float, ...]
    q: tuple[float, ...]
    c: tuple  # exact Fractions from the rational solve
    vk: float
    quad_form: float  # q^T H_k^{-1} q, exact value rounded once

    @property
    def delta(self):
        return self.ctx.delta

    @property
    def c_float(self):
        return tuple(float(v) for v in self.c)

    @property
    def width(self):
        """Length ``2pi - 2delta`` of the extension interval."""
        return 2 * math.pi - 2 * self.ctx.delta

    @property
    def support(self):
        return 2 * math.pi - self.ctx.delta


def build_plan(ctx: MeasureContext, k: int) -> ExtensionPlan:
    _check_order(k)
    width = 2 * math.pi - 2 * ctx.delta
    d = inv_w_derivatives(ctx, k)
    dprime = [(-1) ** j * width**j * float(d[j]) for j in range(k)]
    q_exact = boundary_to_moments([Fraction(v) for v in dprime], k)
    c_exact = hilbert_inverse(k) @ q_exact
    quad = sum(a * b for a, b in zip(q_exact, c_exact))
    vk = math.sqrt(float(quad)) / width ** (k - 1)
    return ExtensionPlan(
        ctx=ctx,
        k=k,
        d=tuple(float(v) for v in d),
        dprime=tuple(dprime),
        q=tuple(float(v) for v in q_exact),
        c=tuple(c_exact),
        vk=vk,
        quad_form=float(quad),
    )


def _psi(plan: ExtensionPlan, t):
    """``psi(t) = t^k sum_j c_j j!/(j+k)! t^j`` by Horner."""
    k = plan.k
    coef = [cj * math.factorial(j) / math.factorial(j + k) for j, cj in enumerate(plan.c_float)]
    acc = np.zeros_like(t)
    for a in reversed(coef):
        acc = acc * t + a
    return acc * t**k


def extension_coordinate(plan: ExtensionPlan, xi):
    return (plan.support - np.abs(xi)) / plan.width


def phi_hat(plan: ExtensionPlan, xi):
    """Spectrum of the reconstruction kernel: 1/W on the band, psi outside."""
    xi_arr = np.abs(np.asarray(xi, dtype=float))
    out = np.zeros_like(xi_arr)
    band = xi_arr <= plan.delta
    outer = (~band) & (xi_arr < plan.support)
    if np.any(band):
        out[band] = 1.0 / w_value(plan.ctx, xi_arr[band])
    if np.any(outer):
        out[outer] = _psi(plan, extension_coordinate(plan, xi_arr[outer]))
    return out if out.ndim else float(out)


def psi_derivative_exact(plan: ExtensionPlan, order: int, t) -> float:
    """``psi^(order)(t)`` in rational arithmetic.

    ``psi^(m)(t) = sum_j c_j j!/(j+k-m)! t^(j+k-m)`` for ``m <= k``.
    """
    k = plan.k
    if not 0 <= order <= k:
        raise ValueError(f"derivative order must lie in [0, {k}]")
    tq = Fraction(float(t))
    total = Fraction(0)
    for j, cj in enumerate(plan.c):
        p = j + k - order
        total += Fraction(cj) * Fraction(math.factorial(j), math.factorial(p)) * tq**p
    return float(total)


def phi_hat_derivative(plan: ExtensionPlan, order: int, xi: float) -> float:
    """``order``-th derivative of the outer polynomial piece at ``xi``."""
    if not 0 <= order <= plan.k:
        raise ValueError(f"derivative order must lie in [0, {plan.k}]")
    lo, hi = plan.delta, plan.support
    slack = 1e-12 * hi
    if not lo - slack <= xi <= hi + slack:
        raise OutOfDomain(f"xi={xi} outside [{lo}, {hi}]")
    t = min(max((hi - xi) / plan.width, 0.0), 1.0)
    return (-1.0 / plan.width) ** order * psi_derivative_exact(plan, order, t)


def moment_polynomial(plan: ExtensionPlan, t):
    """``g(t) = psi^(k)(t) = sum c_j t^j`` (float Horner)."""
    acc = np.zeros_like(np.asarray(t, dtype=float))
    for cj in reversed(plan.c_float):
        acc = acc * t + cj
    return acc
