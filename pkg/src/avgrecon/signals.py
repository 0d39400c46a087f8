"""Test functions in the Paley-Wiener space B_delta.

Signals are finite combinations of reproducing-kernel translates
``K(x - x_m)`` with ``K(u) = sin(delta u) / (pi u)``, so norms and inner
products have closed forms through the Gram matrix of the centers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DeltaMismatch, NegativeGram, UnsupportedMeasureKind
from .measures import MeasureContext

SERIES_CUTOFF = 1e-8


def band_kernel(delta, u):
    """``sin(delta u) / (pi u)``, filled with ``delta/pi`` near ``u = 0``."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < SERIES_CUTOFF
    safe = np.where(small, 1.0, u)
    out = np.sin(delta * safe) / (math.pi * safe)
    if np.any(small):
        z = (delta * u) ** 2
        series = (delta / math.pi) * (1 - z / 6 * (1 - z / 20 * (1 - z / 42)))
        out = np.where(small, series, out)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BandSignal:
    """``f(x) = sum_m a_m K(x - x_m)`` for the kernel of B_delta."""

    delta: float
    centers: tuple[float, ...] = ()
    coefficients: tuple[float, ...] = ()

    @classmethod
    def from_terms(cls, delta, terms):
        terms = [(float(x), float(a)) for x, a in terms]
        return cls(float(delta), tuple(x for x, _ in terms), tuple(a for _, a in terms))

    @classmethod
    def sinc_target(cls, delta):
        """``sin(delta x) / (pi x)``, the target function of both experiments."""
        return cls(float(delta), (0.0,), (1.0,))

    def __call__(self, x):
        return eval_signal(self, x)

    def scaled(self, factor):
        return BandSignal(self.delta, self.centers, tuple(factor * a for a in self.coefficients))

    def __add__(self, other):
        if other.delta != self.delta:
            raise DeltaMismatch("cannot add signals with different band limits")
        return BandSignal(
            self.delta,
            self.centers + other.centers,
            self.coefficients + other.coefficients,
        )

    def shifted(self, s):
        """The signal ``x -> f(x + s)``."""
        return BandSignal(self.delta, tuple(c - s for c in self.centers), self.coefficients)


def random_signal(rng: np.random.Generator, delta, max_terms=8, radius=5.0):
    """1 to ``max_terms`` terms, centers in [-radius, radius], coefficients in [-1, 1]."""
    m = int(rng.integers(1, max_terms + 1))
    centers = rng.uniform(-radius, radius, size=m)
    coeffs = rng.uniform(-1.0, 1.0, size=m)
    return BandSignal(float(delta), tuple(centers.tolist()), tuple(coeffs.tolist()))


def eval_signal(f: BandSignal, x):
    x_arr = np.asarray(x, dtype=float)
    if not f.centers:
        return np.zeros_like(x_arr) if x_arr.ndim else 0.0
    c = np.array(f.centers)
    a = np.array(f.coefficients)
    vals = band_kernel(f.delta, np.subtract.outer(x_arr, c)) @ a
    return vals if x_arr.ndim else float(vals)


def inner(f: BandSignal, g: BandSignal) -> float:
    """L2 inner product through the reproducing property ``<K_x, K_y> = K(x - y)``."""
    if f.delta != g.delta:
        raise DeltaMismatch("signals live in different spaces")
    if not f.centers or not g.centers:
        return 0.0
    gram = band_kernel(f.delta, np.subtract.outer(np.array(f.centers), np.array(g.centers)))
    return float(np.array(f.coefficients) @ gram @ np.array(g.coefficients))


def signal_norm(f: BandSignal) -> float:
    sq = inner(f, f)
    if sq < -1e-12:
        raise NegativeGram(f"Gram form is {sq}")
    return math.sqrt(max(sq, 0.0))


@dataclass(frozen=True)
class SampleVector:
    """Average samples ``mu_j(f)`` for ``j = -n..n``."""

    n: int
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != 2 * self.n + 1:
            raise ValueError("sample vector must have 2n+1 entries")

    def as_array(self):
        return np.array(self.values)

    @property
    def indices(self):
        return np.arange(-self.n, self.n + 1)


def _check_delta(ctx: MeasureContext, f: BandSignal):
    if f.delta != ctx.delta:
        raise DeltaMismatch(f"signal delta {f.delta} != context delta {ctx.delta}")


def average_samples(ctx: MeasureContext, f: BandSignal, js) -> np.ndarray:
    """Vectorized ``mu_j(f)`` over an array of integer positions."""
    _check_delta(ctx, f)
    t, w = ctx.measure.nodes_and_weights()
    js = np.asarray(js, dtype=float)
    return eval_signal(f, np.add.outer(js, t)) @ w


def average_sample(ctx: MeasureContext, f: BandSignal, j: int) -> float:
    return float(average_samples(ctx, f, np.array([j]))[0])


def collect_samples(ctx: MeasureContext, f: BandSignal, n: int) -> SampleVector:
    if n < 0:
        raise ValueError("n must be nonnegative")
    vals = average_samples(ctx, f, np.arange(-n, n + 1))
    return SampleVector(n, tuple(vals.tolist()))


def riesz_representer(ctx: MeasureContext, j: int) -> BandSignal:
    """``g_j`` with ``<f, g_j> = mu_j(f)``: kernel translates at ``j + t_m``."""
    m = ctx.measure
    if not m.is_atomic:
        raise UnsupportedMeasureKind("representers are only built for atomic measures")
    return BandSignal(ctx.delta, tuple(j + t for t in m.positions), tuple(m.weights))


def integer_sample_energy(f: BandSignal, n_max: int) -> float:
    """``sum_{|j| <= n_max} |f(j)|^2`` (Parseval partial sum)."""
    vals = eval_signal(f, np.arange(-n_max, n_max + 1, dtype=float))
    return float(np.dot(vals, vals))


def parseval_tail_estimate(f: BandSignal, n_max: int) -> float:
    """Leading-order size of ``sum_{|j| > n_max} |f(j)|^2``.

    For large ``|j|``, ``f(j) ~ (A sin(delta j) - B cos(delta j)) / (pi j)``
    with ``A = sum a_m cos(delta x_m)``, ``B = sum a_m sin(delta x_m)``; the
    non-oscillating part of the squared tail is
    ``(A^2 + B^2) / pi^2 * sum_{j > n_max} j^-2``. The neglected terms are
    ``O(n_max^-2)``.
    """
    if not f.centers:
        return 0.0
    c = np.array(f.centers)
    a = np.array(f.coefficients)
    amp2 = np.dot(a, np.cos(f.delta * c)) ** 2 + np.dot(a, np.sin(f.delta * c)) ** 2
    # sum_{j > N} 1/j^2 = 1/N - 1/(2N^2) + O(N^-3)
    tail = 1.0 / n_max - 0.5 / n_max**2
    return float(amp2 / math.pi**2 * tail)
