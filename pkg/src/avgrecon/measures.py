"""Symmetric averaging measures and their characteristic function W.

A measure ``nu`` on ``[-sigma/2, sigma/2]`` defines the average samples
``mu_j(f) = int f(j + t) dnu(t)`` and the function
``W(xi) = int exp(i t xi) dnu(t)``, which is real because ``nu`` is symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    AsymmetricMeasure,
    BandwidthTooLarge,
    ConfigError,
    NegativeWeight,
    WeightsNotNormalized,
)
from .quadrature import gauss_legendre

ATOMS = "atoms"
UNIFORM = "uniform"

SYMMETRY_TOL = 1e-14
NORMALIZATION_TOL = 1e-14
DENSITY_NODES = 64


@dataclass(frozen=True)
class AveragingMeasure:
    """Either finitely many weighted atoms or the uniform density.

    ``positions`` and ``weights`` are empty for the uniform density. Exact
    rational inputs are kept in ``exact`` so configs like ``1/12`` survive
    intact; the float copies drive all numerics.
    """

    kind: str
    sigma: float
    positions: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()
    exact: tuple[tuple[Fraction, Fraction], ...] | None = None

    @classmethod
    def from_atoms(cls, atoms, sigma=None):
        """Build from ``(t, w)`` pairs; ``sigma`` defaults to ``2 max|t|``."""
        atoms = list(atoms)
        if not atoms:
            raise ConfigError("atom list is empty")
        exact = None
        if all(isinstance(v, (int, Fraction)) for pair in atoms for v in pair):
            exact = tuple(sorted((Fraction(t), Fraction(w)) for t, w in atoms))
        pairs = sorted((float(t), float(w)) for t, w in atoms)
        if sigma is None:
            sigma = 2.0 * max(abs(t) for t, _ in pairs)
        return cls(
            kind=ATOMS,
            sigma=float(sigma),
            positions=tuple(t for t, _ in pairs),
            weights=tuple(w for _, w in pairs),
            exact=exact,
        )

    @classmethod
    def uniform(cls, sigma):
        return cls(kind=UNIFORM, sigma=float(sigma))

    @classmethod
    def point_mass(cls):
        """The Dirac measure at 0: average sampling becomes point sampling."""
        return cls.from_atoms([(Fraction(0), Fraction(1))], sigma=0)

    @property
    def is_atomic(self):
        return self.kind == ATOMS

    def nodes_and_weights(self):
        """Positions and weights of a discrete rule integrating against nu.

        Atoms are returned as-is; the uniform density is replaced by its
        64-node Gauss-Legendre rule.
        """
        if self.is_atomic:
            return np.array(self.positions), np.array(self.weights)
        x, w = gauss_legendre(DENSITY_NODES)
        return 0.5 * self.sigma * x, 0.5 * w


def experiment1_measure():
    """Five atoms at 0, +-1/16, +-1/8 with weights 2/3 and 1/12; sigma = 1/4."""
    F = Fraction
    atoms = [
        (F(-1, 8), F(1, 12)),
        (F(-1, 16), F(1, 12)),
        (F(0), F(2, 3)),
        (F(1, 16), F(1, 12)),
        (F(1, 8), F(1, 12)),
    ]
    return AveragingMeasure.from_atoms(atoms, sigma=F(1, 4))


def experiment2_measure():
    """Three atoms at 0, +-1/4 with weights 3/4 and 1/8; sigma = 1/2."""
    F = Fraction
    atoms = [(F(-1, 4), F(1, 8)), (F(0), F(3, 4)), (F(1, 4), F(1, 8))]
    return AveragingMeasure.from_atoms(atoms, sigma=F(1, 2))


@dataclass(frozen=True)
class MeasureContext:
    """A validated measure paired with the band limit ``delta``."""

    measure: AveragingMeasure
    delta: float
    gamma: float

    @property
    def sigma(self):
        return self.measure.sigma


def _check_atoms(measure: AveragingMeasure):
    if any(w < 0 for w in measure.weights):
        raise NegativeWeight("atom weights must be nonnegative")
    if measure.exact is not None:
        total_ok = sum(w for _, w in measure.exact) == 1
    else:
        total_ok = abs(math.fsum(measure.weights) - 1.0) <= NORMALIZATION_TOL
    if not total_ok:
        raise WeightsNotNormalized(
            f"weights sum to {math.fsum(measure.weights)!r}, expected 1"
        )
    half = 0.5 * measure.sigma
    if any(abs(t) > half + SYMMETRY_TOL for t in measure.positions):
        raise ConfigError(f"atom outside [-sigma/2, sigma/2] with sigma={measure.sigma}")
    # positions are sorted, so reversing pairs each atom with its mirror
    pairs = list(zip(measure.positions, measure.weights))
    for (t, w), (s, v) in zip(pairs, reversed(pairs)):
        if abs(t + s) > SYMMETRY_TOL or abs(w - v) > SYMMETRY_TOL:
            raise AsymmetricMeasure(f"atom ({t}, {w}) has no mirror image")


def validate_measure(measure: AveragingMeasure, delta: float) -> MeasureContext:
    """Check the measure against the band limit and compute gamma."""
    delta = float(delta)
    if not 0.0 < delta < math.pi:
        raise BandwidthTooLarge(f"delta must lie in (0, pi), got {delta}")
    if measure.sigma < 0:
        raise ConfigError("sigma must be nonnegative")
    if measure.is_atomic:
        _check_atoms(measure)
    elif measure.sigma <= 0:
        raise ConfigError("uniform density needs sigma > 0")
    if measure.sigma * delta >= math.pi:
        raise BandwidthTooLarge(
            f"sigma*delta = {measure.sigma * delta} violates sigma*delta < pi"
        )
    return MeasureContext(measure, delta, math.cos(0.5 * measure.sigma * delta))


def _rotated_cos(j, arg):
    # Re(i^j exp(i arg)) without evaluating cos(arg + j*pi/2)
    r = j % 4
    if r == 0:
        return np.cos(arg)
    if r == 1:
        return -np.sin(arg)
    if r == 2:
        return -np.cos(arg)
    return np.sin(arg)


def w_derivative(ctx: MeasureContext, order: int, xi):
    """j-th derivative of W at ``xi`` (scalar or array).

    ``W^(j)(xi) = Re int (i t)^j exp(i t xi) dnu(t)``.
    """
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    t, w = ctx.measure.nodes_and_weights()
    xi_arr = np.asarray(xi, dtype=float)
    arg = np.multiply.outer(xi_arr, t)
    vals = (_rotated_cos(order, arg) * (w * t**order)).sum(axis=-1)
    if np.ndim(xi) == 0:
        return float(vals)
    return vals


def w_value(ctx: MeasureContext, xi):
    return w_derivative(ctx, 0, xi)


def w_derivatives(ctx: MeasureContext, max_order: int, xi) -> np.ndarray:
    """Stack of ``W^(0..max_order)(xi)``, first axis is the order."""
    return np.array([w_derivative(ctx, j, xi) for j in range(max_order + 1)])


def inverse_w_derivatives(ctx: MeasureContext, max_order: int, xi) -> np.ndarray:
    """Derivatives of ``h = 1/W`` up to ``max_order`` via the Leibniz rule.

    Differentiating ``h W = 1`` k times gives
    ``h^(k) = -(1/W) sum_{j<k} C(k, j) h^(j) W^(k-j)``.
    """
    wd = w_derivatives(ctx, max_order, xi)
    h = np.empty_like(wd)
    h[0] = 1.0 / wd[0]
    for k in range(1, max_order + 1):
        acc = np.zeros_like(wd[0])
        for j in range(k):
            acc = acc + math.comb(k, j) * h[j] * wd[k - j]
        h[k] = -acc / wd[0]
    return h


def parse_number(text) -> Fraction:
    """Parse ``"1/12"``, ``"0.25"`` or ``"-3"`` exactly."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def measure_from_spec(atoms: Sequence | None = None, sigma=None, uniform=False):
    """Measure from config-style values (strings allowed, parsed exactly)."""
    if uniform:
        if sigma is None:
            raise ConfigError("uniform measure requires sigma")
        return AveragingMeasure.uniform(float(parse_number(sigma)))
    if not atoms:
        raise ConfigError("measure needs atoms or uniform = true")
    parsed = []
    for pair in atoms:
        if len(pair) != 2:
            raise ConfigError(f"atom must be [t, w], got {pair!r}")
        parsed.append((parse_number(pair[0]), parse_number(pair[1])))
    sig = parse_number(sigma) if sigma is not None else None
    return AveragingMeasure.from_atoms(parsed, sigma=sig)
