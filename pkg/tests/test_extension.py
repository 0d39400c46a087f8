import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from avgrecon.errors import OrderTooLarge, OutOfDomain
from avgrecon.extension import (
    RationalMatrix,
    boundary_to_moments,
    build_plan,
    hilbert_inverse,
    hilbert_matrix,
    inv_w_derivatives,
    phi_hat,
    phi_hat_derivative,
)
from avgrecon.measures import w_derivative

PI = math.pi


def test_hilbert_inverse_small():
    assert hilbert_inverse(1) == [[1]]
    assert hilbert_inverse(2) == [[4, -6], [-6, 12]]
    assert hilbert_inverse(3) == [[9, -36, 30], [-36, 192, -180], [30, -180, 180]]


def _gauss_jordan_inverse(k):
    # independent exact inversion
    a = [[Fraction(1, i + j + 1) for j in range(k)] + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for col in range(k):
        piv = a[col][col]
        a[col] = [v / piv for v in a[col]]
        for r in range(k):
            if r != col and a[r][col] != 0:
                fac = a[r][col]
                a[r] = [x - fac * y for x, y in zip(a[r], a[col])]
    return [row[k:] for row in a]


@pytest.mark.parametrize("k", [4, 7, 12])
def test_closed_form_matches_elimination(k):
    assert hilbert_inverse(k) == _gauss_jordan_inverse(k)


def test_order_cap():
    with pytest.raises(OrderTooLarge):
        hilbert_inverse(13)


def test_moments_k2():
    a, b = Fraction(3, 7), Fraction(-2, 5)
    assert boundary_to_moments([a, b], 2) == [b, b - a]
    assert boundary_to_moments([1.5], 1) == [1.5]


def test_moments_against_polynomial_oracle(rng):
    for _ in range(30):
        k = int(rng.integers(1, 7))
        top = Polynomial(rng.uniform(-1, 1, size=k))  # psi^(k), degree k-1
        psi = top.integ(k, lbnd=0)  # zero data at t = 0
        dprime = [psi.deriv(j)(1.0) if j else psi(1.0) for j in range(k)]
        q = boundary_to_moments(dprime, k)
        for j in range(k):
            exact = (top * Polynomial([0] * j + [1])).integ(1, lbnd=0)(1.0)
            assert abs(q[j] - exact) <= 1e-12


def test_d_values(exp2_ctx, point_ctx):
    assert inv_w_derivatives(exp2_ctx, 1)[0] == pytest.approx(1.0193993, abs=1e-7)
    assert list(inv_w_derivatives(point_ctx, 4)) == [1.0, 0.0, 0.0, 0.0]
    d = inv_w_derivatives(exp2_ctx, 3)
    h = 1e-4
    inv = lambda x: 1 / w_derivative(exp2_ctx, 0, x)
    fd2 = (inv(PI / 2 + h) - 2 * inv(PI / 2) + inv(PI / 2 - h)) / h**2
    assert d[2] == pytest.approx(fd2, rel=1e-5)


def test_plan_k1(exp2_ctx):
    plan = build_plan(exp2_ctx, 1)
    assert plan.c_float == (plan.q[0],)
    assert plan.vk == pytest.approx(abs(plan.q[0]), rel=1e-15)


def test_plan_k2_residual(exp2_ctx):
    plan = build_plan(exp2_ctx, 2)
    h = hilbert_matrix(2).to_float()
    assert np.linalg.norm(h @ np.array(plan.c_float) - np.array(plan.q)) <= 1e-14


def test_plan_invariants(exp1_ctx):
    for k in range(1, 9):
        plan = build_plan(exp1_ctx, k)
        assert plan.vk >= 0
        lhs = plan.vk**2 * plan.width ** (2 * (k - 1))
        assert lhs == pytest.approx(plan.quad_form, rel=1e-10)
        assert all(isinstance(v, Fraction) for v in plan.c)


def test_point_mass_plan(point_ctx):
    for k in range(1, 6):
        plan = build_plan(point_ctx, k)
        assert plan.dprime == (1.0,) + (0.0,) * (k - 1)
        assert phi_hat(plan, 0.3) == 1.0


def test_phi_hat_shape(exp2_ctx):
    plan = build_plan(exp2_ctx, 3)
    assert phi_hat(plan, 0.0) == 1.0
    assert phi_hat(plan, plan.support) == 0.0
    assert phi_hat(plan, plan.support + 0.1) == 0.0
    xi = np.linspace(-6, 6, 301)
    assert np.array_equal(phi_hat(plan, xi), phi_hat(plan, -xi))
    # continuity across delta
    just_out = phi_hat(plan, np.nextafter(plan.delta, 10))
    assert just_out == pytest.approx(plan.d[0], rel=1e-10)


def test_phi_hat_derivatives(exp2_ctx):
    for k in (1, 2, 4):
        plan = build_plan(exp2_ctx, k)
        assert phi_hat_derivative(plan, 0, plan.support) == 0.0
        assert phi_hat_derivative(plan, k - 1, plan.delta) == pytest.approx(plan.d[k - 1], rel=1e-9)
    plan = build_plan(exp2_ctx, 3)
    h = 1e-5
    fd = (phi_hat(plan, PI + h) - phi_hat(plan, PI - h)) / (2 * h)
    assert phi_hat_derivative(plan, 1, PI) == pytest.approx(fd, rel=1e-6)
    with pytest.raises(OutOfDomain):
        phi_hat_derivative(plan, 0, 0.5)


def test_phi_hat_kth_derivative_is_minimizer(exp2_ctx):
    # order k gives (-1)^k / width^k * sum c_j t^j
    plan = build_plan(exp2_ctx, 3)
    xi = 3.7
    t = (plan.support - xi) / plan.width
    want = (-1) ** 3 / plan.width**3 * sum(c * t**j for j, c in enumerate(plan.c_float))
    assert phi_hat_derivative(plan, 3, xi) == pytest.approx(want, rel=1e-12)
