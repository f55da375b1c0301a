import numpy as np
import pytest

from biharm.algebra import BElement, inv, mul
from biharm.conformal import BoundaryChart, polynomial_map, quad_nodes, s_to_theta
from biharm.kernels import (KernelValue, grid_kernels, k1_eval, k1_infinity, k2_eval, k2_infinity,
                            k_diagonal, kernel_row, kernel_value, weighted_kernels, weighted_row)

from oracles import kernel_direct, kernel_mp, richardson_limit


def direct(chart, t, s):
    sig = chart.map
    return kernel_direct(lambda T: sig(T), lambda T: sig(T, 1), t, s)


GENERAL = [1.0, 0.08 + 0.03j, 0.05, -0.02j]


@pytest.fixture(scope="module")
def general_chart():
    # no rotational symmetry, nonzero even and odd terms
    return BoundaryChart(polynomial_map(GENERAL))


def test_identity_examples(disk_chart):
    assert k1_eval(disk_chart, 0, 1) == pytest.approx(0.5j, abs=1e-15)
    assert k2_eval(disk_chart, 0, 1) == pytest.approx(-0.25j, abs=1e-15)
    assert k1_eval(disk_chart, 0, 0) == pytest.approx(1j, abs=1e-15)
    assert k2_eval(disk_chart, 0, 0) == pytest.approx(0.5, abs=1e-15)
    assert k1_eval(disk_chart, np.inf, 0) == pytest.approx(1j, abs=1e-15)
    assert k1_infinity(disk_chart, 0) == pytest.approx(1j, abs=1e-15)


@pytest.mark.parametrize("t", [-2.3, -0.4, 0.0, 0.9, 3.7])
def test_diagonal_against_richardson(general_chart, poly_chart, disk_chart, t):
    for chart in (general_chart, poly_chart, disk_chart):
        k1, k2 = k_diagonal(chart, t)
        r1 = richardson_limit(lambda s: direct(chart, t, s)[0], t)
        r2 = richardson_limit(lambda s: direct(chart, t, s)[1], t)
        assert abs(k1 - r1) < 1e-8
        assert abs(k2 - r2) < 1e-8


@pytest.mark.parametrize("t", [-1.5, 0.3, 2.0])
def test_two_sided_limits_agree(t):
    for h in (1e-12, 1e-14):
        left = np.array(kernel_mp(GENERAL, t, t - h))
        right = np.array(kernel_mp(GENERAL, t, t + h))
        assert np.all(np.abs(left - right) < 1e-8)


def test_diagonal_continuity_order(general_chart):
    t = 0.6
    k1d, k2d = k_diagonal(general_chart, t)
    hs = np.array([1e-2, 1e-3, 1e-4])
    e = np.array([abs(kernel_value(general_chart, t, t + h).k1 - k1d) +
                  abs(kernel_value(general_chart, t, t + h).k2 - k2d) for h in hs])
    assert np.all(np.diff(e) < 0)
    order = np.log10(e[:-1] / e[1:])
    assert np.all(order > 0.9)


@pytest.mark.parametrize("frac", [1e-9, 5e-7, 0.9e-6, 1.1e-6, 1e-5, 1e-3])
def test_close_pairs_against_extended_precision(general_chart, frac):
    """Both sides of the near-diagonal switch agree with a 40-digit reference."""
    for t in (-0.7, 1.2):
        s = t + frac * (1 + abs(t))
        kv = kernel_value(general_chart, t, s)
        r1, r2 = kernel_mp(GENERAL, t, s)
        assert abs(kv.k1 - r1) < 1e-9
        assert abs(kv.k2 - r2) < 1e-9


def test_generic_matches_direct_formula(general_chart, rng):
    for t, s in rng.normal(scale=2, size=(50, 2)):
        kv = kernel_value(general_chart, t, s)
        d1, d2 = direct(general_chart, t, s)
        assert abs(kv.k1 - d1) < 1e-12 * max(1, abs(d1))
        assert abs(kv.k2 - d2) < 1e-12 * max(1, abs(d2))


def test_algebraic_reconstruction(general_chart, rng):
    """(tau~(s) - tau~(t))^-1 tau~'(s) minus the scalar Cauchy part is k1 e1 + i rho k2."""
    chart = general_chart
    for t, s in rng.normal(scale=2, size=(100, 2)):
        if abs(s - t) < 1e-3:
            continue
        ts, tt = complex(chart.tau(s)), complex(chart.tau(t))
        dts = complex(chart.tau_prime(s))
        diff = BElement(ts.real - tt.real, ts.imag - tt.imag)
        lhs = mul(inv(diff), BElement(dts.real, dts.imag))
        lhs = lhs - BElement((1 + s * t) / ((s - t) * (s * s + 1)), 0)
        rhs = kernel_value(chart, t, s).as_belement()
        assert (lhs - rhs).norm() <= 1e-10 * max(1.0, rhs.norm())


def test_identity_map_closed_form(disk_chart, rng):
    s = rng.normal(scale=3, size=100)
    got = np.array([k1_eval(disk_chart, 0.0, v).imag for v in s])
    t = 0.0
    ref = ((t + 1j) / ((s + 1j) * (s - t))).imag
    assert np.max(np.abs(got - ref) / np.maximum(1, np.abs(ref))) <= 1e-12


@pytest.mark.parametrize("t", [-0.8, 0.0, 1.7])
def test_bounded_at_infinity(general_chart, t):
    for sign in (1, -1):
        a = [(s * s + 1) * np.array(direct(general_chart, t, sign * s)) for s in (1e3, 1e4, 1e6)]
        # three significant digits; the approach is O(1/s)
        assert np.all(np.abs(a[0] - a[2]) <= 5e-3 * np.abs(a[2]))
        assert np.all(np.abs(a[1] - a[2]) <= 5e-4 * np.abs(a[2]))


@pytest.mark.parametrize("t", [-0.8, 0.0, 1.7])
def test_infinity_column_limit(general_chart, t):
    """Weighted kernel at the s=inf node equals the large-s limit of (s^2+1) k_j / 2."""
    K1, K2 = weighted_kernels(general_chart, [s_to_theta(t)], [0.0])
    s = 1e6
    d1, d2 = direct(general_chart, t, s)
    assert abs(K1[0, 0] - (s * s + 1) * d1 / 2) < 1e-5
    assert abs(K2[0, 0] - (s * s + 1) * d2 / 2) < 1e-5


@pytest.mark.parametrize("s", [-3.0, -0.5, 0.0, 0.4, 2.5])
def test_infinity_row(general_chart, s):
    """k_j(inf, s) equals the limit of k_j(t, s) as t grows, from both directions."""
    for t in (1e7, -1e7):
        d1, d2 = direct(general_chart, t, s)
        assert abs(k1_infinity(general_chart, s) - d1) < 1e-5
        assert abs(k2_infinity(general_chart, s) - d2) < 1e-5


def test_infinity_row_matches_weighted_chart(general_chart):
    phis = np.linspace(0.1, 2 * np.pi - 0.1, 37)
    K1, K2 = weighted_kernels(general_chart, [0.0], phis)
    for p, w1, w2 in zip(phis, K1[0], K2[0]):
        s = -1 / np.tan(p / 2)
        q = (s * s + 1) / 2
        assert abs(k1_infinity(general_chart, s) * q - w1) < 1e-12
        assert abs(k2_infinity(general_chart, s) * q - w2) < 1e-12
    assert k1_infinity(general_chart, np.inf) == 0


def test_weighted_matches_scalar_kernels(general_chart, rng):
    th = rng.uniform(0.2, 6.0, size=5)
    ph = rng.uniform(0.2, 6.0, size=7)
    K1, K2 = weighted_kernels(general_chart, th, ph)
    for i, a in enumerate(th):
        for j, b in enumerate(ph):
            t, s = -1 / np.tan(a / 2), -1 / np.tan(b / 2)
            kv = kernel_value(general_chart, t, s)
            q = (s * s + 1) / 2
            assert abs(kv.k1 * q - K1[i, j]) < 1e-10 * max(1, abs(K1[i, j]))
            assert abs(kv.k2 * q - K2[i, j]) < 1e-10 * max(1, abs(K2[i, j]))


def test_grid_kernels_diagonal(general_chart):
    g = quad_nodes(general_chart, 32)
    K1, K2 = grid_kernels(g)
    for j in range(1, 32):
        k1, k2 = k_diagonal(general_chart, g.s[j])
        q = (g.s[j] ** 2 + 1) / 2
        assert abs(K1[j, j] - k1 * q) < 1e-10 * max(1, abs(k1 * q))
        assert abs(K2[j, j] - k2 * q) < 1e-10 * max(1, abs(k2 * q))
    assert np.all(np.isfinite(K1)) and np.all(np.isfinite(K2))


def test_kernel_row_and_weighted_row(disk_chart):
    g = quad_nodes(disk_chart, 8)
    row = kernel_row(disk_chart, 0.0, g)
    assert len(row) == 8
    w1, w2 = weighted_row(disk_chart, 0.0, g)
    for j in range(1, 8):
        q = (g.s[j] ** 2 + 1) / 2
        assert abs(row[j].k1 * q - w1[j]) < 1e-12
        assert abs(row[j].k2 * q - w2[j]) < 1e-12


def test_combinations():
    kv = KernelValue(0.5j, -0.25j)
    assert kv.a11 == pytest.approx(0.5)
    assert kv.a13 == kv.a31 == pytest.approx(0.5)
    assert kv.a33 == pytest.approx(0.5)
