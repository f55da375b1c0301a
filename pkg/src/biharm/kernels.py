"""Scalar kernels of the boundary integral system.

With ``tau`` the boundary parametrization in ``t``::

    k1(t, s) = tau'(s)/(tau(s) - tau(t)) - (1 + s t)/((s - t)(s^2 + 1))
    k2(t, s) = tau'(s) (tau2(s) - tau2(t)) / (2 (tau(s) - tau(t))^2)
               - tau2'(s) / (2 (tau(s) - tau(t)))

Both have removable singularities at ``s = t``.  For assembly the kernels
are used in weighted form ``K_j = k_j (s^2 + 1)/2`` on the angular chart,
where with ``f(phi) = sigma(exp(i phi))`` and ``D = f(phi) - f(theta)``::

    K1 = f'(phi)/D - cot((phi - theta)/2)/2
    K2 = f'(phi) Im D/(2 D^2) - Im f'(phi)/(2 D)

These are regular everywhere including ``theta = 0`` (the row ``t = inf``)
and ``phi = 0`` (the column ``s = inf``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import RHO, BElement
from .conformal import BoundaryChart, QuadratureGrid, cayley, s_to_theta

NEAR_DIAG = 1e-6


@dataclass(frozen=True)
class KernelValue:
    k1: complex
    k2: complex

    @property
    def a11(self) -> float:
        return self.k1.imag + 2 * self.k2.real

    @property
    def a13(self) -> float:
        return -2 * self.k2.imag

    @property
    def a31(self) -> float:
        return -2 * self.k2.imag

    @property
    def a33(self) -> float:
        return self.k1.imag - 2 * self.k2.real

    def as_belement(self) -> BElement:
        """``k1 e1 + i rho k2``."""
        return BElement(self.k1, 0.0) + RHO * (1j * self.k2)


# -- closed-form limits in the real-line chart ------------------------------

def k_diagonal(chart: BoundaryChart, t: float) -> tuple[complex, complex]:
    """``(k1(t, t), k2(t, t))`` for finite ``t``."""
    _, a, b, _ = chart.tau_derivatives(t)
    k1 = b / (2 * a) + t / (1 + t * t)
    k2 = (a.imag * b.real - a.real * b.imag) / (4 * a * a)
    return complex(k1), complex(k2)


def _k_near_diagonal(chart: BoundaryChart, t: float, h: float) -> tuple[complex, complex]:
    # first-order Taylor expansion in h = s - t
    _, a, b, c = chart.tau_derivatives(t)
    q = 1 + t * t
    k1 = b / (2 * a) + t / q + (c / (3 * a) - b * b / (4 * a * a) + (1 - t * t) / q**2) * h
    cross_b = a.imag * b.real - a.real * b.imag
    cross_c = a.real * c.imag - a.imag * c.real
    k2 = cross_b / (4 * a * a) - (2 * a * cross_c + 3 * b * cross_b) / (12 * a**3) * h
    return complex(k1), complex(k2)


def _k_infinity_row(chart: BoundaryChart, s: float) -> tuple[complex, complex]:
    """``k_j(inf, s)`` via difference quotients against ``sigma(1)``."""
    if np.isinf(s):
        return 0j, 0j
    sig = chart.map
    S = complex(cayley(s))
    d = complex(sig.divided_difference(S, 1.0))
    d2 = (d * (S - 1.0)).imag / (S - 1.0)
    dS = sig(S, 1)
    dS2 = chart.contour_d2(S)
    q = s * s + 1
    k1 = (-s * (dS - d) + 1j * dS) / (q * d)
    k2 = -(s - 1j) / (2 * q * d * d) * (dS * d2 - dS2 * d)
    return complex(k1), complex(k2)


def _k_generic(chart: BoundaryChart, t: float, s: float) -> tuple[complex, complex]:
    _, a = chart.tau_derivatives(s)[:2]
    D = complex(chart.tau_difference(s, t))
    k1 = a / D - (1 + s * t) / ((s - t) * (s * s + 1))
    k2 = a * D.imag / (2 * D * D) - a.imag / (2 * D)
    return complex(k1), complex(k2)


def kernel_value(chart: BoundaryChart, t: float, s: float) -> KernelValue:
    t = float(t)
    s = float(s)
    if np.isinf(t):
        return KernelValue(*_k_infinity_row(chart, s))
    if np.isinf(s):
        # both kernels decay like 1/s^2
        return KernelValue(0j, 0j)
    h = s - t
    if h == 0.0:
        return KernelValue(*k_diagonal(chart, t))
    if abs(h) < NEAR_DIAG * (1 + abs(t)):
        return KernelValue(*_k_near_diagonal(chart, t, h))
    return KernelValue(*_k_generic(chart, t, s))


def k1_eval(chart: BoundaryChart, t: float, s: float) -> complex:
    return kernel_value(chart, t, s).k1


def k2_eval(chart: BoundaryChart, t: float, s: float) -> complex:
    return kernel_value(chart, t, s).k2


def k1_infinity(chart: BoundaryChart, s: float) -> complex:
    return _k_infinity_row(chart, float(s))[0]


def k2_infinity(chart: BoundaryChart, s: float) -> complex:
    return _k_infinity_row(chart, float(s))[1]


# -- weighted kernels on the angular chart ----------------------------------

def weighted_kernels(chart: BoundaryChart, theta, phi):
    """``K_j(theta, phi) = k_j(t, s) (s^2 + 1)/2`` on arrays of targets/sources.

    Returns two complex arrays of shape ``(len(theta), len(phi))``.
    Coincident angles take the diagonal limits.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    f_t, fp_t, fpp_t = chart.f_derivatives(theta, 2)
    f_p, fp_p = chart.f_derivatives(phi, 1)
    return _weighted_from_samples(theta, f_t, fp_t, fpp_t, phi, f_p, fp_p)


def _weighted_from_samples(theta, f_t, fp_t, fpp_t, phi, f_p, fp_p):
    alpha = phi[None, :] - theta[:, None]
    diag = np.isclose(np.mod(alpha + np.pi, 2 * np.pi) - np.pi, 0.0, rtol=0, atol=1e-14)
    D = f_p[None, :] - f_t[:, None]
    D = np.where(diag, 1.0, D)
    with np.errstate(divide="ignore", invalid="ignore"):
        cot = 1.0 / np.tan(alpha / 2)
    cot = np.where(diag, 0.0, cot)
    fp = np.broadcast_to(fp_p[None, :], D.shape)
    K1 = fp / D - 0.5 * cot
    K2 = fp * D.imag / (2 * D * D) - fp.imag / (2 * D)
    if diag.any():
        r, _ = np.nonzero(diag)
        a = fp_t[r]
        b = fpp_t[r]
        K1[diag] = b / (2 * a)
        K2[diag] = (a.imag * b.real - a.real * b.imag) / (4 * a * a)
    return K1, K2


def grid_kernels(grid: QuadratureGrid):
    """Weighted kernel matrices on a grid; rows are targets, columns sources."""
    return _weighted_from_samples(grid.theta, grid.z, grid.fp, grid.fpp,
                                  grid.theta, grid.z, grid.fp)


def kernel_row(chart: BoundaryChart, t: float, grid: QuadratureGrid) -> list[KernelValue]:
    """Unweighted ``k_j(t, s_j)`` along one row, for inspection and export."""
    return [kernel_value(chart, t, s) for s in grid.s]


def weighted_row(chart: BoundaryChart, t: float, grid: QuadratureGrid):
    th = s_to_theta(t)
    K1, K2 = _weighted_from_samples(np.atleast_1d(th), *[np.atleast_1d(v) for v in chart.f_derivatives(th, 2)],
                                    grid.theta, grid.z, grid.fp)
    return K1[0], K2[0]
