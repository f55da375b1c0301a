"""Conformal maps of the unit disk, the induced boundary chart, and grids.

The boundary is parametrized two ways.  The real-line chart uses
``t`` with ``T = (t - i)/(t + i)``; the angular chart uses ``theta`` with
``T = exp(i theta)``.  They are related by ``t = -cot(theta/2)``, so
``theta = 0`` is the point ``t = inf``.  All quadrature runs in the
angular chart, where nothing degenerates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import InvalidNodeCount, MapInvalid

SIGMA_PRIME_FLOOR = 1e-6
N_VALIDATE = 4096


@dataclass(frozen=True, eq=False)
class ConformalMap:
    """``sigma`` from the closed unit disk onto the closure of the domain.

    ``coefficients`` always holds the full power series ``sigma(T) =
    sum_k a_k T^k`` starting at ``k = 0`` (the constant term).  For the
    disk kind it is ``[center, radius]``.
    """

    kind: str
    coefficients: np.ndarray
    center: complex = 0j
    radius: float | None = None
    c1: float = float("nan")
    c2: float = float("nan")
    min_abs_derivative: float = float("nan")

    def derivative_coefficients(self, k: int) -> np.ndarray:
        return P.polyder(self.coefficients, k) if k else self.coefficients

    def __call__(self, T, k: int = 0):
        """``k``-th derivative of sigma at ``T`` (array friendly)."""
        c = self.derivative_coefficients(k)
        if c.size == 0:
            return np.zeros_like(np.asarray(T, dtype=complex))
        return P.polyval(np.asarray(T, dtype=complex), c)

    def divided_difference(self, S, T):
        """``(sigma(S) - sigma(T))/(S - T)`` without cancellation; ``sigma'(T)`` at ``S = T``."""
        S = np.asarray(S, dtype=complex)
        T = np.asarray(T, dtype=complex)
        h = np.ones(np.broadcast(S, T).shape, dtype=complex)  # sum_j S^j T^(k-1-j)
        Tk = np.ones_like(h)
        out = np.zeros_like(h)
        for c in self.coefficients[1:]:
            out = out + c * h
            Tk = Tk * T
            h = S * h + Tk
        return out

    def to_spec(self) -> dict:
        if self.kind == "disk":
            return {"kind": "disk", "radius": float(self.radius),
                    "center": [self.center.real, self.center.imag]}
        coefs = self.coefficients[1:]
        return {"kind": "polynomial",
                "coefficients": [[float(c.real), float(c.imag)] for c in coefs]}


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise MapInvalid(f"complex number must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _power_family(coefs: np.ndarray):
    """Return ``(c, m)`` if ``coefs`` (from T^1) is ``T + c T^m``, else None."""
    if coefs.size == 0 or coefs[0] != 1:
        return None
    nz = np.flatnonzero(coefs[1:]) + 2
    if nz.size == 0:
        return 0j, 1
    if nz.size == 1:
        m = int(nz[0])
        return complex(coefs[m - 1]), m
    return None


def _validate(full: np.ndarray) -> tuple[float, float, float]:
    """Sampled checks on the unit circle; returns (min|sigma'|, c1, c2)."""
    T = np.exp(2j * np.pi * np.arange(N_VALIDATE) / N_VALIDATE)
    d = P.polyval(T, P.polyder(full)) if full.size > 1 else np.zeros(N_VALIDATE, complex)
    dmin = float(np.abs(d).min())
    if not dmin >= SIGMA_PRIME_FLOOR:
        raise MapInvalid(f"sigma' nearly vanishes on the unit circle (min |sigma'| = {dmin:.3g})")
    # difference quotients on a coarser sample; off-diagonal pairs only
    m = 512
    S = T[:: N_VALIDATE // m]
    w = P.polyval(S, full)
    num = np.abs(w[:, None] - w[None, :])
    den = np.abs(S[:, None] - S[None, :])
    np.fill_diagonal(den, 1.0)
    q = num / den
    np.fill_diagonal(q, np.nan)
    c1 = float(np.nanmin(q))
    c2 = float(np.nanmax(q))
    # near-diagonal quotients tend to |sigma'|
    c1 = min(c1, dmin)
    c2 = max(c2, float(np.abs(d).max()))
    if not c1 > 0:
        raise MapInvalid("boundary map is not injective on the sampled circle")
    return dmin, c1, c2


def disk_map(center=0j, radius: float = 1.0) -> ConformalMap:
    center = _as_complex(center)
    radius = float(radius)
    if not (np.isfinite(radius) and radius > 0):
        raise MapInvalid(f"disk radius must be positive, got {radius}")
    full = np.array([center, radius], dtype=complex)
    dmin, c1, c2 = _validate(full)
    return ConformalMap("disk", full, center=center, radius=radius, c1=c1, c2=c2,
                        min_abs_derivative=dmin)


def polynomial_map(coefficients: Sequence) -> ConformalMap:
    """``sigma(T) = sum_{k>=1} coefficients[k-1] T^k``."""
    coefs = np.array([_as_complex(c) for c in coefficients], dtype=complex)
    if coefs.size == 0 or not np.all(np.isfinite(coefs)):
        raise MapInvalid("polynomial map needs finite coefficients starting at T^1")
    fam = _power_family(coefs)
    if fam is not None:
        c, m = fam
        if abs(c) * m >= 1:
            raise MapInvalid(f"T + c T^m requires |c|*m < 1 (|c|*m = {abs(c) * m!r})")
    else:
        full_d = P.polyder(np.concatenate([[0], coefs]))
        full_d = np.trim_zeros(full_d, "b")
        if full_d.size == 0:
            raise MapInvalid("constant map")
        if full_d.size > 1:
            roots = P.polyroots(full_d)
            if np.any(np.abs(roots) <= 1.0):
                raise MapInvalid("sigma' has a zero in the closed unit disk")
    full = np.concatenate([[0j], coefs])
    dmin, c1, c2 = _validate(full)
    return ConformalMap("polynomial", full, c1=c1, c2=c2, min_abs_derivative=dmin)


def power_map(c: complex, m: int) -> ConformalMap:
    """``sigma(T) = T + c T^m``."""
    coefs = [0j] * m
    coefs[0] = 1.0
    coefs[m - 1] += c
    return polynomial_map(coefs)


def make_map(spec) -> ConformalMap:
    if isinstance(spec, ConformalMap):
        return spec
    if not isinstance(spec, dict) or "kind" not in spec:
        raise MapInvalid(f"map spec must be a dict with a 'kind' field, got {spec!r}")
    kind = spec["kind"]
    if kind == "disk":
        return disk_map(spec.get("center", [0.0, 0.0]), spec.get("radius", 1.0))
    if kind == "polynomial":
        if "coefficients" not in spec:
            raise MapInvalid("polynomial map needs 'coefficients'")
        return polynomial_map(spec["coefficients"])
    raise MapInvalid(f"unknown map kind {kind!r}")


def sigma_eval(cmap: ConformalMap, T):
    return cmap(T), cmap(T, 1)


class TauValue(NamedTuple):
    tau: complex
    dtau: complex
    tau1: float
    tau2: float
    dtau1: float
    dtau2: float


def cayley(t):
    """``T = (t - i)/(t + i)`` with ``t = inf -> 1``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        T = (t - 1j) / (t + 1j)
    return np.where(np.isinf(t), 1.0 + 0j, T)


def s_to_theta(s):
    """Inverse of ``s = -cot(theta/2)``; ``theta`` in [0, 2 pi)."""
    s = np.asarray(s, dtype=float)
    th = 2.0 * np.arctan2(1.0, -s)
    return np.where(np.isinf(s), 0.0, th)


def theta_to_s(theta):
    theta = np.asarray(theta, dtype=float)
    with np.errstate(divide="ignore"):
        s = -1.0 / np.tan(theta / 2.0)
    return np.where(np.mod(theta, 2 * np.pi) == 0.0, np.inf, s)


@dataclass(frozen=True, eq=False)
class BoundaryChart:
    map: ConformalMap

    # real-line chart ------------------------------------------------------
    def tau(self, t):
        return self.map(cayley(t))

    def tau_difference(self, s, t):
        """``tau(s) - tau(t)`` for finite ``s, t``, accurate as ``s -> t``."""
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        ST = 2j * (s - t) / ((s + 1j) * (t + 1j))
        return ST * self.map.divided_difference(cayley(s), cayley(t))

    def tau_derivatives(self, t):
        """``(tau, tau', tau'', tau''')`` in ``t`` for finite ``t``."""
        t = np.asarray(t, dtype=float)
        T = (t - 1j) / (t + 1j)
        w = t + 1j
        d1 = 2j / w**2
        d2 = -4j / w**3
        d3 = 12j / w**4
        s0, s1, s2, s3 = (self.map(T, k) for k in range(4))
        return (s0, s1 * d1, s2 * d1**2 + s1 * d2,
                s3 * d1**3 + 3 * s2 * d1 * d2 + s1 * d3)

    def tau_prime(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            v = self.tau_derivatives(np.where(np.isinf(t), 0.0, t))[1]
        return np.where(np.isinf(t), 0j, v)

    # angular chart --------------------------------------------------------
    def f_derivatives(self, theta, order: int = 2):
        """``f(theta) = sigma(exp(i theta))`` and its first ``order`` derivatives."""
        S = np.exp(1j * np.asarray(theta, dtype=float))
        s = [self.map(S, k) for k in range(order + 1)]
        out = [s[0]]
        if order >= 1:
            out.append(1j * S * s[1])
        if order >= 2:
            out.append(-S * s[1] - S**2 * s[2])
        if order >= 3:
            out.append(-1j * S * s[1] - 3j * S**2 * s[2] - 1j * S**3 * s[3])
        return tuple(out)

    def contour_d2(self, S):
        """Derivative of ``Im sigma`` along the unit circle w.r.t. ``S``."""
        S = np.asarray(S, dtype=complex)
        ft = 1j * S * self.map(S, 1)
        return ft.imag / (1j * S)


def tau_eval(chart: BoundaryChart, t) -> TauValue:
    """Boundary point and derivative at ``t``; ``t = inf`` gives ``tau'(inf) = 0``."""
    t = float(t)
    tau = complex(chart.tau(t))
    dtau = complex(chart.tau_prime(t))
    return TauValue(tau, dtau, tau.real, tau.imag, dtau.real, dtau.imag)


@dataclass(eq=False)
class QuadratureGrid:
    """Uniform angular grid on the compactified real line.

    ``weights[j]`` realizes ``int f(s) ds ~ sum_j f(s_j) w_j`` with
    ``w_j = h (s_j^2 + 1)/2``; it is infinite at the node ``s = inf``,
    where callers must supply the finite limit of ``f (s^2+1)/2``.
    """

    chart: BoundaryChart
    n: int
    theta: np.ndarray = field(init=False)
    s: np.ndarray = field(init=False)
    h: float = field(init=False)
    weights: np.ndarray = field(init=False)
    z: np.ndarray = field(init=False, repr=False)
    fp: np.ndarray = field(init=False, repr=False)
    fpp: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n
        self.h = 2 * np.pi / n
        self.theta = self.h * np.arange(n)
        self.s = theta_to_s(self.theta)
        self.s[n // 2] = 0.0  # -cot(pi/2) is only zero up to rounding
        with np.errstate(invalid="ignore"):
            self.weights = self.h * (self.s**2 + 1) / 2
        self.z, self.fp, self.fpp = self.chart.f_derivatives(self.theta, 2)

    def integrate_ds(self, f_values, at_infinity: float = 0.0):
        """Trapezoid sum of ``int f ds``; ``at_infinity`` is ``lim f (s^2+1)/2``."""
        f_values = np.asarray(f_values)
        jac = self.weights[1:]
        return self.h * at_infinity + np.sum(f_values[1:] * jac)

    @property
    def tangent(self) -> np.ndarray:
        """Unit tangent at nodes (counter-clockwise), as complex numbers."""
        return self.fp / np.abs(self.fp)

    def perimeter(self) -> float:
        return float(self.h * np.abs(self.fp).sum())


def quad_nodes(chart: BoundaryChart, n: int) -> QuadratureGrid:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidNodeCount(f"node count must be an integer, got {n!r}")
    n = int(n)
    if n < 4 or n % 2:
        raise InvalidNodeCount(f"node count must be even and at least 4, got {n}")
    return QuadratureGrid(chart, n)
