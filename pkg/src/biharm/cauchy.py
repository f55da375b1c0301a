"""The algebra-valued Cauchy-type integral and its boundary limits.

For a real density pair ``phi = g1 e1 + g3 e2`` given at grid nodes::

    Phi(zeta) = 1/(2 pi i) * int phi(tau) (tau - zeta)^-1 dtau

where ``tau = tau1 e1 + tau2 e2`` runs over the boundary.  Off the boundary
the trapezoid rule in the angular chart is used directly.  At a node the
one-sided limits are ``Phi(+/-) = +/- phi/2 + PV`` with the principal
value computed from the regular weighted kernels plus a periodic Hilbert
term handled by singularity subtraction.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.signal import resample
from scipy.spatial import cKDTree

from .algebra import BElement, PlanePoint, mul, resolvent
from .conformal import BoundaryChart, QuadratureGrid, quad_nodes
from .errors import (DataLengthMismatch, NotANode, PointOutsideRequestedRegion,
                     PointTooCloseToBoundary)
from .kernels import grid_kernels

DISTANCE_FLOOR = 1e-3  # relative to the domain diameter
REFINE_C = 64
MAX_REFINED = 1 << 16  # cap for automatic refinement
_CHUNK = 1 << 21  # target x node entries per block


@dataclass(eq=False)
class DensityPair:
    grid: QuadratureGrid
    g1: np.ndarray
    g3: np.ndarray

    def __post_init__(self):
        self.g1 = np.asarray(self.g1, dtype=float)
        self.g3 = np.asarray(self.g3, dtype=float)
        n = self.grid.n
        if self.g1.shape != (n,) or self.g3.shape != (n,):
            raise DataLengthMismatch(
                f"density samples must have length {n}, got {self.g1.shape} and {self.g3.shape}")
        if not (np.all(np.isfinite(self.g1)) and np.all(np.isfinite(self.g3))):
            raise ValueError("density samples must be finite")

    @property
    def phi(self) -> BElement:
        return BElement(self.g1, self.g3, check=False)

    @classmethod
    def from_function(cls, grid: QuadratureGrid, fn):
        """Sample ``fn(x, y) -> (g1, g3)`` at the boundary nodes."""
        g1, g3 = fn(grid.z.real, grid.z.imag)
        return cls(grid, np.broadcast_to(g1, (grid.n,)).copy(), np.broadcast_to(g3, (grid.n,)).copy())

    @classmethod
    def zeros(cls, grid: QuadratureGrid):
        return cls(grid, np.zeros(grid.n), np.zeros(grid.n))


# -- geometry -----------------------------------------------------------------

@dataclass(eq=False)
class BoundaryGeometry:
    samples: np.ndarray
    polygon: np.ndarray
    tree: cKDTree
    diameter: float

    def distance(self, x, y) -> np.ndarray:
        pts = np.column_stack([np.ravel(x), np.ravel(y)])
        d, _ = self.tree.query(pts)
        return d.reshape(np.shape(x))

    def inside(self, x, y) -> np.ndarray:
        """Winding-number test against the boundary polygon."""
        p = np.ravel(np.asarray(x) + 1j * np.asarray(y))
        v = self.polygon
        out = np.empty(p.size, dtype=bool)
        step = max(1, _CHUNK // v.size)
        for i in range(0, p.size, step):
            w = v[None, :] - p[i:i + step, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                turn = np.angle(np.roll(w, -1, axis=1) / w).sum(axis=1)
            out[i:i + step] = np.abs(turn) > np.pi
        return out.reshape(np.shape(x))


@functools.lru_cache(maxsize=32)
def boundary_geometry(chart: BoundaryChart) -> BoundaryGeometry:
    th = 2 * np.pi * np.arange(8192) / 8192
    z = chart.map(np.exp(1j * th))
    tree = cKDTree(np.column_stack([z.real, z.imag]))
    poly = z[::8]
    coarse = z[::16]
    diam = float(np.abs(coarse[:, None] - coarse[None, :]).max())
    return BoundaryGeometry(z, poly, tree, diam)


def _check_points(chart, n, x, y, *, interior: bool, min_distance, refine: bool):
    geo = boundary_geometry(chart)
    default = DISTANCE_FLOOR * geo.diameter
    floor = default if min_distance is None else float(min_distance)
    if refine:
        n = max(n, MAX_REFINED)
    if floor < default and n < REFINE_C * geo.diameter / floor:
        raise PointTooCloseToBoundary(
            f"distance floor {floor:.3g} needs at least {REFINE_C * geo.diameter / floor:.0f} nodes, grid has {n}")
    d = geo.distance(x, y)
    if np.any(d < floor):
        raise PointTooCloseToBoundary(
            f"point within {float(np.min(d)):.3g} of the boundary (floor {floor:.3g})")
    ins = geo.inside(x, y)
    if interior and not np.all(ins):
        raise PointOutsideRequestedRegion("point lies outside the domain")
    if not interior and np.any(ins):
        raise PointOutsideRequestedRegion("point lies inside the domain")


# -- off-boundary evaluation --------------------------------------------------

def cauchy_sum(grid: QuadratureGrid, g1, g3, x, y) -> BElement:
    """Trapezoid sum of the Cauchy-type integral at arbitrary points (no checks)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    xf = np.broadcast_to(x, shape).ravel()
    yf = np.broadcast_to(y, shape).ravel()
    dt = BElement(grid.fp.real, grid.fp.imag, check=False)
    c = mul(BElement(g1, g3, check=False), dt) * (grid.h / (2j * np.pi))
    X = grid.z.real
    Y = grid.z.imag
    out1 = np.empty(xf.size, dtype=complex)
    out2 = np.empty(xf.size, dtype=complex)
    step = max(1, _CHUNK // grid.n)
    for i in range(0, xf.size, step):
        r = resolvent(X[None, :] - xf[i:i + step, None], Y[None, :] - yf[i:i + step, None])
        a = r.c1 @ c.c2
        b = r.c2 @ c.c2
        out1[i:i + step] = r.c1 @ c.c1 + b
        out2[i:i + step] = r.c2 @ c.c1 + a + 2j * b
    out = BElement(out1.reshape(shape), out2.reshape(shape), check=False)
    if shape == ():
        out = BElement(complex(out.c1), complex(out.c2), check=False)
    return out


def _xy(zeta):
    if isinstance(zeta, BElement):
        return np.real(zeta.c1), np.real(zeta.c2)
    x, y = zeta
    return np.asarray(x, dtype=float), np.asarray(y, dtype=float)


def _refined_levels(chart, grid: QuadratureGrid, x, y):
    """Node count per point so that ``n >= REFINE_C * diam / dist``."""
    geo = boundary_geometry(chart)
    d = np.maximum(geo.distance(x, y), 1e-300)
    need = REFINE_C * geo.diameter / d
    n = np.full(np.shape(need), grid.n, dtype=np.int64)
    cap = max(grid.n, MAX_REFINED)
    while True:
        grow = (n < need) & (2 * n <= cap)
        if not grow.any():
            return n
        n[grow] *= 2


def _fine_density(density: DensityPair, n_fine: int) -> DensityPair:
    cache = density.__dict__.setdefault("_fine", {})
    if n_fine not in cache:
        grid = quad_nodes(density.grid.chart, n_fine)
        # band-limited trigonometric interpolation of the samples
        cache[n_fine] = DensityPair(grid, resample(density.g1, n_fine), resample(density.g3, n_fine))
    return cache[n_fine]


def refined_sum(chart: BoundaryChart, density: DensityPair, x, y) -> BElement:
    """Cauchy sum with the density interpolated to finer grids near the boundary."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    xf = np.broadcast_to(x, shape).ravel()
    yf = np.broadcast_to(y, shape).ravel()
    levels = _refined_levels(chart, density.grid, xf, yf)
    c1 = np.empty(xf.size, dtype=complex)
    c2 = np.empty(xf.size, dtype=complex)
    for n_fine in np.unique(levels):
        sel = levels == n_fine
        d = density if n_fine == density.grid.n else _fine_density(density, int(n_fine))
        v = cauchy_sum(d.grid, d.g1, d.g3, xf[sel], yf[sel])
        c1[sel] = v.c1
        c2[sel] = v.c2
    if shape == ():
        return BElement(complex(c1[0]), complex(c2[0]), check=False)
    return BElement(c1.reshape(shape), c2.reshape(shape), check=False)


def eval_interior(chart: BoundaryChart, density: DensityPair, zeta, *, min_distance=None,
                  refine: bool = True) -> BElement:
    """``Phi(zeta)`` for ``zeta`` inside the domain; ``zeta`` may hold arrays.

    With ``refine`` the density is spectrally interpolated onto finer grids
    for points nearer the boundary than ``REFINE_C * diam / n``.
    """
    x, y = _xy(zeta)
    _check_points(chart, density.grid.n, x, y, interior=True, min_distance=min_distance,
                  refine=refine)
    if refine:
        return refined_sum(chart, density, x, y)
    return cauchy_sum(density.grid, density.g1, density.g3, x, y)


def eval_exterior(chart: BoundaryChart, density: DensityPair, zeta, *, min_distance=None,
                  refine: bool = True) -> BElement:
    x, y = _xy(zeta)
    _check_points(chart, density.grid.n, x, y, interior=False, min_distance=min_distance,
                  refine=refine)
    if refine:
        return refined_sum(chart, density, x, y)
    return cauchy_sum(density.grid, density.g1, density.g3, x, y)


# -- boundary limits ----------------------------------------------------------

def spectral_derivative(g: np.ndarray) -> np.ndarray:
    """d/dtheta of periodic samples on a uniform grid of ``[0, 2 pi)``."""
    n = g.size
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(g)).real


def _half_cot(grid: QuadratureGrid) -> np.ndarray:
    hc = getattr(grid, "_half_cot", None)
    if hc is None:
        d = grid.theta[None, :] - grid.theta[:, None]
        with np.errstate(divide="ignore"):
            hc = 0.5 / np.tan(d / 2)
        np.fill_diagonal(hc, 0.0)
        grid._half_cot = hc
    return hc


def _kernels(grid: QuadratureGrid):
    K = getattr(grid, "_kernels", None)
    if K is None:
        K = grid_kernels(grid)
        grid._kernels = K
    return K


def hilbert_part(grid: QuadratureGrid, g: np.ndarray) -> np.ndarray:
    """``PV int g(phi) cot((phi - theta_k)/2)/2 dphi`` at every node."""
    return grid.h * (_half_cot(grid) @ g + spectral_derivative(g))


def principal_value(density: DensityPair) -> BElement:
    """PV part of the boundary limits at every node."""
    grid = density.grid
    K1, K2 = _kernels(grid)
    # k = k1 e1 + i rho k2 = (K1 + 2i K2) e1 - 2 K2 e2
    a = K1 + 2j * K2
    b = -2.0 * K2
    g1, g3 = density.g1, density.g3
    bg3 = b @ g3
    s1 = a @ g1 + bg3
    s2 = a @ g3 + b @ g1 + 2j * bg3
    s1 = grid.h * s1 + hilbert_part(grid, g1)
    s2 = grid.h * s2 + hilbert_part(grid, g3)
    return BElement(s1, s2, check=False) * (1.0 / (2j * np.pi))


def boundary_limits(density: DensityPair):
    """``(Phi_plus, Phi_minus)`` at all nodes; plus is the limit from inside."""
    pv = principal_value(density)
    half = density.phi * 0.5
    return pv + half, pv - half


def node_index(grid: QuadratureGrid, t) -> int:
    t = float(t)
    if np.isinf(t):
        return 0
    hit = np.flatnonzero(np.isclose(grid.s, t, rtol=1e-12, atol=1e-12))
    if hit.size != 1:
        raise NotANode(f"t = {t!r} is not a node of the n = {grid.n} grid")
    return int(hit[0])


def eval_boundary_plus(chart: BoundaryChart, density: DensityPair, t) -> BElement:
    k = node_index(density.grid, t)
    return boundary_limits(density)[0][k]


def eval_boundary_minus(chart: BoundaryChart, density: DensityPair, t) -> BElement:
    k = node_index(density.grid, t)
    return boundary_limits(density)[1][k]


def limit_by_extrapolation(chart: BoundaryChart, density: DensityPair, side: int = 1,
                           n_fine: int = 32768, eps: float | None = None) -> BElement:
    """One-sided limits at all nodes from off-boundary values.

    The density is band-limited upsampled to ``n_fine`` nodes, evaluated
    at four points along the normal, and extrapolated to the boundary
    with the cubic rule ``4 f1 - 6 f2 + 4 f3 - f4``.  ``side=+1`` is the
    interior.  Independent of the principal-value machinery.
    """
    grid = density.grid
    fine = quad_nodes(chart, n_fine)
    g1 = resample(density.g1, n_fine)
    g3 = resample(density.g3, n_fine)
    if eps is None:
        eps = 5e-4 * boundary_geometry(chart).diameter
    normal = 1j * grid.tangent * side
    acc = None
    for m, w in zip((1, 2, 3, 4), (4.0, -6.0, 4.0, -1.0)):
        p = grid.z + m * eps * normal
        v = cauchy_sum(fine, g1, g3, p.real, p.imag) * w
        acc = v if acc is None else acc + v
    return acc
