"""Interior field reconstruction, the potential V, and physics checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import E2, BElement, components, mul
from .cauchy import (DensityPair, boundary_geometry, boundary_limits, eval_interior,
                     limit_by_extrapolation)
from .conformal import BoundaryChart
from .errors import DisconnectedLattice

GAUSS_POINTS = 3
FD_STEP = 1e-4


@dataclass(frozen=True)
class LatticeSpec:
    """Rectangular lattice clipped to the domain.

    ``bounds = (xmin, xmax, ymin, ymax)`` defaults to the bounding box of the
    boundary.  Points closer than ``margin`` to the boundary are masked out.
    """

    nx: int
    ny: int
    margin: float = 0.05
    bounds: tuple[float, float, float, float] | None = None

    def axes(self, chart: BoundaryChart):
        if self.bounds is None:
            z = boundary_geometry(chart).samples
            b = (z.real.min(), z.real.max(), z.imag.min(), z.imag.max())
        else:
            b = self.bounds
        return np.linspace(b[0], b[1], self.nx), np.linspace(b[2], b[3], self.ny)


@dataclass(eq=False)
class FieldGrid:
    x: np.ndarray
    y: np.ndarray
    mask: np.ndarray  # (ny, nx), True where the field is defined
    U1: np.ndarray
    U2: np.ndarray
    U3: np.ndarray
    U4: np.ndarray
    V: np.ndarray | None = None
    loop_closure: float = float("nan")
    evaluator: Callable | None = field(default=None, repr=False)

    @property
    def hx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def hy(self) -> float:
        return float(self.y[1] - self.y[0])

    def meshgrid(self):
        return np.meshgrid(self.x, self.y)

    def rows(self):
        """Flat records ``(x, y, U1, U2, U3, U4, V, mask)`` in row-major order."""
        X, Y = self.meshgrid()
        V = self.V if self.V is not None else np.full(X.shape, np.nan)
        cols = [X, Y, self.U1, self.U2, self.U3, self.U4, V, self.mask.astype(int)]
        return np.stack([c.ravel() for c in cols], axis=1)


def reconstruct_fields(chart: BoundaryChart, density: DensityPair, lattice: LatticeSpec) -> FieldGrid:
    x, y = lattice.axes(chart)
    X, Y = np.meshgrid(x, y)
    geo = boundary_geometry(chart)
    mask = geo.inside(X, Y) & (geo.distance(X, Y) >= lattice.margin)
    U = [np.full(X.shape, np.nan) for _ in range(4)]
    if mask.any():
        c = components(eval_interior(chart, density, (X[mask], Y[mask])))
        for arr, val in zip(U, c):
            arr[mask] = val

    def evaluator(px, py):
        return eval_interior(chart, density, (px, py))

    return FieldGrid(x, y, mask, *U, evaluator=evaluator)


def _edge_integrals(fg: FieldGrid):
    """Integrals of ``U1 dx`` along horizontal and ``U3 dy`` along vertical edges.

    Gauss-Legendre on each lattice segment when the field can be evaluated
    off-lattice, else the trapezoid rule on lattice values.
    """
    m = fg.mask
    hmask = m[:, :-1] & m[:, 1:]
    vmask = m[:-1, :] & m[1:, :]
    H = np.full(hmask.shape, np.nan)
    Vv = np.full(vmask.shape, np.nan)
    if fg.evaluator is None:
        H[hmask] = (0.5 * fg.hx * (fg.U1[:, :-1] + fg.U1[:, 1:]))[hmask]
        Vv[vmask] = (0.5 * fg.hy * (fg.U3[:-1, :] + fg.U3[1:, :]))[vmask]
        return H, Vv
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    u = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    X, Y = fg.meshgrid()
    iy, ix = np.nonzero(hmask)
    px = X[iy, ix][:, None] + fg.hx * u[None, :]
    py = np.broadcast_to(Y[iy, ix][:, None], px.shape)
    vals = components(fg.evaluator(px, py)).u1
    H[iy, ix] = fg.hx * (vals @ w)
    iy, ix = np.nonzero(vmask)
    py = Y[iy, ix][:, None] + fg.hy * u[None, :]
    px = np.broadcast_to(X[iy, ix][:, None], py.shape)
    vals = components(fg.evaluator(px, py)).u3
    Vv[iy, ix] = fg.hy * (vals @ w)
    return H, Vv


def potential(fg: FieldGrid, base_point=None) -> FieldGrid:
    """Fill ``V`` by integrating ``U1 dx + U3 dy`` along lattice paths.

    ``V`` vanishes at the lattice point nearest ``base_point`` (default: the
    unmasked point nearest the lattice center).  The maximum circulation over
    unit cells and over the largest all-interior rectangle found along the
    central row/column is stored in ``loop_closure``.
    """
    m = fg.mask
    X, Y = fg.meshgrid()
    if not m.any():
        raise DisconnectedLattice("lattice has no interior points")
    if base_point is None:
        cx, cy = 0.5 * (fg.x[0] + fg.x[-1]), 0.5 * (fg.y[0] + fg.y[-1])
    else:
        cx, cy = base_point
    d = np.where(m, (X - cx) ** 2 + (Y - cy) ** 2, np.inf)
    start = np.unravel_index(np.argmin(d), d.shape)
    if base_point is not None and not np.isclose(d[start], 0.0, atol=(0.5 * max(fg.hx, fg.hy)) ** 2):
        raise ValueError(f"base point {base_point!r} is not an interior lattice point")
    H, Vv = _edge_integrals(fg)
    V = np.full(m.shape, np.nan)
    V[start] = 0.0
    queue = deque([start])
    ny, nx = m.shape
    while queue:
        j, i = queue.popleft()
        v0 = V[j, i]
        for dj, di in ((0, 1), (0, -1), (1, 0), (-1, 0)):
            jj, ii = j + dj, i + di
            if not (0 <= jj < ny and 0 <= ii < nx) or not m[jj, ii] or not np.isnan(V[jj, ii]):
                continue
            if di == 1:
                step = H[j, i]
            elif di == -1:
                step = -H[j, ii]
            elif dj == 1:
                step = Vv[j, i]
            else:
                step = -Vv[jj, i]
            V[jj, ii] = v0 + step
            queue.append((jj, ii))
    if np.isnan(V[m]).any():
        raise DisconnectedLattice("interior lattice points are not all connected to the base point")
    # circulation around each unit cell: bottom + right - top - left
    circ = H[:-1, :] + Vv[:, 1:] - H[1:, :] - Vv[:, :-1]
    closure = float(np.nanmax(np.abs(circ))) if np.isfinite(circ).any() else 0.0
    closure = max(closure, _rectangle_circulation(m, H, Vv))
    return FieldGrid(fg.x, fg.y, m, fg.U1, fg.U2, fg.U3, fg.U4, V=V,
                     loop_closure=closure, evaluator=fg.evaluator)


def _rectangle_circulation(m, H, Vv) -> float:
    """Circulation around a large axis-aligned rectangle of interior points."""
    ny, nx = m.shape
    for k in range(min(nx, ny) // 2):
        j0, j1, i0, i1 = k, ny - 1 - k, k, nx - 1 - k
        if j1 - j0 < 1 or i1 - i0 < 1:
            break
        if m[j0:j1 + 1, i0:i1 + 1].all():
            bottom = H[j0, i0:i1].sum()
            top = H[j1, i0:i1].sum()
            right = Vv[j0:j1, i1].sum()
            left = Vv[j0:j1, i0].sum()
            return float(abs(bottom + right - top - left))
    # no full rectangle around the center; inscribe one in the mask
    js, is_ = np.nonzero(m)
    jc, ic = int(np.median(js)), int(np.median(is_))
    r = 1
    while (jc - r >= 0 and jc + r < ny and ic - r >= 0 and ic + r < nx
           and m[jc - r:jc + r + 1, ic - r:ic + r + 1].all()):
        r += 1
    r -= 1
    if r < 1:
        return 0.0
    j0, j1, i0, i1 = jc - r, jc + r, ic - r, ic + r
    bottom = H[j0, i0:i1].sum()
    top = H[j1, i0:i1].sum()
    right = Vv[j0:j1, i1].sum()
    left = Vv[j0:j1, i0].sum()
    return float(abs(bottom + right - top - left))


def biharmonic_stencil(V: np.ndarray, hx: float, hy: float) -> np.ndarray:
    """13-point ``V_xxxx + 2 V_xxyy + V_yyyy``; NaN where the stencil leaves the data."""
    out = np.full(V.shape, np.nan)
    c = V[2:-2, 2:-2]
    xxxx = (V[2:-2, 4:] - 4 * V[2:-2, 3:-1] + 6 * c - 4 * V[2:-2, 1:-3] + V[2:-2, :-4]) / hx**4
    yyyy = (V[4:, 2:-2] - 4 * V[3:-1, 2:-2] + 6 * c - 4 * V[1:-3, 2:-2] + V[:-4, 2:-2]) / hy**4
    xxyy = (V[3:-1, 3:-1] + V[3:-1, 1:-3] + V[1:-3, 3:-1] + V[1:-3, 1:-3]
            - 2 * (V[2:-2, 3:-1] + V[2:-2, 1:-3] + V[3:-1, 2:-2] + V[1:-3, 2:-2])
            + 4 * c) / (hx**2 * hy**2)
    out[2:-2, 2:-2] = xxxx + 2 * xxyy + yyyy
    return out


def verify_biharmonic(fg: FieldGrid) -> tuple[float, float]:
    """Max ``|Delta^2 V|`` over points whose whole stencil is defined, and the spacing."""
    if fg.V is None:
        raise ValueError("potential not computed")
    r = biharmonic_stencil(fg.V, fg.hx, fg.hy)
    ok = np.isfinite(r)
    return (float(np.abs(r[ok]).max()) if ok.any() else 0.0), max(fg.hx, fg.hy)


def verify_monogenic(chart: BoundaryChart, density: DensityPair, probes, h: float = FD_STEP) -> float:
    """Max ``||dPhi/dy - (dPhi/dx) e2||`` by central differences."""
    px, py = (np.asarray(v, dtype=float) for v in probes)
    ev = lambda a, b: eval_interior(chart, density, (a, b))  # noqa: E731
    dx = (ev(px + h, py) - ev(px - h, py)) * (0.5 / h)
    dy = (ev(px, py + h) - ev(px, py - h)) * (0.5 / h)
    r = dy - mul(dx, E2)
    return float(np.max(r.norm()))


def check_conjugate_24(chart: BoundaryChart, density: DensityPair, method: str = "limit") -> float:
    """Max over nodes of ``|U2[Phi+ - Phi-]| + |U4[Phi+ - Phi-]|``.

    ``method="plemelj"`` uses the principal-value formulas (where the jump
    is real by construction); ``method="limit"`` takes independent
    one-sided limits from off-boundary values.
    """
    if method == "plemelj":
        plus, minus = boundary_limits(density)
    elif method == "limit":
        plus = limit_by_extrapolation(chart, density, +1)
        minus = limit_by_extrapolation(chart, density, -1)
    else:
        raise ValueError(f"unknown method {method!r}")
    c = components(plus - minus)
    return float(np.max(np.abs(c.u2) + np.abs(c.u4)))


@dataclass(frozen=True)
class HomogeneousFit:
    k: float
    n1: float
    n2: float
    residual: float


def fit_homogeneous(x, y, u2, u4, u2_ref, u4_ref) -> HomogeneousFit:
    """Least-squares ``(k, n1, n2)`` with ``u2 + k x + n1 ~ u2_ref``, ``u4 + k y + n2 ~ u4_ref``.

    This is the family ``i k zeta + i (n1 e1 + n2 e2)`` that leaves U1, U3 unchanged.
    """
    x = np.ravel(x)
    y = np.ravel(y)
    one = np.ones_like(x)
    zero = np.zeros_like(x)
    M = np.block([[x[:, None], one[:, None], zero[:, None]],
                  [y[:, None], zero[:, None], one[:, None]]])
    r = np.concatenate([np.ravel(u2_ref) - np.ravel(u2), np.ravel(u4_ref) - np.ravel(u4)])
    coef, *_ = np.linalg.lstsq(M, r, rcond=None)
    res = float(np.max(np.abs(M @ coef - r)))
    return HomogeneousFit(float(coef[0]), float(coef[1]), float(coef[2]), res)
