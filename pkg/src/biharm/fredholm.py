"""Nystrom discretization and solution of the boundary integral system.

Unknowns are the real density components ``g1, g3`` at the grid nodes.
Row ``k`` of the system reads::

    g1/2 + 1/(2 pi) int g1 (Im k1 + 2 Re k2) ds - 1/pi int g3 Im k2 ds = u1
    g3/2 - 1/pi int g1 Im k2 ds + 1/(2 pi) int g3 (Im k1 - 2 Re k2) ds = u3

discretized with the weighted kernels on the angular chart.  The
operator has a one-dimensional null space; the least-squares solution
with that direction removed is returned.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .cauchy import DensityPair
from .conformal import BoundaryChart, QuadratureGrid, quad_nodes
from .errors import DataLengthMismatch, IllConditioned, InvalidNodeCount
from .kernels import grid_kernels

MAX_NODES = 2048
NULL_RTOL = 1e-8  # times n
ILL_RTOL = 1e-10
SOLVABLE_RTOL = 1e-8


@dataclass(eq=False)
class DiscreteSystem:
    grid: QuadratureGrid
    matrix: np.ndarray
    rhs: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def chart(self) -> BoundaryChart:
        return self.grid.chart

    def with_rhs(self, rhs) -> "DiscreteSystem":
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != (2 * self.n,):
            raise DataLengthMismatch(f"rhs must have length {2 * self.n}, got {rhs.shape}")
        return DiscreteSystem(self.grid, self.matrix, rhs)

    def blocks(self):
        n = self.n
        A = self.matrix
        return A[:n, :n], A[:n, n:], A[n:, :n], A[n:, n:]

    def apply(self, g1, g3) -> tuple[np.ndarray, np.ndarray]:
        v = self.matrix @ np.concatenate([g1, g3])
        return v[: self.n], v[self.n:]


def assemble(chart: BoundaryChart, n: int | QuadratureGrid) -> DiscreteSystem:
    grid = n if isinstance(n, QuadratureGrid) else quad_nodes(chart, n)
    if grid.n > MAX_NODES:
        raise InvalidNodeCount(f"dense assembly is limited to {MAX_NODES} nodes, got {grid.n}")
    K1, K2 = grid_kernels(grid)
    w = grid.h / (2 * np.pi)
    eye = 0.5 * np.eye(grid.n)
    a11 = eye + w * (K1.imag + 2 * K2.real)
    a13 = w * (-2 * K2.imag)
    a33 = eye + w * (K1.imag - 2 * K2.real)
    A = np.block([[a11, a13], [a13, a33]])
    return DiscreteSystem(grid, A)


def _sample_data(boundary_data, grid: QuadratureGrid):
    if callable(boundary_data):
        u1, u3 = boundary_data(grid.z.real, grid.z.imag)
        u1 = np.broadcast_to(np.asarray(u1, dtype=float), (grid.n,))
        u3 = np.broadcast_to(np.asarray(u3, dtype=float), (grid.n,))
        return u1, u3
    try:
        u1, u3 = boundary_data
    except (TypeError, ValueError):
        raise DataLengthMismatch("boundary data must be a callable or a (u1, u3) pair") from None
    u1 = np.asarray(u1, dtype=float)
    u3 = np.asarray(u3, dtype=float)
    if u1.shape != (grid.n,) or u3.shape != (grid.n,):
        raise DataLengthMismatch(
            f"boundary samples must have length {grid.n}, got {u1.shape} and {u3.shape}")
    return u1, u3


def build_rhs(chart: BoundaryChart, boundary_data, grid: QuadratureGrid) -> np.ndarray:
    """Stack ``[u1(nodes); u3(nodes)]``.

    ``boundary_data`` is either ``fn(x, y) -> (u1, u3)`` evaluated at the
    boundary nodes, or a pair of node-aligned sample arrays.
    """
    u1, u3 = _sample_data(boundary_data, grid)
    return np.concatenate([u1, u3]).astype(float)


def _defect(grid: QuadratureGrid, u1, u3) -> float:
    # int u1 dx + u3 dy, with dx + i dy = f'(theta) dtheta
    return float(grid.h * (u1 @ grid.fp.real + u3 @ grid.fp.imag))


def solvability_defect(chart: BoundaryChart, boundary_data, grid: QuadratureGrid) -> float:
    u1, u3 = _sample_data(boundary_data, grid)
    return _defect(grid, u1, u3)


@dataclass
class SolveDiagnostics:
    solvability_defect: float
    sigma_min: float
    sigma_second: float
    nullspace_dim: int
    transpose_residual: float
    lsq_residual: float
    n: int
    sigma_max: float = float("nan")
    removed_component: float = 0.0
    solvable: bool = True
    solvable_tolerance: float = 0.0
    singular_values: np.ndarray = field(default=None, repr=False)

    def to_json_dict(self) -> dict:
        keys = ("solvability_defect", "sigma_min", "sigma_second", "nullspace_dim",
                "transpose_residual", "lsq_residual", "n")
        d = asdict(self)
        out = {k: d[k] for k in keys}
        out["nullspace_dim"] = int(out["nullspace_dim"])
        out["n"] = int(out["n"])
        for k in keys:
            if k not in ("nullspace_dim", "n"):
                out[k] = float(out[k])
        return out


def solve(system: DiscreteSystem, *, with_transpose: bool = True) -> tuple[DensityPair, SolveDiagnostics]:
    if system.rhs is None:
        raise ValueError("system has no right-hand side; use with_rhs")
    grid = system.grid
    n = grid.n
    b = system.rhs
    A = system.matrix
    U, s, Vt = np.linalg.svd(A)
    smax = s[0]
    null_dim = int(np.count_nonzero(s < NULL_RTOL * n * smax))
    if s[-2] < ILL_RTOL * smax:
        raise IllConditioned(
            f"second-smallest singular value {s[-2]:.3g} is below {ILL_RTOL:g} * sigma_max")
    k = max(1, null_dim)
    coef = (U[:, :-k].T @ b) / s[:-k]
    g = Vt[:-k].T @ coef
    lsq = float(np.max(np.abs(A @ g - b)))
    u1, u3 = b[:n], b[n:]
    defect = _defect(grid, u1, u3)
    tol = SOLVABLE_RTOL * (1 + float(np.max(np.abs(b))) * grid.perimeter())
    diag = SolveDiagnostics(
        solvability_defect=defect,
        sigma_min=float(s[-1]),
        sigma_second=float(s[-2]),
        nullspace_dim=null_dim,
        transpose_residual=transpose_residual(grid.chart, grid) if with_transpose else float("nan"),
        lsq_residual=lsq,
        n=n,
        sigma_max=float(smax),
        removed_component=float(U[:, -1] @ b),
        solvable=abs(defect) <= tol,
        solvable_tolerance=tol,
        singular_values=s,
    )
    return DensityPair(grid, g[:n], g[n:]), diag


def transpose_residual(chart: BoundaryChart, grid: QuadratureGrid) -> float:
    """Max residual of the transposed homogeneous system at ``(tau1', tau2')``.

    Each equation is multiplied by ``(t^2 + 1)/2`` so that it lives on the
    angular chart, where the candidate pair becomes ``(Re f', Im f')`` and
    the point ``t = inf`` is an ordinary row.  Built from the kernel
    formulas directly, not by transposing the assembled matrix.
    """
    n = grid.n
    f, a, b = grid.z, grid.fp, grid.fpp
    # rows: angle theta where the equation is posed; columns: integration angle
    D = f[None, :] - f[:, None]
    i = np.arange(n)
    D[i, i] = 1.0
    A = a[:, None]  # tau' enters at the fixed point, outside the integrals
    ImAD = (A / D).imag
    W = (A.real * D.imag - A.imag * D.real) / D**2
    ImAD[i, i] = -(b / (2 * a)).imag
    W[i, i] = (a.real * b.imag - a.imag * b.real) / (2 * a * a)
    h1 = a.real
    h3 = a.imag
    hw = grid.h / np.pi
    r1 = h1 - hw * ((ImAD + W.real) @ h1) + hw * (W.imag @ h3)
    r3 = h3 - hw * ((ImAD - W.real) @ h3) + hw * (W.imag @ h1)
    return float(max(np.abs(r1).max(), np.abs(r3).max()))
