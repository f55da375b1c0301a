"""Job configuration and conversion of principal-problem data."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cauchy import boundary_geometry
from .conformal import BoundaryChart, QuadratureGrid
from .errors import ConfigInvalid, DataLengthMismatch, DegenerateTangent
from .problems import MANUFACTURED

MIN_NODES = 8
MAX_NODES = 2048
TANGENT_FLOOR = 1e-12

DEFAULT_LATTICE = {"nx": 101, "ny": 101, "margin": 0.05}


@dataclass
class JobConfig:
    map: dict
    boundary_data: dict
    nodes: int = 128
    lattice: dict = field(default_factory=lambda: dict(DEFAULT_LATTICE))
    tolerances: dict = field(default_factory=dict)
    output_dir: str = "out"

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not isinstance(self.map, dict) or "kind" not in self.map:
            raise ConfigInvalid("'map' must be an object with a 'kind' field")
        n = self.nodes
        if isinstance(n, bool) or not isinstance(n, int):
            raise ConfigInvalid(f"'nodes' must be an integer, got {n!r}")
        if n % 2 or not MIN_NODES <= n <= MAX_NODES:
            raise ConfigInvalid(f"'nodes' must be even and in [{MIN_NODES}, {MAX_NODES}], got {n}")
        bd = self.boundary_data
        if not isinstance(bd, dict) or "kind" not in bd:
            raise ConfigInvalid("'boundary_data' must be an object with a 'kind' field")
        kind = bd["kind"]
        if kind == "manufactured":
            if bd.get("function") not in MANUFACTURED:
                raise ConfigInvalid(
                    f"manufactured function must be one of {sorted(MANUFACTURED)}, got {bd.get('function')!r}")
        elif kind == "samples":
            self._check_samples(("u1", "u3"))
        elif kind == "principal":
            self._check_samples(("omega1_prime", "omega2"))
        else:
            raise ConfigInvalid(f"unknown boundary_data kind {kind!r}")
        lat = self.lattice
        if not isinstance(lat, dict):
            raise ConfigInvalid("'lattice' must be an object")
        for key in ("nx", "ny"):
            v = lat.get(key, DEFAULT_LATTICE[key])
            if isinstance(v, bool) or not isinstance(v, int) or v < 5:
                raise ConfigInvalid(f"lattice.{key} must be an integer >= 5")
        margin = lat.get("margin", DEFAULT_LATTICE["margin"])
        if not isinstance(margin, (int, float)) or not margin > 0:
            raise ConfigInvalid("lattice.margin must be positive")
        if not isinstance(self.tolerances, dict):
            raise ConfigInvalid("'tolerances' must be an object")

    def _check_samples(self, keys):
        for key in keys:
            v = self.boundary_data.get(key)
            if not isinstance(v, list):
                raise ConfigInvalid(f"boundary_data.{key} must be a list of numbers")
            if len(v) != self.nodes:
                raise ConfigInvalid(
                    f"boundary_data.{key} has {len(v)} samples, expected {self.nodes} (node-aligned)")

    @classmethod
    def from_dict(cls, d: dict) -> "JobConfig":
        if not isinstance(d, dict):
            raise ConfigInvalid("config must be a JSON object")
        known = {"map", "boundary_data", "nodes", "lattice", "tolerances", "output_dir"}
        extra = set(d) - known
        if extra:
            raise ConfigInvalid(f"unknown config fields: {sorted(extra)}")
        for key in ("map", "boundary_data"):
            if key not in d:
                raise ConfigInvalid(f"missing required field {key!r}")
        kw = copy.deepcopy(d)
        lat = dict(DEFAULT_LATTICE)
        lat.update(kw.get("lattice", {}) or {})
        kw["lattice"] = lat
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "JobConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"malformed JSON in {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "map": copy.deepcopy(self.map),
            "boundary_data": copy.deepcopy(self.boundary_data),
            "nodes": self.nodes,
            "lattice": dict(self.lattice),
            "tolerances": dict(self.tolerances),
            "output_dir": self.output_dir,
        }

    def replace(self, **changes) -> "JobConfig":
        d = self.to_dict()
        d.update(changes)
        return JobConfig.from_dict(d)


@dataclass
class PrincipalData:
    """Boundary data of the principal problem at grid nodes.

    ``omega1_prime`` is the arc-length derivative of the boundary values of
    the unknown, ``omega2`` its outward normal derivative.
    """

    omega1_prime: np.ndarray
    omega2: np.ndarray

    def __post_init__(self):
        self.omega1_prime = np.asarray(self.omega1_prime, dtype=float)
        self.omega2 = np.asarray(self.omega2, dtype=float)
        if self.omega1_prime.shape != self.omega2.shape or self.omega1_prime.ndim != 1:
            raise DataLengthMismatch("omega1_prime and omega2 must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(self.omega1_prime)) and np.all(np.isfinite(self.omega2))):
            raise ValueError("principal data must be finite")


def outward_normal(chart: BoundaryChart, grid: QuadratureGrid) -> np.ndarray:
    """Unit outward normal at nodes as complex numbers."""
    speed = np.abs(grid.fp)
    scale = max(1.0, float(speed.max()))
    if np.any(speed < TANGENT_FLOOR * scale):
        k = int(np.argmin(speed))
        raise DegenerateTangent(f"|tau'| vanishes at node {k} (theta = {grid.theta[k]:.6g})")
    t_hat = grid.fp / speed
    normal = -1j * t_hat
    # the probe a short step along the normal must leave the domain
    geo = boundary_geometry(chart)
    step = 1e-3 * geo.diameter
    probe = grid.z + step * normal
    outside = ~geo.inside(probe.real, probe.imag)
    if np.count_nonzero(outside) < grid.n // 2:
        normal = -normal
    return normal


def convert_principal_data(chart: BoundaryChart, principal: PrincipalData, grid: QuadratureGrid):
    """``(u1, u3)`` node samples from principal-problem data.

    ``u1 = w1' cos(s, x) + w2 cos(n, x)`` and ``u3 = w1' cos(s, y) + w2 cos(n, y)``
    with ``s`` the unit tangent and ``n`` the outward unit normal.
    """
    if principal.omega1_prime.shape != (grid.n,):
        raise DataLengthMismatch(
            f"principal data must have {grid.n} node-aligned samples, got {principal.omega1_prime.shape[0]}")
    normal = outward_normal(chart, grid)
    t_hat = grid.fp / np.abs(grid.fp)
    w1p, w2 = principal.omega1_prime, principal.omega2
    u = w1p * t_hat + w2 * normal
    return u.real.copy(), u.imag.copy()
