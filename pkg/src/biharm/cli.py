"""Command line entry point: ``biharm solve|verify|kernel``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import JobConfig, PrincipalData, convert_principal_data
from .conformal import BoundaryChart, make_map, quad_nodes
from .errors import BiharmError
from .field import LatticeSpec, potential, reconstruct_fields
from .fredholm import assemble, build_rhs, solve
from .kernels import kernel_row
from .output import write_densities, write_field, write_json, write_kernel_row
from .problems import MANUFACTURED
from .verify import format_table, run_suite

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSOLVABLE = 2


def _as_config(config) -> JobConfig:
    if isinstance(config, JobConfig):
        return config
    if isinstance(config, dict):
        return JobConfig.from_dict(config)
    return JobConfig.load(config)


def boundary_data_for(cfg: JobConfig, chart: BoundaryChart, grid):
    bd = cfg.boundary_data
    kind = bd["kind"]
    if kind == "manufactured":
        return MANUFACTURED[bd["function"]].boundary_data
    if kind == "samples":
        return np.asarray(bd["u1"], dtype=float), np.asarray(bd["u3"], dtype=float)
    principal = PrincipalData(bd["omega1_prime"], bd["omega2"])
    return convert_principal_data(chart, principal, grid)


def solve_job(cfg: JobConfig):
    chart = BoundaryChart(make_map(cfg.map))
    grid = quad_nodes(chart, cfg.nodes)
    system = assemble(chart, grid)
    rhs = build_rhs(chart, boundary_data_for(cfg, chart, grid), grid)
    density, diag = solve(system.with_rhs(rhs))
    lat = cfg.lattice
    fg = reconstruct_fields(chart, density, LatticeSpec(lat["nx"], lat["ny"], float(lat["margin"])))
    fg = potential(fg)
    return chart, density, diag, fg


def run_solve(config, out=None, nodes=None, stream=None) -> int:
    stream = stream or sys.stdout
    try:
        cfg = _as_config(config)
        if nodes is not None:
            cfg = cfg.replace(nodes=int(nodes))
        if out is not None:
            cfg = cfg.replace(output_dir=str(out))
        _, density, diag, fg = solve_job(cfg)
        outdir = Path(cfg.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_densities(outdir / "densities.csv", density)
        write_field(outdir / "field.csv", fg)
        write_json(outdir / "diagnostics.json", diag.to_json_dict())
    except (BiharmError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not diag.solvable:
        print(f"solvability defect {diag.solvability_defect:.6g} exceeds tolerance "
              f"{diag.solvable_tolerance:.3g}; least-squares residual {diag.lsq_residual:.3g}",
              file=stream)
        return EXIT_UNSOLVABLE
    print(f"solved n={diag.n}: nullspace_dim={diag.nullspace_dim}, "
          f"lsq_residual={diag.lsq_residual:.3g}, loop_closure={fg.loop_closure:.3g}", file=stream)
    return EXIT_OK


def run_verify(config, stream=None) -> int:
    stream = stream or sys.stdout
    try:
        cfg = _as_config(config)
        chart = BoundaryChart(make_map(cfg.map))
        results = run_suite(chart, cfg.nodes, cfg.tolerances)
    except (BiharmError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(format_table(results), file=stream)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failing checks: " + ", ".join(failed), file=stream)
        return EXIT_ERROR
    return EXIT_OK


def run_kernel(config, t: float, out, stream=None) -> int:
    try:
        cfg = _as_config(config)
        chart = BoundaryChart(make_map(cfg.map))
        grid = quad_nodes(chart, cfg.nodes)
        write_kernel_row(out, grid, kernel_row(chart, t, grid))
    except (BiharmError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def _parse_t(text: str) -> float:
    v = float(text)  # accepts "inf", "-inf"
    if np.isnan(v):
        raise argparse.ArgumentTypeError("t must be a number or inf")
    return v


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for unsolvable data
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="biharm", description="Boundary-integral biharmonic solver")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="solve the (1-3) problem and write outputs")
    s.add_argument("--config", required=True)
    s.add_argument("--nodes", type=int)
    s.add_argument("--out")
    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--config", required=True)
    k = sub.add_parser("kernel", help="dump one kernel row to CSV")
    k.add_argument("--config", required=True)
    k.add_argument("--t", required=True, type=_parse_t)
    k.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve":
        return run_solve(args.config, out=args.out, nodes=args.nodes)
    if args.command == "verify":
        return run_verify(args.config)
    return run_kernel(args.config, args.t, args.out)


if __name__ == "__main__":
    sys.exit(main())
