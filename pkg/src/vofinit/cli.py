"""Command-line driver: mesh in, per-cell fraction field out.

Exit codes: 0 success, 2 configuration error, 3 mesh parse error,
4 inconsistent mesh (flood-fill contradiction or failed classification).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io as mesh_io
from .diagnostics import Diagnostics
from .grid import CartesianGrid, InconsistentMeshError, compute_fraction_field
from .meshgen import SphereSpec, translate_mesh, triangulate_sphere
from .oracles import monte_carlo_fraction
from .volume import ClassificationError


@dataclass
class RunConfig:
    mesh_path: str | None
    spheres: list[tuple[float, float, float, float, float]]
    grid: CartesianGrid
    default_phase: int
    out_path: str | None
    out_format: str
    mc_samples: int | None
    seed: int
    report_corners: bool
    threads: int
    plot_dir: str | None = None


def _parse_floats(text: str, count: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != count:
        raise argparse.ArgumentTypeError(f"{what} needs {count} comma-separated values")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{what}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vofinit",
        description=(
            "Compute the per-cell volume fraction of the reference phase on a "
            "Cartesian grid from an oriented triangle mesh."
        ),
    )
    src = parser.add_argument_group("mesh source (exactly one)")
    src.add_argument("--mesh", metavar="PATH", help="triangle mesh file (STL or OBJ)")
    src.add_argument(
        "--gen-sphere",
        metavar="CX,CY,CZ,R,LBAR",
        action="append",
        default=[],
        help="generate a triangulated sphere (repeatable)",
    )
    parser.add_argument("--grid", metavar="NX,NY,NZ", required=True, help="cell counts")
    parser.add_argument(
        "--domain",
        metavar="X0,Y0,Z0,X1,Y1,Z1",
        required=True,
        help="axis-aligned domain box in world units",
    )
    parser.add_argument("--default-phase", type=int, choices=(0, 1), default=0)
    parser.add_argument("--out", metavar="PATH", help="output field file")
    parser.add_argument("--format", choices=("csv", "vtk"), default="csv")
    parser.add_argument("--mc-check", type=int, metavar="N", help="Monte Carlo samples per interface cell")
    parser.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    parser.add_argument("--report-corners", action="store_true", help="print corner-case counters")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for cell computation")
    parser.add_argument("--plots", metavar="DIR", help="render report figures into DIR")
    return parser


def parse_config(argv) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)

    if (args.mesh is None) == (not args.gen_sphere):
        parser.error("exactly one mesh source required: --mesh or --gen-sphere")
    counts = [int(c) for c in args.grid.split(",")] if args.grid.count(",") == 2 else None
    if counts is None or any(c < 1 for c in counts):
        parser.error("--grid needs NX,NY,NZ positive integers")
    dom = _parse_floats(args.domain, 6, "--domain")
    sizes = [(dom[3] - dom[0]) / counts[0], (dom[4] - dom[1]) / counts[1], (dom[5] - dom[2]) / counts[2]]
    if min(sizes) <= 0:
        parser.error("--domain extents must be positive")
    if max(sizes) - min(sizes) > 1e-12 * max(sizes):
        parser.error("cells must be cubic: (x1-x0)/nx == (y1-y0)/ny == (z1-z0)/nz")
    spheres = [tuple(_parse_floats(s, 5, "--gen-sphere")) for s in args.gen_sphere]
    if args.mc_check is not None and args.mc_check < 1:
        parser.error("--mc-check needs a positive sample count")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    grid = CartesianGrid(origin=(dom[0], dom[1], dom[2]), cell_size=sizes[0], counts=tuple(counts))
    return RunConfig(
        mesh_path=args.mesh,
        spheres=spheres,
        grid=grid,
        default_phase=args.default_phase,
        out_path=args.out,
        out_format=args.format,
        mc_samples=args.mc_check,
        seed=args.seed,
        report_corners=args.report_corners,
        threads=args.threads,
        plot_dir=args.plots,
    )


def _load_mesh(config: RunConfig) -> np.ndarray:
    if config.mesh_path is not None:
        mesh = mesh_io.read_mesh(config.mesh_path)
        if len(mesh) == 0:
            print("warning: mesh file contains zero triangles", file=sys.stderr)
        return mesh
    parts = []
    for cx, cy, cz, r, lbar in config.spheres:
        base = triangulate_sphere(SphereSpec(center=(0.0, 0.0, 0.0), radius=r, edge_length=lbar))
        parts.append(translate_mesh(base, (cx, cy, cz)))
    return np.concatenate(parts, axis=0)


def _mc_check(mesh, field, diag_count, samples, seed):
    grid = field.grid
    worst = 0.0
    cells = 0
    for cell in grid.cells():
        v = field.values[cell]
        if not 0.0 < v < 1.0:
            continue
        cells += 1
        estimate, stderr = monte_carlo_fraction(
            mesh, (grid.cell_origin(cell), grid.cell_size), samples, seed
        )
        diff = abs(v - estimate)
        if stderr > 0.0:
            ratio = diff / stderr
        else:
            ratio = 0.0 if diff <= 1.0 / samples else float("inf")
        worst = max(worst, ratio)
    return worst, cells


def run_cli(argv) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        mesh = _load_mesh(config)
    except (mesh_io.MeshFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    diag = Diagnostics()
    try:
        field = compute_fraction_field(
            mesh, config.grid, default_phase=config.default_phase,
            workers=config.threads, diag=diag,
        )
    except (InconsistentMeshError, ClassificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4

    print(f"total reference volume: {field.total_volume():.17g}")
    print(
        "cells: "
        f"interface={diag.interface_cells} full={diag.full_cells} "
        f"empty={diag.empty_cells} flood-filled={diag.flood_filled_cells} "
        f"defaulted={diag.defaulted_cells}"
    )
    if config.report_corners:
        print(
            "corner-case counters: "
            f"zero-length-edges={diag.zero_length_edges} "
            f"degenerate-polygons={diag.degenerate_polygons} "
            f"out-of-domain-triangles={diag.out_of_domain_triangles} "
            f"out-of-range-fractions={diag.out_of_range_fractions}"
        )
    if config.mc_samples is not None:
        worst, cells = _mc_check(mesh, field, diag, config.mc_samples, config.seed)
        print(
            f"mc-check: max |fraction - mc| / stderr = {worst:.3f} "
            f"over {cells} interface cells (n={config.mc_samples}, seed={config.seed})"
        )
    if config.out_path is not None:
        mesh_io.write_field(field, config.out_path, config.out_format)
        print(f"wrote {config.out_format} field to {config.out_path}")
    if config.plot_dir is not None:
        from .report import render_report

        for path in render_report(field, config.plot_dir):
            print(f"wrote figure {path}")
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
