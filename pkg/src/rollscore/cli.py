"""Command-line entry point: ``rollscore {generate,score,search,study}``.

Every JSON file written here embeds the full run configuration and the
format version, so a run can be reproduced from its own output.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .curvature import compute_curvatures
from .dynamics import (ApproxParams, RigidParams, approx_roll, rigid_roll,
                       rigid_roll_with_physics, uniform_contact_ledger)
from .errors import DegenerateHull, InsufficientPoints, IntegrationDiverged, RollscoreError
from .mesh import (DEFAULT_SAMPLES_PER_CIRCLE, RollerGenome, TriangleMesh,
                   generate_two_circle_roller, matched_cylinder)
from .scores import MaterialSuite, score_report
from .search import (OLOID, SearchGrid, convergence_study, format_table, resolution_study,
                     run_search, sensitivity_sweep, summarize_search, threshold_study)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_DIVERGED = 4
EXIT_INSUFFICIENT = 5

LAYERS = ("approx", "rigid", "rigid+physics", "uniform-contact")
STUDIES = ("sensitivity", "convergence", "resolution", "threshold")


@dataclass
class RunConfig:
    """Parameters of one CLI invocation; serialized verbatim into its outputs."""

    command: str
    geometry: dict = field(default_factory=dict)
    samples_per_circle: int = DEFAULT_SAMPLES_PER_CIRCLE
    approx: ApproxParams = field(default_factory=ApproxParams)
    rigid: RigidParams = field(default_factory=RigidParams)
    materials: MaterialSuite = field(default_factory=MaterialSuite)
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "geometry": self.geometry,
            "samples_per_circle": self.samples_per_circle,
            "approx": self.approx.to_dict(),
            "rigid": self.rigid.to_dict(),
            "materials": self.materials.to_dict(),
            "options": self.options,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "RunConfig":
        return cls(
            command=record["command"],
            geometry=record.get("geometry", {}),
            samples_per_circle=int(record.get("samples_per_circle", DEFAULT_SAMPLES_PER_CIRCLE)),
            approx=ApproxParams.from_dict(record.get("approx", {})),
            rigid=RigidParams.from_dict(record.get("rigid", {})),
            materials=MaterialSuite.from_dict(record.get("materials", {})),
            options=record.get("options", {}),
        )


def _envelope(config: RunConfig, payload: dict) -> dict:
    return {"format": io.FORMAT_VERSION, "config": config.to_dict(), **payload}


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _spins(text: str):
    try:
        spins = [tuple(float(x) for x in part.split(",")) for part in text.split(";") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not spins or any(len(s) != 3 for s in spins):
        raise argparse.ArgumentTypeError("spins are ';'-separated 'wx,wy,wz' triples")
    return tuple(spins)


# geometry ------------------------------------------------------------------

def _add_geometry(p: argparse.ArgumentParser, mesh_input: bool = True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--oloid", action="store_true", help="the oloid genome (90, 1, 1)")
    g.add_argument("--cylinder", action="store_true",
                   help="cylinder baseline matched to the oloid face count")
    if mesh_input:
        g.add_argument("--mesh", type=Path, help="OBJ or STL file to score")
    p.add_argument("--theta", type=float, help="tilt angle in degrees")
    p.add_argument("--d", type=float, help="centre offset in units of r1")
    p.add_argument("--rho", type=float, help="radius ratio r2/r1")


def _add_resolution(p):
    p.add_argument("--samples-per-circle", type=int, default=DEFAULT_SAMPLES_PER_CIRCLE)


def _geometry_spec(args) -> dict:
    explicit = [v is not None for v in (args.theta, args.d, args.rho)]
    if getattr(args, "mesh", None) is not None:
        return {"mesh": str(args.mesh)}
    if args.cylinder:
        return {"baseline": "cylinder"}
    if args.oloid:
        if any(explicit):
            raise ValueError("--oloid cannot be combined with --theta/--d/--rho")
        return {"genome": OLOID.to_dict()}
    if not all(explicit):
        raise ValueError("give --oloid, --cylinder, a mesh, or all of --theta, --d and --rho")
    return {"genome": RollerGenome(args.theta, args.d, args.rho).to_dict()}


def build_mesh(geometry: dict, samples_per_circle: int, mass: float = 1.0) -> TriangleMesh:
    """Instantiate the mesh described by a ``RunConfig.geometry`` record."""
    if "mesh" in geometry:
        path = Path(geometry["mesh"])
        reader = io.read_stl if path.suffix.lower() == ".stl" else io.read_obj
        return reader(path, mass)
    anchor_genome = OLOID
    if "baseline" in geometry:
        return matched_cylinder(generate_two_circle_roller(anchor_genome, samples_per_circle),
                                mass=mass)
    genome = RollerGenome.from_dict(geometry["genome"])
    return generate_two_circle_roller(genome, samples_per_circle, mass)


def _geometry_label(geometry: dict):
    if "genome" in geometry:
        return geometry["genome"]
    return geometry.get("baseline") or geometry.get("mesh")


def _materials(args) -> MaterialSuite:
    changes = {}
    if getattr(args, "fatigue_load", None) is not None:
        changes["fatigue_load"] = args.fatigue_load
    if getattr(args, "hertz_load", None) is not None:
        changes["hertz_load"] = args.hertz_load
    return MaterialSuite().with_(**changes)


def _rigid(args) -> RigidParams:
    changes = {}
    for name in ("sim_time", "dt", "contact_threshold"):
        value = getattr(args, name, None)
        if value is not None:
            changes[name] = value
    if getattr(args, "spins", None):
        changes["initial_spins"] = args.spins
    return RigidParams().with_(**changes)


def _add_rigid(p):
    p.add_argument("--sim-time", type=float, help="seconds per rigid-body run")
    p.add_argument("--dt", type=float, help="integration step")
    p.add_argument("--contact-threshold", type=float, help="contact height threshold")
    p.add_argument("--spins", type=_spins, help="initial angular velocities, e.g. '1,0,0;2,0,0'")


# commands -------------------------------------------------------------------

def cmd_generate(args) -> int:
    config = RunConfig("generate", _geometry_spec(args), args.samples_per_circle)
    mesh = build_mesh(config.geometry, config.samples_per_circle)
    out = Path(args.output)
    if out.suffix.lower() == ".stl":
        io.write_stl(mesh, out)
    else:
        io.write_obj(mesh, out)
    sidecar = out.with_suffix(out.suffix + ".json")
    io.write_json(sidecar, _envelope(config, {
        "mesh_file": out.name,
        "faces": mesh.n_faces,
        "vertices": mesh.n_vertices,
        "surface_area": mesh.total_area,
        "volume": mesh.volume,
        "inertia_tensor": mesh.inertia_tensor,
    }))
    print(f"wrote {out} ({mesh.n_faces} faces, area {mesh.total_area:.6f}) and {sidecar}")
    return EXIT_OK


def evaluate(config: RunConfig):
    """Run the configured oracle layer and return the score report."""
    layer = config.options["layer"]
    mesh = build_mesh(config.geometry, config.samples_per_circle, config.rigid.mass)
    label = _geometry_label(config.geometry)
    if layer == "approx":
        ledger = approx_roll(mesh, config.approx)
    elif layer == "rigid":
        ledger = rigid_roll(mesh, config.rigid)
    elif layer == "rigid+physics":
        ledger = rigid_roll_with_physics(mesh, config.rigid, config.materials,
                                         compute_curvatures(mesh))
    else:
        ledger = uniform_contact_ledger(mesh, compute_curvatures(mesh), config.materials)
    return score_report(mesh, ledger, label)


def cmd_score(args) -> int:
    config = RunConfig("score", _geometry_spec(args), args.samples_per_circle,
                       ApproxParams().with_(**({"contact_threshold": args.contact_threshold}
                                               if args.contact_threshold else {})),
                       _rigid(args), _materials(args), {"layer": args.layer})
    report = evaluate(config)
    io.write_json(args.output, _envelope(config, {"report": report.to_dict()}))
    print(f"layer {args.layer}, {report.face_count} faces, {report.samples} samples")
    for key, value in report.vector().items():
        print(f"  {key:<10}{value:.6e}")
    print(f"  {'p_mean':<10}{report.mean_peak_pressure:.6e}")
    print(f"  {'p_cv':<10}{report.pressure_cv:.6e}")
    return EXIT_OK


def cmd_search(args) -> int:
    grid = SearchGrid(args.theta_values, args.d_values, args.rho_values)
    if len(grid) == 0:
        raise ValueError("search grid is empty")
    config = RunConfig("search", {"grid": grid.to_dict()}, args.samples_per_circle,
                       rigid=_rigid(args), materials=_materials(args),
                       options={"top_k": args.top_k})
    results = run_search(grid, config.approx, config.rigid, args.top_k, config.materials,
                         config.samples_per_circle, args.workers)
    io.write_json(args.output, _envelope(config, {
        "summary": summarize_search(results),
        "results": [r.to_dict() for r in results],
    }))
    print(format_table(results))
    return EXIT_OK


def cmd_study(args) -> int:
    rigid = _rigid(args)
    geometry = {"genome": OLOID.to_dict()}
    options = {"study": args.study}
    if args.study == "sensitivity":
        if args.values is None or len(args.values) == 0:
            raise InsufficientPoints("sensitivity study needs --values")
        options.update(axis=args.axis, values=args.values)
        config = RunConfig("study", geometry, args.samples_per_circle, rigid=rigid, options=options)
        series = sensitivity_sweep(OLOID, args.axis, args.values, config.approx,
                                   config.samples_per_circle)
        payload = {"series": [{"value": v, "cds": s} for v, s in series]}
    elif args.study == "convergence":
        counts = [int(x) for x in (args.values or [50, 600])]
        if len(counts) < 2:
            raise InsufficientPoints("convergence study needs at least 2 sample counts")
        options["sample_counts"] = counts
        config = RunConfig("study", geometry, args.samples_per_circle, rigid=rigid, options=options)
        mesh = build_mesh(geometry, config.samples_per_circle, rigid.mass)
        series = convergence_study(mesh, counts, rigid)
        payload = {"series": [{"samples": n, "cds": s} for n, s in series],
                   "reduction_factor": series[0][1] / series[-1][1]}
    elif args.study == "resolution":
        res = [int(x) for x in (args.values or [100, 200, 350, 600])]
        options["resolutions"] = res
        config = RunConfig("study", geometry, args.samples_per_circle, rigid=rigid, options=options)
        fit = resolution_study(OLOID, res, rigid, args.workers)
        payload = {"series": [{"faces": f, "cds": s} for f, s in fit.points],
                   "exponent": fit.exponent, "prefactor": fit.prefactor,
                   "r_squared": fit.r_squared}
    else:
        eps = args.values or [0.01, 0.02, 0.04, 0.08, 0.16]
        if len(eps) < 2:
            raise InsufficientPoints("threshold study needs at least 2 thresholds")
        options["thresholds"] = eps
        config = RunConfig("study", geometry, args.samples_per_circle, rigid=rigid, options=options)
        rows = threshold_study(eps, rigid, config.samples_per_circle)
        ratios = [r[3] for r in rows]
        payload = {"series": [{"threshold": e, "cds_oloid": o, "cds_cylinder": c, "ratio": q}
                              for e, o, c, q in rows],
                   "ratio_spread": max(ratios) / min(ratios)}
    io.write_json(args.output, _envelope(config, payload))
    for row in payload["series"]:
        print("  ".join(f"{k}={v:.6g}" for k, v in row.items()))
    for key in ("reduction_factor", "exponent", "r_squared", "ratio_spread"):
        if key in payload:
            print(f"{key} = {payload[key]:.6g}")
    return EXIT_OK


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rollscore",
                                     description="Contact-uniformity scoring of rolling solids.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a roller or baseline mesh (OBJ/STL)")
    _add_geometry(p, mesh_input=False)
    _add_resolution(p)
    p.add_argument("-o", "--output", default="roller.obj", help="mesh path (.obj or .stl)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("score", help="score one geometry with an oracle layer")
    _add_geometry(p)
    _add_resolution(p)
    _add_rigid(p)
    p.add_argument("--layer", choices=LAYERS, default="rigid")
    p.add_argument("--fatigue-load", type=float)
    p.add_argument("--hertz-load", type=float)
    p.add_argument("-o", "--output", default="score.json")
    p.set_defaults(func=cmd_score)

    grid = SearchGrid()
    p = sub.add_parser("search", help="two-stage grid search over two-circle rollers")
    p.add_argument("--theta-values", type=_float_list, default=list(grid.theta_values))
    p.add_argument("--d-values", type=_float_list, default=list(grid.d_values))
    p.add_argument("--rho-values", type=_float_list, default=list(grid.rho_values))
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--workers", type=int, help="process count (default: $ROLLSCORE_WORKERS or 1)")
    _add_resolution(p)
    _add_rigid(p)
    p.add_argument("--fatigue-load", type=float)
    p.add_argument("-o", "--output", default="search.json")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("study", help="sensitivity, convergence, resolution or threshold sweep")
    p.add_argument("study", choices=STUDIES)
    p.add_argument("--axis", choices=("theta", "d", "rho"), default="rho")
    p.add_argument("--values", type=_float_list,
                   help="comma-separated sweep values (axis values, sample counts, "
                        "samples per circle or thresholds)")
    p.add_argument("--workers", type=int)
    _add_resolution(p)
    _add_rigid(p)
    p.add_argument("-o", "--output", default="study.json")
    p.set_defaults(func=cmd_study)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegenerateHull as exc:
        print(f"error: degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except IntegrationDiverged as exc:
        print(f"error: integration diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except InsufficientPoints as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except RollscoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
