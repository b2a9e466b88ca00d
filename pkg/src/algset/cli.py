"""Command line interface: ``algset <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .estimators.polynomials import PolynomialSystem
from .estimators.structure import DegenerateProjection, parse_structure, project_factorized
from .estimators.tube import default_lambda, tube_contour_2d
from .estimators.zeroset import chain_points, zero_set_slice_2d
from .experiments import STUDIES, run_study
from .metrics import hausdorff, pk_record
from .moments import NoiseModel
from .pipeline import fit, model_from_dict, model_to_dict
from .spectral import ConvergenceError
from .svg import render_svg
from .synth import SHAPES, WINDOW, make_dataset, shape_from_name

log = logging.getLogger("algset")

EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


class EmptyResult(Exception):
    pass


def _noise(args, d=None):
    if getattr(args, "cov", None):
        text = Path(args.cov).read_text()
        try:
            cov = np.asarray(json.loads(text), dtype=float)
        except json.JSONDecodeError:
            cov = np.loadtxt(args.cov, delimiter=",", ndmin=2)
        noise = NoiseModel.full(cov)
        if d is not None and cov.shape[0] != d:
            raise UsageError(f"covariance is {cov.shape[0]}x{cov.shape[0]}, data has d={d}")
        return noise
    if getattr(args, "sigma", None) is not None:
        if args.sigma < 0:
            raise UsageError("--sigma must be >= 0")
        return NoiseModel.from_sigma(args.sigma)
    return None


def _window(text):
    vals = [float(v) for v in str(text).split(",")]
    if len(vals) == 1:
        vals = [-vals[0], vals[0], -vals[0], vals[0]]
    if len(vals) != 4 or not (vals[0] < vals[1] and vals[2] < vals[3]):
        raise argparse.ArgumentTypeError("window is 'h' or 'xmin,xmax,ymin,ymax'")
    return ((vals[0], vals[1]), (vals[2], vals[3]))


def _int_list(text):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load_model(path):
    try:
        return model_from_dict(io.read_json(path))
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: not a valid model file ({exc})") from None


def _system(model):
    if model.kernel.k_hat == 0:
        raise EmptyResult("no vanishing polynomials at cutoff")
    if model.basis.d != 2:
        raise UsageError("set reconstruction needs d = 2")
    return PolynomialSystem.from_kernel(model.basis, model.kernel)


def _zero_branches(system, window, grid):
    pts = zero_set_slice_2d(system, window, grid)
    step = max(window[0][1] - window[0][0], window[1][1] - window[1][0]) / max(grid - 1, 1)
    # closed branches repeat their first point so the CSV keeps the loop
    branches = [np.vstack([line, line[:1]]) if closed else line
                for line, closed in chain_points(pts, 4 * step)]
    return branches, len(pts)


# commands

def cmd_generate(args):
    try:
        shape = shape_from_name(args.shape)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    noise = _noise(args, shape.d) or NoiseModel.isotropic(0.0)
    ds = make_dataset(shape, args.n, noise, args.seed)
    io.write_points_csv(args.output, ds.observed)
    io.write_points_csv(io.latent_path(args.output), ds.latent)
    io.write_json(io.sidecar_path(args.output), {
        "shape": shape.to_dict(),
        "n": args.n,
        "noise": noise.to_dict(),
        "seed": args.seed,
        "g_star": shape.g_star,
    })
    print(f"wrote {args.n} points to {args.output}")


def cmd_fit(args):
    x = io.read_points_csv(args.data)
    if x.shape[0] < 2:
        raise UsageError("need at least two observations")
    noise = _noise(args, x.shape[1])
    if noise is None and not args.naive:
        raise UsageError("give --sigma or --cov (or --naive to skip debiasing)")
    if args.cutoff is not None and args.cutoff <= 0:
        raise UsageError("--cutoff must be positive")
    model = fit(x, args.degree, noise, cutoff=args.cutoff, cutoff_const=args.cutoff_const,
                naive=args.naive)
    data = model_to_dict(model)
    io.write_json(args.output, data)
    lam = " ".join(f"{v:.6g}" for v in model.kernel.eigenvalues)
    print(f"spectrum: {lam}")
    print(f"cutoff {model.kernel.cutoff:.6g}  k_hat={model.kernel.k_hat}")


def cmd_zeros(args):
    model = _load_model(args.model)
    system = _system(model)
    branches, count = _zero_branches(system, args.window, args.grid)
    io.write_polylines_csv(args.output, branches)
    print(f"{count} zero-set points in {len(branches)} branches")


def cmd_tube(args):
    model = _load_model(args.model)
    system = _system(model)
    lam = args.lam if args.lam is not None else default_lambda(model.n)
    if lam <= 0:
        raise UsageError("--lambda must be positive")
    lines = tube_contour_2d(system, lam, args.window, args.grid, close=True)
    io.write_polylines_csv(args.output, [line for line, _ in lines])
    print(f"tube at lambda={lam:.6g}: {len(lines)} boundary curves")


def cmd_project(args):
    model = _load_model(args.model)
    try:
        structure = parse_structure(args.structure)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if structure.total != model.basis.g:
        raise UsageError(f"structure degrees sum to {structure.total}, model degree is {model.basis.g}")
    if model.kernel.k_hat == 0:
        raise EmptyResult("no vanishing polynomials at cutoff")
    projected = [
        project_factorized(model.kernel.vectors[:, k], structure, model.basis.d,
                           restarts=args.restarts, seed=args.seed)
        for k in range(model.kernel.k_hat)
    ]
    model.structure = {
        "degrees": list(structure.degrees),
        "seed": args.seed,
        "restarts": args.restarts,
        "projections": [p.to_dict() for p in projected],
    }
    io.write_json(args.output, model_to_dict(model))
    system = PolynomialSystem(model.basis, np.array([p.product() for p in projected]))
    set_path = args.set or Path(args.output).with_suffix(".zeros.csv")
    if model.basis.d == 2:
        branches, _ = _zero_branches(system, args.window, args.grid)
        io.write_polylines_csv(set_path, branches)
    for k, p in enumerate(projected):
        print(f"vector {k}: residual {p.residual:.3g}, factors of degrees {list(p.degrees)}")


def cmd_experiment(args):
    report = run_study(args.study, args.shape, args.sigma, args.ns, args.reps, args.seed,
                       g=args.degree, cutoff_const=args.cutoff_const)
    io.write_json(args.output, report)
    s = report["slope"]
    if s["value"] is not None:
        se = "n/a" if s["stderr"] is None else f"{s['stderr']:.3f}"
        print(f"log-log slope of {s['of']}: {s['value']:.3f} (se {se})")


def _read_sets(paths):
    out, warnings = [], []
    for p in paths or []:
        lines = io.read_polylines_csv(p)
        if not lines:
            warnings.append(f"{p} is empty")
            print(f"warning: {p} holds no points", file=sys.stderr)
        out.extend(lines)
    return out, warnings


def cmd_plot(args):
    data = io.read_points_csv(args.data)
    if data.shape[1] != 2:
        raise UsageError("plots need 2-d data")
    latent = io.read_points_csv(args.latent) if args.latent else None
    sets, warnings = _read_sets(args.sets)
    naive, w2 = _read_sets(args.naive_set)
    curves, tube = (sets, []) if args.style != "tube" else ([], sets)
    if args.style == "scatter":
        curves = []
    svg = render_svg(data, latent, curves=curves, naive_curves=naive, tube=tube,
                     window=args.window, title=args.title or "",
                     deterministic=args.deterministic, warnings=warnings + w2)
    Path(args.output).write_text(svg)


def cmd_metrics(args):
    a = io.read_points_csv(args.a)[:, :2] if args.a else None
    b = io.read_points_csv(args.b)[:, :2] if args.b else None
    if args.metric == "hausdorff":
        if not len(a) or not len(b):
            raise UsageError("Hausdorff distance needs nonempty sets")
        rec = {"metric": "hausdorff", "value": hausdorff(a, b), "T": None, "nodes": None,
               "tail_bound": None}
    else:
        rec = pk_record(a, b, args.T, args.nodes)
    if args.output:
        io.write_json(args.output, rec)
    print(json.dumps(rec, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algset", description="Estimate algebraic sets from noisy samples.")
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def seeded(p):
        p.add_argument("--seed", type=int, default=0)

    def noisy(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--sigma", type=float, help="isotropic noise standard deviation")
        g.add_argument("--cov", help="covariance matrix file (JSON or CSV)")

    def gridded(p, grid=400):
        p.add_argument("--window", type=_window, default=((-WINDOW, WINDOW), (-WINDOW, WINDOW)))
        p.add_argument("--grid", type=int, default=grid)

    p = sub.add_parser("generate", help="sample a noisy shape")
    p.add_argument("--shape", required=True, help=f"one of {sorted(SHAPES)}")
    p.add_argument("--n", type=int, required=True)
    noisy(p)
    seeded(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fit", help="estimate vanishing polynomials")
    p.add_argument("data")
    p.add_argument("--degree", "-g", type=int, required=True)
    noisy(p)
    c = p.add_mutually_exclusive_group()
    c.add_argument("--cutoff", type=float)
    c.add_argument("--cutoff-const", type=float, default=1.0)
    p.add_argument("--naive", action="store_true", help="skip debiasing")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("zeros", help="common zero set by slicing")
    p.add_argument("model")
    gridded(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("tube", help="tube boundary")
    p.add_argument("model")
    gridded(p)
    lam = p.add_mutually_exclusive_group()
    lam.add_argument("--lambda", dest="lam", type=float)
    lam.add_argument("--lambda-default", action="store_true", help="ln(n)/sqrt(n) (the default)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_tube)

    p = sub.add_parser("project", help="structure-aware factorized projection")
    p.add_argument("model")
    p.add_argument("--structure", required=True, help="factor degrees, e.g. 1,1")
    p.add_argument("--restarts", type=int, default=20)
    seeded(p)
    gridded(p)
    p.add_argument("--set", help="zero-set CSV of the factored polynomials")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("experiment", help="Monte Carlo study over n")
    p.add_argument("--study", choices=STUDIES, required=True)
    p.add_argument("--shape", default="circle")
    p.add_argument("--sigma", type=float, default=0.4)
    p.add_argument("--ns", type=_int_list, default=[500, 1000, 2000, 4000])
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--degree", "-g", type=int)
    p.add_argument("--cutoff-const", type=float, default=1.0)
    seeded(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("plot", help="static SVG figure")
    p.add_argument("data")
    p.add_argument("sets", nargs="*")
    p.add_argument("--style", choices=("scatter", "curve", "tube"), default="curve")
    p.add_argument("--latent")
    p.add_argument("--naive-set", action="append")
    p.add_argument("--window", type=_window)
    p.add_argument("--title")
    p.add_argument("--deterministic", action="store_true", help="omit the timestamp")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("metrics", help="distance between two point sets")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--metric", choices=("hausdorff", "pk"), default="hausdorff")
    p.add_argument("--T", type=float, default=5.0)
    p.add_argument("--nodes", type=int, default=256)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except EmptyResult as exc:
        print(f"algset: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (ConvergenceError, DegenerateProjection, np.linalg.LinAlgError) as exc:
        print(f"algset: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, OSError) as exc:
        print(f"algset: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
