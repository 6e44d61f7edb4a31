"""Command-line front end: ``mm-spectra <command> ... --out DIR``.

Every run writes its outputs plus a ``manifest.json`` echoing the resolved
configuration into ``--out``.  Exit codes: 0 success, 2 input error,
3 numerical error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import io as mmio
from .harmonics import fiedler, min_connected_rho, rho_above
from .inference import bootstrap_test, confidence_bands, make_sample, mean_spectrum
from .mmspace import InputError, MassPolicy
from .signatures import build_grid, classical_mds, pairwise_distances
from .spectrum import NumericalError, spectrum, sweep
from .ssl import SslProblem, solve

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3


def _policy(args):
    if args.mass == "degree":
        return MassPolicy.degree(args.total_mass)
    return MassPolicy.uniform(args.total_mass)


def _load(path, args):
    return mmio.load_space(path, _policy(args))


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_spectrum(args):
    space = _load(args.input, args)
    out = _out(args)
    written = []
    if args.sweep:
        curve = sweep(space)
        mmio.write_curve_json(curve, out / "curve.json")
        mmio.write_curve_csv(curve, out / "curve.csv")
        written += ["curve.json", "curve.csv"]
        if args.plot:
            from .plotting import plot_curve
            plot_curve(curve, out / "curve.svg")
            written.append("curve.svg")
    else:
        spec = spectrum(space, args.rho)
        (out / "spectrum.csv").write_text(",".join(repr(float(v)) for v in spec.values) + "\n")
        (out / "spectrum.json").write_text(json.dumps({"rho": args.rho, "values": spec.values.tolist()}))
        written += ["spectrum.csv", "spectrum.json"]
    return written


def cmd_distance(args):
    spaces = [_load(p, args) for p in args.inputs]
    out = _out(args)
    curves = [sweep(s) for s in spaces]
    grid = build_grid(spaces, args.grid)
    D = pairwise_distances(curves, grid, args.kprime, exact=args.exact)
    mmio.write_matrix_csv(D.D, out / "distances.csv")
    mds = classical_mds(D, args.dims)
    mmio.write_matrix_csv(mds.coords, out / "mds.csv", [f"mds{k + 1}" for k in range(args.dims)])
    written = ["distances.csv", "mds.csv"]
    if args.plot:
        from .plotting import plot_mds
        plot_mds(mds.coords, out / "mds.svg")
        written.append("mds.svg")
    return written


def _samples(dirs, args):
    groups = [mmio.load_sample_dir(d, _policy(args)) for d in dirs]
    grid = build_grid([s for g in groups for s in g], args.grid)
    curves = [[sweep(s) for s in g] for g in groups]
    k_prime = args.kprime or min(c.K for g in curves for c in g)
    return [make_sample(c, grid, k_prime) for c in curves]


def cmd_test(args):
    s1, s2 = _samples([args.sample_a, args.sample_b], args)
    out = _out(args)
    res = bootstrap_test(s1, s2, B=args.B, seed=args.seed,
                         scaling="raw" if args.raw_statistic else "calibrated",
                         plus_one=args.plus_one)
    report = res.to_dict()
    report["alpha"] = args.alpha
    report["reject"] = bool(res.p_value < args.alpha)
    (out / "test.json").write_text(json.dumps(report, indent=2))
    return ["test.json"]


def cmd_harmonics(args):
    space = _load(args.input, args)
    out = _out(args)
    if args.rho == "auto":
        rho = rho_above(space, min_connected_rho(space))
    else:
        try:
            rho = float(args.rho)
        except ValueError as exc:
            raise InputError(f"--rho must be 'auto' or a number, got {args.rho!r}") from exc
    rep = fiedler(space, rho, args.q)
    (out / "harmonics.json").write_text(json.dumps(rep.to_dict(), indent=2))
    written = ["harmonics.json"]
    coords_path = args.coords or (args.input if str(args.input).lower().endswith(".csv") else None)
    if args.plot and coords_path:
        from .plotting import plot_harmonic
        data = np.genfromtxt(coords_path, delimiter=",", names=True)
        cols = [n for n in data.dtype.names if n.lower() != "mass"]
        coords = np.column_stack([data[c] for c in cols])
        plot_harmonic(coords, rep, out / "harmonics.svg")
        written.append("harmonics.svg")
    return written


def cmd_ssl(args):
    space = _load(args.input, args)
    out = _out(args)
    labels = mmio.read_labels_csv(args.labels)
    sol = solve(SslProblem(space, args.rho, args.tau, labels))
    mmio.write_predictions_csv(sol, out / "predictions.csv")
    return ["predictions.csv"]


def cmd_bands(args):
    samples = _samples(args.sample_dirs, args)
    out = _out(args)
    which = args.which if args.which in ("fiedler", "largest") else int(args.which)
    bands = [confidence_bands(mean_spectrum(s), args.level, which) for s in samples]
    written = []
    for i, bd in enumerate(bands):
        name = "bands.csv" if len(bands) == 1 else f"bands_{i}.csv"
        mmio.write_bands_csv(bd, out / name)
        written.append(name)
    if args.plot:
        from .plotting import plot_bands
        plot_bands(bands, out / "bands.svg", [Path(d).name for d in args.sample_dirs])
        written.append("bands.svg")
    return written


def build_parser():
    p = argparse.ArgumentParser(prog="mm-spectra", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="mm_spectra_out", help="output directory")
    common.add_argument("--mass", choices=["uniform", "degree"], default="uniform",
                        help="mass policy for point-cloud and edge-list inputs")
    common.add_argument("--total-mass", type=float, default=1.0)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--no-plot", dest="plot", action="store_false")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="spectrum at one rho or full sweep")
    s.add_argument("input")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--rho", type=float)
    g.add_argument("--sweep", action="store_true")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("distance", parents=[common], help="pairwise spectral distances + MDS")
    s.add_argument("inputs", nargs="+")
    s.add_argument("--grid", type=int, default=200)
    s.add_argument("--kprime", type=int, default=None)
    s.add_argument("--exact", action="store_true", help="exact supremum over all breakpoints")
    s.add_argument("--dims", type=int, default=2)
    s.set_defaults(func=cmd_distance)

    s = sub.add_parser("test", parents=[common], help="bootstrap two-sample test")
    s.add_argument("sample_a")
    s.add_argument("sample_b")
    s.add_argument("--B", type=int, default=1000)
    s.add_argument("--alpha", "--level", dest="alpha", type=float, default=0.05)
    s.add_argument("--grid", type=int, default=200)
    s.add_argument("--kprime", type=int, default=None)
    s.add_argument("--raw-statistic", action="store_true",
                   help="compare the unscaled statistic with the bootstrap draws")
    s.add_argument("--plus-one", action="store_true", help="(1 + #exceed) / (B + 1) p-value")
    s.set_defaults(func=cmd_test)

    s = sub.add_parser("harmonics", parents=[common], help="Fiedler vector and sign-change region")
    s.add_argument("input")
    s.add_argument("--rho", default="auto")
    s.add_argument("--q", type=float, default=0.05)
    s.add_argument("--coords", default=None, help="CSV of node coordinates for the SVG overlay")
    s.set_defaults(func=cmd_harmonics)

    s = sub.add_parser("ssl", parents=[common], help="semi-supervised label propagation")
    s.add_argument("input")
    s.add_argument("labels")
    s.add_argument("--rho", type=float, required=True)
    s.add_argument("--tau", type=float, default=1.0)
    s.set_defaults(func=cmd_ssl)

    s = sub.add_parser("bands", parents=[common], help="pointwise confidence bands of a mean spectrum")
    s.add_argument("sample_dirs", nargs="+")
    s.add_argument("--which", default="fiedler", help="fiedler, largest or a 1-based index")
    s.add_argument("--level", type=float, default=0.95)
    s.add_argument("--grid", type=int, default=200)
    s.add_argument("--kprime", type=int, default=None)
    s.set_defaults(func=cmd_bands)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written = args.func(args)
    except InputError as exc:
        print(f"mm-spectra: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"mm-spectra: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    config = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {"version": __version__, "config": config, "outputs": written}
    (Path(args.out) / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
