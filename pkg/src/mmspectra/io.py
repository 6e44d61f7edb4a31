"""Readers and writers for the on-disk formats.

* mm-space JSON: ``{"labels": [...], "dist": [[...]], "mass": [...]}``, with
  the string ``"inf"`` for unreachable pairs.
* point-cloud CSV: one row per point, columns ``x1..xD`` and optionally ``mass``.
* edge list: lines ``i j length`` (0-based), ``#`` starts a comment.
* spectral curve JSON ``{"breakpoints": [...], "spectra": [[...], ...]}`` and CSV.
* SSL labels CSV ``node_index,label``; predictions CSV ``node_index,score,prediction``.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .mmspace import InputError, MassPolicy, MmSpace, from_graph, from_points
from .spectrum import SpectralCurve


def _enc(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _dec(x):
    if isinstance(x, str):
        if x.lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise InputError(f"unexpected string {x!r} in numeric field")
    return float(x)


def space_to_dict(space: MmSpace) -> dict:
    return {
        "labels": list(space.labels),
        "dist": [[_enc(v) for v in row] for row in space.dist],
        "mass": [float(m) for m in space.mass],
    }


def write_space_json(space: MmSpace, path):
    Path(path).write_text(json.dumps(space_to_dict(space)))


def read_space_json(path) -> MmSpace:
    try:
        obj = json.loads(Path(path).read_text())
        dist = [[_dec(v) for v in row] for row in obj["dist"]]
        mass = [float(m) for m in obj["mass"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not an mm-space JSON file ({exc})") from exc
    return MmSpace(dist, mass, obj.get("labels"))


def read_points_csv(path, policy: MassPolicy | None = None) -> MmSpace:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise InputError(f"{path}: empty point file")
    header = None
    try:
        [float(v) for v in rows[0]]
    except ValueError:
        header, rows = [h.strip().lower() for h in rows[0]], rows[1:]
    try:
        data = np.array([[float(v) for v in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric entry ({exc})") from exc
    if data.ndim != 2 or data.shape[0] == 0:
        raise InputError(f"{path}: no points")
    if header is not None and "mass" in header:
        k = header.index("mass")
        mass = data[:, k]
        coords = np.delete(data, k, axis=1)
        return from_points(coords, MassPolicy.explicit(mass))
    return from_points(data, policy)


def read_edge_list(path, policy: MassPolicy | None = None, n_nodes: int | None = None) -> MmSpace:
    edges = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 3:
            raise InputError(f"{path}:{lineno}: expected 'i j length'")
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from exc
    if n_nodes is None:
        n_nodes = 1 + max((max(i, j) for i, j, _ in edges), default=-1)
    return from_graph(edges, n_nodes, policy)


def load_space(path, policy: MassPolicy | None = None) -> MmSpace:
    """Read an mm-space, choosing the format from the file extension."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"{path}: no such file")
    ext = path.suffix.lower()
    if ext == ".json":
        return read_space_json(path)
    if ext == ".csv":
        return read_points_csv(path, policy)
    if ext in (".txt", ".edges", ".el", ".edgelist"):
        return read_edge_list(path, policy)
    raise InputError(f"{path}: unknown mm-space format {ext!r}")


SPACE_SUFFIXES = (".json", ".csv", ".txt", ".edges", ".el", ".edgelist")


def load_sample_dir(path, policy: MassPolicy | None = None) -> list[MmSpace]:
    """All mm-space files of a directory, in sorted filename order."""
    path = Path(path)
    if not path.is_dir():
        raise InputError(f"{path}: not a directory")
    files = sorted(p for p in path.iterdir() if p.suffix.lower() in SPACE_SUFFIXES)
    if not files:
        raise InputError(f"{path}: no mm-space files")
    return [load_space(p, policy) for p in files]


def curve_to_dict(curve: SpectralCurve) -> dict:
    return {
        "breakpoints": [float(b) for b in curve.breakpoints],
        "spectra": [[float(v) for v in row] for row in curve.values],
    }


def curve_from_dict(obj) -> SpectralCurve:
    bps = np.array(obj["breakpoints"], dtype=float)
    vals = np.array(obj["spectra"], dtype=float)
    if vals.ndim != 2 or vals.shape[0] != bps.size + 1:
        raise InputError("curve JSON needs one spectrum more than breakpoints")
    return SpectralCurve(bps, vals)


def write_curve_json(curve: SpectralCurve, path):
    Path(path).write_text(json.dumps(curve_to_dict(curve)))


def read_curve_json(path) -> SpectralCurve:
    return curve_from_dict(json.loads(Path(path).read_text()))


def write_curve_csv(curve: SpectralCurve, path):
    lo = np.concatenate([[0.0], curve.breakpoints])
    hi = np.concatenate([curve.breakpoints, [math.inf]])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["interval", "rho_low", "rho_high", "index", "eigenvalue"])
        for m, row in enumerate(curve.values):
            for k, v in enumerate(row):
                w.writerow([m, repr(float(lo[m])), _enc(hi[m]), k + 1, repr(float(v))])


def read_labels_csv(path) -> dict:
    labels = {}
    with open(path, newline="") as fh:
        for r in csv.reader(fh):
            if not r or r[0].strip().startswith("#"):
                continue
            try:
                j, y = int(r[0]), int(float(r[1]))
            except (ValueError, IndexError):
                if not labels and r[0].strip().lower().startswith("node"):
                    continue
                raise InputError(f"{path}: bad label row {r}")
            labels[j] = y
    return labels


def write_predictions_csv(solution, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node_index", "score", "prediction"])
        for j, (f, p) in enumerate(zip(solution.f, solution.predictions)):
            w.writerow([j, repr(float(f)), int(p)])


def write_matrix_csv(M, path, header=None):
    np.savetxt(path, np.asarray(M), delimiter=",", header=",".join(header) if header else "",
               comments="")


def write_bands_csv(bands, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rho", "mean", "lower", "upper"])
        for row in zip(bands.rho, bands.mean, bands.lower, bands.upper):
            w.writerow([repr(float(v)) for v in row])


def dod_to_dict(d) -> dict:
    return {"atoms": [_enc(a) for a in d.atoms], "weights": [float(w) for w in d.weights]}
