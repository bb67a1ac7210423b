"""Geometry exporters: core polylines and tube point clouds."""

from __future__ import annotations

import csv

import numpy as np

from .geometry import sample_core, sigma_polyline


def export_geometry(system, path, what="cores", fmt="csv", nodes=128):
    """Write level-1 core curves / tube samples / x2=0 slices to disk.

    cores: one closed polyline per tube word; tubes: core point clouds;
    slice: the two offset curves of each level-1 tube in the x2 = 0 flat.
    Returns the number of records written.
    """
    params = system.params
    rows = []
    if what == "cores":
        for t in system.tubes:
            if t.level != 1:
                continue
            pts = sigma_polyline(t.word[0], params.m, params.b, nodes)
            for idx, p in enumerate(pts):
                rows.append((t.word, idx, *p))
    elif what == "tubes":
        for t in system.tubes:
            if t.level != 1:
                continue
            pts = sample_core(t.word[0], params.m, params.b, 16, 64)
            for idx, p in enumerate(pts):
                rows.append((t.word, idx, *p))
    elif what == "slice":
        rho = params.rho or 0.05
        r = rho * params.b ** 2
        for t in system.tubes:
            if t.level != 1:
                continue
            pts = sigma_polyline(t.word[0], params.m, params.b, nodes)
            center = pts.mean(axis=0)
            for sign in (+1.0, -1.0):
                for idx, p in enumerate(pts):
                    d = p - center
                    nrm = np.linalg.norm(d)
                    q = p + sign * r * (d / nrm if nrm else 0)
                    rows.append((t.word + (int(sign),), idx, *q))
    else:
        raise ValueError(f"unknown export kind {what!r}")

    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["word", "index", "x1", "x2", "x3", "x4"])
            for word, idx, *p in rows:
                w.writerow(["-".join(map(str, word)), idx, *p])
    elif fmt == "obj":
        with open(path, "w") as fh:
            fh.write("# cubalex necklace export (x2 dropped)\n")
            start = 1
            curves = {}
            for word, idx, *p in rows:
                curves.setdefault(word, []).append(p)
            for word, pts in curves.items():
                for p in pts:
                    fh.write(f"v {p[0]} {p[2]} {p[3]}\n")
                ids = " ".join(str(start + i) for i in range(len(pts)))
                fh.write(f"l {ids} {start}\n")
                start += len(pts)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return len(rows)
