#!/usr/bin/env python3
"""Render a field CSV emitted by equidesign (header: i,j,phi,r,x,y,value).

Usage:
  python3 tools/plot_field.py out/rho.csv                 # disk heatmap -> rho.png
  python3 tools/plot_field.py out/rho.csv -o fig.png
  python3 tools/plot_field.py out/u_opt.csv --slice 0     # radial slice at phi index 0
"""
import argparse
import csv
import math
import sys
from pathlib import Path


def load(path):
    rows = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        need = {"i", "j", "phi", "r", "x", "y", "value"}
        if reader.fieldnames is None or need - set(reader.fieldnames):
            sys.exit(f"{path}: not a field CSV (expected header i,j,phi,r,x,y,value)")
        for row in reader:
            rows.append(
                (int(row["i"]), int(row["j"]), float(row["phi"]), float(row["r"]),
                 float(row["x"]), float(row["y"]), float(row["value"]))
            )
    n_phi = max(r[0] for r in rows) + 1
    n_radial = max(r[1] for r in rows) + 1
    if len(rows) != n_phi * n_radial:
        sys.exit(f"{path}: incomplete grid ({len(rows)} rows, expected {n_phi * n_radial})")
    return n_phi, n_radial, rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv_path")
    ap.add_argument("-o", "--output", help="output image path (default: <csv stem>.png)")
    ap.add_argument("--slice", type=int, metavar="I",
                    help="plot value vs r along angular index I instead of a heatmap")
    ap.add_argument("--cmap", default="viridis")
    args = ap.parse_args()

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        import numpy as np
    except ImportError:
        sys.exit("plot_field.py needs numpy and matplotlib (pip install numpy matplotlib)")

    n_phi, n_radial, rows = load(args.csv_path)
    out = args.output or str(Path(args.csv_path).with_suffix(".png"))
    val = np.empty((n_phi, n_radial))
    rad = np.empty(n_radial)
    phi = np.empty(n_phi)
    for i, j, p, r, _x, _y, v in rows:
        val[i, j] = v
        rad[j] = r
        phi[i] = p

    fig, ax_args = (None, None)
    if args.slice is not None:
        i = args.slice % n_phi
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(rad, val[i], marker=".", lw=1)
        ax.set_xlabel("r")
        ax.set_ylabel("value")
        ax.set_title(f"{Path(args.csv_path).name}  (phi = {phi[i]:.4f})")
        ax.grid(True, alpha=0.3)
    else:
        # close the periodic seam so pcolormesh does not leave a gap at phi=2pi
        phi_c = np.append(phi, 2 * math.pi)
        val_c = np.vstack([val, val[:1]])
        fig, ax = plt.subplots(subplot_kw={"projection": "polar"}, figsize=(6, 5))
        mesh = ax.pcolormesh(phi_c, rad, val_c.T, shading="gouraud", cmap=args.cmap)
        ax.set_title(Path(args.csv_path).name)
        fig.colorbar(mesh, ax=ax, shrink=0.8)

    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
