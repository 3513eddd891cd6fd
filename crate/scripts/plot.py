#!/usr/bin/env python3
"""Plot cohsim output files.

    python3 scripts/plot.py sweep.csv [more sweeps...] -o sweep.png
    python3 scripts/plot.py fcs.json -o fcs.png
    python3 scripts/plot.py wigner.csv -o wigner.png

The file kind is read from the `command` entry of its metadata.
"""

import argparse
import csv
import io
import json
import sys

import matplotlib
import matplotlib.ticker

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def read_csv(path):
    meta, body = {}, []
    with open(path) as f:
        for line in f:
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                meta[key] = value.strip()
            else:
                body.append(line)
    rows = list(csv.reader(io.StringIO("".join(body))))
    return meta, rows[0], rows[1:]


def read_any(path):
    if path.endswith(".json"):
        with open(path) as f:
            data = json.load(f)
        return data.get("meta", {}), data
    meta, header, rows = read_csv(path)
    return meta, (header, rows)


def label(meta):
    parts = [f"N={meta.get('n', '?')}"]
    if "na" in meta:
        parts.append(f"Na={meta['na']}")
    if "mode" in meta:
        parts.append(meta["mode"])
    if meta.get("readout") == "shots":
        parts.append(f"{meta['shots']} shots")
    if meta.get("mitigate") == "true":
        parts.append("mitigated")
    elif "noise" in meta:
        parts.append("noisy")
    return ", ".join(parts)


def plot_sweeps(items, ax):
    for meta, data in items:
        if isinstance(data, dict):
            pts = data["points"]
            k = [p["k"] for p in pts]
            c2 = [p["c2"] for p in pts]
            err = [p.get("c2_std_error") for p in pts]
        else:
            header, rows = data
            col = {h: i for i, h in enumerate(header)}
            k = [int(r[col["k"]]) for r in rows]
            c2 = [float(r[col["C2"]]) for r in rows]
            err = [float(r[col["C2_std_error"]]) for r in rows] if "C2_std_error" in col else [None] * len(k)
        if all(e is not None for e in err):
            ax.errorbar(k, c2, yerr=err, marker="o", capsize=3, label=label(meta))
        else:
            ax.plot(k, c2, marker="o", label=label(meta))
    ax.xaxis.set_major_locator(matplotlib.ticker.MaxNLocator(integer=True))
    ax.set_xlabel("coupled system qubits k")
    ax.set_ylabel("C2")
    ax.legend()


def plot_fcs(meta, data, ax):
    if isinstance(data, dict):
        thetas = np.array(data["thetas"])
        values = np.array(data["values"])
        probs = np.array(data["probs"])
    else:
        header, rows = data
        t = np.array([float(r[0]) for r in rows])
        v = np.array([float(r[1]) for r in rows])
        p = np.array([float(r[2]) for r in rows])
        thetas, values = np.unique(t), np.unique(v)
        probs = p.reshape(len(thetas), len(values))
    mesh = ax.pcolormesh(thetas, values, probs.T, shading="nearest", cmap="viridis")
    plt.colorbar(mesh, ax=ax, label="probability")
    ax.set_xlabel("theta")
    ax.set_ylabel("S_theta outcome")
    ax.set_title(f"{meta.get('state', 'input')} state, N={meta.get('n', '?')}")


def plot_wigner(meta, data, ax):
    if isinstance(data, dict):
        sx, sy, w = np.array(data["sx"]), np.array(data["sy"]), np.array(data["values"])
    else:
        header, rows = data
        sy = np.array([float(h) for h in header[1:]])
        sx = np.array([float(r[0]) for r in rows])
        w = np.array([[float(x) for x in r[1:]] for r in rows])
    lim = np.abs(w).max()
    mesh = ax.pcolormesh(sx, sy, w.T, shading="nearest", cmap="RdBu_r", vmin=-lim, vmax=lim)
    plt.colorbar(mesh, ax=ax, label="W")
    ax.set_aspect("equal")
    ax.set_xlabel("S_x")
    ax.set_ylabel("S_y")
    ax.set_title(f"{meta.get('state', 'input')} state, N={meta.get('n', '?')}, sigma={meta.get('sigma', '?')}")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("files", nargs="+")
    ap.add_argument("-o", "--out", default="plot.png")
    args = ap.parse_args()

    items = [read_any(p) for p in args.files]
    kinds = {m.get("command") for m, _ in items}
    if len(kinds) != 1:
        sys.exit(f"cannot mix file kinds in one plot: {sorted(map(str, kinds))}")
    kind = kinds.pop()

    fig, ax = plt.subplots(figsize=(6, 4.5))
    if kind == "sweep":
        plot_sweeps(items, ax)
    elif kind in ("fcs", "wigner") and len(items) == 1:
        (plot_fcs if kind == "fcs" else plot_wigner)(*items[0], ax)
    else:
        sys.exit(f"don't know how to plot {kind!r} ({len(items)} file(s))")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
