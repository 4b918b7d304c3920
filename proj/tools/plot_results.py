#!/usr/bin/env python3
"""Plot or summarize a dklms-sim results.csv.

With an output path: write log-scale MSE learning curves to PNG
(requires matplotlib). Without one: print per-algorithm summary lines.
"""

import argparse
import csv
import math
import sys


def load(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "n":
        sys.exit(f"{path}: not a results.csv (missing 'n' header)")
    header = rows[0]
    algs = [c[: -len("_mse")] for c in header if c.endswith("_mse")]
    cols = {name: header.index(name + "_mse") for name in algs}
    curves = {name: [] for name in algs}
    for row in rows[1:]:
        for name, idx in cols.items():
            curves[name].append(float(row[idx]))
    return curves


def summarize(curves):
    for name, mse in curves.items():
        finite = [v for v in mse if math.isfinite(v)]
        tail = finite[-min(500, len(finite)):] if finite else []
        steady = sum(tail) / len(tail) if tail else float("nan")
        note = "" if len(finite) == len(mse) else "  (diverged)"
        print(f"{name:>18}: steps={len(mse)}  steady-state={steady:.6g}{note}")


def plot(curves, out_path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, mse in curves.items():
        ax.plot(range(1, len(mse) + 1), mse, label=name, linewidth=1.0)
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("network MSE")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    print(f"wrote {out_path}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("results", help="path to results.csv")
    ap.add_argument("-o", "--out", help="output PNG; omit for text summary")
    args = ap.parse_args()
    curves = load(args.results)
    if args.out:
        plot(curves, args.out)
    else:
        summarize(curves)


if __name__ == "__main__":
    main()
