#!/usr/bin/env python3
"""Render the CSV series written by `crnsim run` into PNG figures."""

import argparse
import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_series(path, x_col, y_col, err_col):
    data = defaultdict(lambda: ([], [], []))
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            xs, ys, es = data[row["algorithm"]]
            xs.append(float(row[x_col]))
            ys.append(float(row[y_col]))
            es.append(float(row[err_col]))
    return data


def plot_lines(data, xlabel, ylabel, out_path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, (xs, ys, es) in sorted(data.items()):
        ax.plot(xs, ys, label=name, linewidth=1.2)
        lo = [y - e for y, e in zip(ys, es)]
        hi = [y + e for y, e in zip(ys, es)]
        ax.fill_between(xs, lo, hi, alpha=0.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    print(f"wrote {out_path}")


def plot_track(path, out_path):
    est_x, est_y, true_x, true_y = [], [], [], []
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    algorithms = sorted({r["algorithm"] for r in rows})
    fig, ax = plt.subplots(figsize=(6, 6))
    for alg in algorithms:
        est_x = [float(r["est_x"]) for r in rows if r["algorithm"] == alg]
        est_y = [float(r["est_y"]) for r in rows if r["algorithm"] == alg]
        ax.scatter(est_x, est_y, s=6, alpha=0.5, label=f"{alg} estimates")
    true_x = [float(r["true_x"]) for r in rows if r["algorithm"] == algorithms[0]]
    true_y = [float(r["true_y"]) for r in rows if r["algorithm"] == algorithms[0]]
    ax.plot(true_x, true_y, "k-", linewidth=1.5, label="true track")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    print(f"wrote {out_path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("results_dir", help="directory written by `crnsim run`")
    parser.add_argument("--prefix", default="crnsim", help="output file prefix")
    parser.add_argument("--out-dir", default=None, help="where to put the PNGs")
    args = parser.parse_args()
    out_dir = args.out_dir or args.results_dir
    os.makedirs(out_dir, exist_ok=True)

    regret = os.path.join(args.results_dir, "regret.csv")
    if os.path.exists(regret):
        plot_lines(read_series(regret, "pri", "regret_mean", "regret_stderr"),
                   "PRI", "cumulative regret",
                   os.path.join(out_dir, f"{args.prefix}_regret.png"))

    errors = os.path.join(args.results_dir, "position_error.csv")
    if os.path.exists(errors):
        plot_lines(read_series(errors, "cpi", "pos_error_mean", "pos_error_stderr"),
                   "CPI", "position error (m)",
                   os.path.join(out_dir, f"{args.prefix}_position_error.png"))

    positions = os.path.join(args.results_dir, "positions.csv")
    if os.path.exists(positions):
        plot_track(positions, os.path.join(out_dir, f"{args.prefix}_track.png"))

    collisions = os.path.join(args.results_dir, "collisions.csv")
    if os.path.exists(collisions):
        plot_lines(read_series(collisions, "block", "collisions_mean", "collisions_stderr"),
                   "block", "collisions per block",
                   os.path.join(out_dir, f"{args.prefix}_collisions.png"))


if __name__ == "__main__":
    main()
