"""CSV artifact schemas shared by the CLI, the tests and the figure renderer.

All files are comma-separated with a header row and LF line endings; floats
carry 17 significant digits so a parsed value round-trips exactly.
"""

from __future__ import annotations

import os

import numpy as np
import yaml

from .dynamics import Trajectory

__all__ = [
    "fmt",
    "write_generations_csv",
    "write_distribution_csv",
    "write_trajectory_csv",
    "write_best_params_csv",
    "write_summary",
    "GENERATIONS_CSV",
    "DISTRIBUTION_CSV",
    "TRAJECTORY_CSV",
    "BEST_PARAMS_CSV",
    "SUMMARY_FILE",
]

GENERATIONS_CSV = "generations.csv"
DISTRIBUTION_CSV = "distribution.csv"
TRAJECTORY_CSV = "trajectory.csv"
BEST_PARAMS_CSV = "best_params.csv"
SUMMARY_FILE = "summary.yaml"


def fmt(x: float) -> str:
    return f"{x:.17g}"


def _write(path: str, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_generations_csv(out_dir: str, best_j, avg_j) -> str:
    path = os.path.join(out_dir, GENERATIONS_CSV)
    rows = (
        [str(g), fmt(b), fmt(a)] for g, (b, a) in enumerate(zip(best_j, avg_j))
    )
    _write(path, "generation,best_J,avg_J", rows)
    return path


def write_distribution_csv(out_dir: str, k, n) -> str:
    path = os.path.join(out_dir, DISTRIBUTION_CSV)
    _write(path, "k,n_k", ([fmt(ki), fmt(ni)] for ki, ni in zip(k, n)))
    return path


def write_trajectory_csv(out_dir: str, traj: Trajectory) -> str:
    d = traj.states[0].shape[0]
    header = "t," + ",".join(f"rho_{i + 1}{i + 1}" for i in range(d)) + ",max_offdiag"
    path = os.path.join(out_dir, TRAJECTORY_CSV)

    def rows():
        for t, rho in zip(traj.times, traj.states):
            off = rho - np.diag(np.diag(rho))
            max_off = float(np.max(np.abs(off))) if d > 1 else 0.0
            yield [fmt(t), *(fmt(rho[i, i].real) for i in range(d)), fmt(max_off)]

    _write(path, header, rows())
    return path


def write_best_params_csv(out_dir: str, centers, widths) -> str:
    path = os.path.join(out_dir, BEST_PARAMS_CSV)
    rows = (
        [str(i + 1), fmt(k), fmt(w)]
        for i, (k, w) in enumerate(zip(centers, widths))
    )
    _write(path, "i,k_i,D_i", rows)
    return path


def write_summary(
    out_dir: str,
    config_echo: dict,
    seed: int,
    final_j: float | None,
    steady: np.ndarray | None,
) -> str:
    doc: dict = {"seed": seed, "config": config_echo}
    if final_j is not None:
        doc["final_J"] = float(final_j)
    if steady is not None:
        doc["steady_state"] = {
            "real": [[float(x) for x in row] for row in steady.real],
            "imag": [[float(x) for x in row] for row in steady.imag],
        }
    path = os.path.join(out_dir, SUMMARY_FILE)
    with open(path, "w", newline="\n") as fh:
        yaml.safe_dump(doc, fh, sort_keys=True)
    return path
