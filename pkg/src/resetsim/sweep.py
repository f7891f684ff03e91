"""Resumable parameter sweeps: deterministic per-cell seeding, CSV
emission, and the manifest bookkeeping the CLI builds on.

A sweep cell is one (L, T, p) point.  Its seed derives from the sweep
seed and the cell key alone, so any cell can be reproduced in isolation
and re-running a partially completed sweep recomputes only the missing
cells while emitting a byte-identical CSV.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import CircuitConfig, run_trajectory
from .stats import DEFAULT_BOOTSTRAP, EnsembleStats, aggregate_values

CSV_HEADER = "L,T,p,n_samples,mean_sp,var_sp,se_mean_sp,se_var_sp,mean_en,var_en,se_mean_en,se_var_en"

_STAT_FIELDS = (
    "mean_sp", "var_sp", "se_mean_sp", "se_var_sp",
    "mean_en", "var_en", "se_mean_en", "se_var_en",
)


def fmt(x: float) -> str:
    return f"{float(x):.10g}"


@dataclass
class SweepSpec:
    """Grids and sampling parameters of one experiment sweep."""

    sizes: list
    ratios: list
    p_grid: list
    n_samples: int
    seed: int
    cut: str = "half"
    out_dir: str = "sweep-out"
    n_bootstrap: int = DEFAULT_BOOTSTRAP

    def validate(self) -> None:
        if not self.sizes or not self.ratios or not self.p_grid:
            raise ValueError("sizes, ratios, and p_grid must be nonempty")
        if self.n_samples < 2:
            raise ValueError("n_samples must be >= 2")
        if self.cut != "half":
            raise ValueError(f"unsupported cut policy {self.cut!r}")
        for L in self.sizes:
            if L < 2 or L % 2:
                raise ValueError(f"L = {L} must be even and >= 2")
            for p in self.p_grid:
                if not 0.0 <= p <= L:
                    raise ValueError(f"p = {p} outside [0, L] for L = {L}")

    def cells(self):
        """All (L, T, p) cells in stable output order."""
        out = []
        for L in sorted(self.sizes):
            for ratio in sorted(self.ratios):
                T = int(round(ratio * L))
                for p in sorted(self.p_grid):
                    out.append((int(L), T, float(p)))
        return out

    def as_dict(self) -> dict:
        return asdict(self)


def cell_seed(sweep_seed: int, L: int, T: int, p: float) -> int:
    """Deterministic 64-bit seed for one cell."""
    digest = hashlib.sha256(f"{sweep_seed}|{L}|{T}|{fmt(p)}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def run_cell(
    L: int, T: int, p: float, n_samples: int, seed: int,
    n_bootstrap: int = DEFAULT_BOOTSTRAP,
) -> EnsembleStats:
    """Run one cell's trajectory ensemble; trajectory j uses stream j."""
    sp = np.empty(n_samples)
    en = np.empty(n_samples)
    for j in range(n_samples):
        cfg = CircuitConfig(L=L, T=T, p=p, seed=seed, stream=j)
        rec = run_trajectory(cfg)
        sp[j] = rec.final.sp
        en[j] = rec.final.en
    return aggregate_values(sp, en, (L, T, p), n_bootstrap, bootstrap_seed=seed)


def _row(s: EnsembleStats) -> str:
    vals = [str(s.L), str(s.T), fmt(s.p), str(s.n_samples)]
    vals += [fmt(getattr(s, f)) for f in _STAT_FIELDS]
    return ",".join(vals)


def read_sweep_csv(path) -> list:
    """Parse a sweep CSV back into EnsembleStats."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise ValueError(f"unexpected CSV header in {path}")
        for row in reader:
            out.append(
                EnsembleStats(
                    L=int(row["L"]), T=int(row["T"]), p=float(row["p"]),
                    n_samples=int(row["n_samples"]),
                    **{f: float(row[f]) for f in _STAT_FIELDS},
                )
            )
    return out


def _run_cell_args(args):
    return run_cell(*args)


def run_sweep(spec: SweepSpec, verbose: bool = False, threads: int = 1):
    """Execute the sweep, resuming any cells already in the output CSV.

    Returns (csv_path, manifest_path).
    """
    spec.validate()
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "sweep.csv"
    manifest_path = out_dir / "manifest.json"

    have = {}
    if csv_path.exists():
        for s in read_sweep_csv(csv_path):
            if s.n_samples == spec.n_samples:
                have[(s.L, s.T, fmt(s.p))] = s

    cells = spec.cells()
    missing = [(L, T, p) for L, T, p in cells if (L, T, fmt(p)) not in have]
    computed = {}
    t_start = time.time()
    if threads > 1 and missing:
        from concurrent.futures import ProcessPoolExecutor

        jobs = [
            (L, T, p, spec.n_samples, cell_seed(spec.seed, L, T, p), spec.n_bootstrap)
            for L, T, p in missing
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for (L, T, p), stats in zip(missing, pool.map(_run_cell_args, jobs)):
                computed[(L, T, fmt(p))] = stats
    else:
        for L, T, p in missing:
            t0 = time.time()
            computed[(L, T, fmt(p))] = run_cell(
                L, T, p, spec.n_samples, cell_seed(spec.seed, L, T, p), spec.n_bootstrap
            )
            if verbose:
                print(f"cell L={L} T={T} p={fmt(p)}: {time.time() - t0:.1f}s")

    results = []
    cell_meta = []
    for L, T, p in cells:
        key = (L, T, fmt(p))
        recomputed = key in computed
        stats = computed.get(key, have.get(key))
        results.append(stats)
        cell_meta.append(
            {
                "L": L, "T": T, "p": float(fmt(p)),
                "seed": cell_seed(spec.seed, L, T, p),
                "n_samples": spec.n_samples,
                "trajectory_streams": [0, spec.n_samples],
                "recomputed": recomputed,
                "wall_time_s": round(time.time() - t_start, 3) if recomputed else 0.0,
            }
        )

    with open(csv_path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for s in results:
            fh.write(_row(s) + "\n")
    with open(manifest_path, "w") as fh:
        json.dump(
            {"version": __version__, "spec": spec.as_dict(), "cells": cell_meta},
            fh, indent=2,
        )
        fh.write("\n")
    return csv_path, manifest_path


OBSERVABLES = {
    "sp": ("mean_sp", "se_mean_sp", "bare_form"),
    "en": ("mean_en", "se_mean_en", "bare_form"),
    "var_sp": ("var_sp", "se_var_sp", "variance_form"),
    "var_en": ("var_en", "se_var_en", "variance_form"),
}


def build_fss_dataset(stats, observable: str, ansatz: str | None = None, zeta: float = 0.0):
    """Group sweep rows by L into an FssDataset for one observable.

    Requires a single T/L ratio across the rows.
    """
    from .fss import FssDataset, FssSeries

    if observable not in OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}")
    y_field, e_field, default_ansatz = OBSERVABLES[observable]
    ratios = {round(s.T / s.L, 9) for s in stats}
    if len(ratios) != 1:
        raise ValueError(f"mixed T/L ratios in input: {sorted(ratios)}")
    by_L = {}
    for s in stats:
        by_L.setdefault(s.L, []).append(s)
    series = []
    for L in sorted(by_L):
        rows = sorted(by_L[L], key=lambda s: s.p)
        y_err = np.array([max(getattr(s, e_field), 1e-12) for s in rows])
        series.append(
            FssSeries(
                L=L,
                p=np.array([s.p for s in rows]),
                y=np.array([getattr(s, y_field) for s in rows]),
                y_err=y_err,
            )
        )
    return FssDataset(series=series, ansatz=ansatz or default_ansatz, zeta=zeta)
