"""Experiment command line: sweeps, collapses, derivative reports,
oracle checks, and large-d predictions.

Exit codes: 0 success, 1 validation error, 2 oracle mismatch,
3 optimizer non-convergence.
"""

from __future__ import annotations

import configparser
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import fss, spinmodel
from .circuit import CircuitConfig
from .oracle import MAX_DENSE_SITES, cosimulate, cosimulate_pairs
from .stats import second_derivative
from .sweep import (
    OBSERVABLES,
    SweepSpec,
    build_fss_dataset,
    fmt,
    read_sweep_csv,
    run_sweep,
)

EXIT_VALIDATION = 1
EXIT_ORACLE_MISMATCH = 2
EXIT_NO_CONVERGENCE = 3


def parse_values(text: str) -> list:
    """Parse a grid: either 'a, b, c' or an inclusive range 'start:stop:step'."""
    text = text.strip()
    if ":" in text:
        parts = [float(v) for v in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = parts
        n = int(round((stop - start) / step))
        grid = [start + i * step for i in range(n + 1)]
        if abs(grid[-1] - stop) > 1e-9 * max(1.0, abs(stop)):
            raise ValueError(f"step does not divide the range in {text!r}")
        return [float(fmt(v)) for v in grid]
    return [float(v) for v in text.split(",") if v.strip()]


def load_spec(config_path: str, seed=None, out=None, samples=None) -> SweepSpec:
    """Build a SweepSpec from an INI [sweep] section plus flag overrides."""
    parser = configparser.ConfigParser()
    if not parser.read(config_path):
        raise ValueError(f"cannot read config file {config_path}")
    if "sweep" not in parser:
        raise ValueError(f"config file {config_path} has no [sweep] section")
    sec = parser["sweep"]
    for key in sec:
        if key not in ("sizes", "ratios", "p_grid", "n_samples", "seed", "cut",
                       "out_dir", "n_bootstrap"):
            raise ValueError(f"unknown config key {key!r}")
    spec = SweepSpec(
        sizes=[int(v) for v in parse_values(sec["sizes"])],
        ratios=parse_values(sec["ratios"]),
        p_grid=parse_values(sec["p_grid"]),
        n_samples=sec.getint("n_samples"),
        seed=sec.getint("seed", 0),
        cut=sec.get("cut", "half"),
        out_dir=sec.get("out_dir", "sweep-out"),
        n_bootstrap=sec.getint("n_bootstrap", 200),
    )
    if seed is not None:
        spec.seed = seed
    if out is not None:
        spec.out_dir = out
    if samples is not None:
        spec.n_samples = samples
    spec.validate()
    return spec


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.version_option()
def main():
    """Stabilizer-circuit experiments for reset-driven entanglement transitions."""


@main.command("run-sweep")
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override the sweep seed.")
@click.option("--threads", type=int, default=1, show_default=True,
              help="Worker processes for missing cells.")
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Override the output directory.")
@click.option("--samples", type=int, default=None, help="Override n_samples.")
@click.option("--verbose", is_flag=True, help="Print per-cell timings.")
def run_sweep_cmd(config, seed, threads, out, samples, verbose):
    """Run (or resume) the parameter sweep described by CONFIG."""
    try:
        spec = load_spec(config, seed=seed, out=out, samples=samples)
        csv_path, manifest_path = run_sweep(spec, verbose=verbose, threads=threads)
    except (ValueError, OSError, KeyError) as exc:
        _fail(str(exc), EXIT_VALIDATION)
    click.echo(f"wrote {csv_path} and {manifest_path}")


@main.command("collapse")
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--observable", type=click.Choice(sorted(OBSERVABLES)),
              default="var_sp", show_default=True)
@click.option("--ansatz", type=click.Choice(["variance_form", "bare_form"]),
              default=None, help="Override the observable's default ansatz.")
@click.option("--zeta", type=float, default=0.0, show_default=True)
@click.option("--init", "init_text", default=None, metavar="PC,NU",
              help="Optimizer starting point.")
@click.option("--bounds", "bounds_text", default="0.05:0.45,0.3:4.0",
              show_default=True, metavar="PLO:PHI,NULO:NUHI")
@click.option("--bootstrap", type=int, default=20, show_default=True,
              help="Refits for parameter errors (0 disables).")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Bootstrap RNG seed.")
@click.option("--out", type=click.Path(file_okay=False), default="collapse-out",
              show_default=True)
def collapse_cmd(input_csv, observable, ansatz, zeta, init_text, bounds_text,
                 bootstrap, seed, out):
    """Fit (p_c, nu) by data collapse of a sweep CSV."""
    try:
        stats = read_sweep_csv(input_csv)
        ds = build_fss_dataset(stats, observable, ansatz=ansatz, zeta=zeta)
        init = tuple(float(v) for v in init_text.split(",")) if init_text else None
        lo_hi = bounds_text.split(",")
        if len(lo_hi) != 2:
            raise ValueError(f"bounds must be PLO:PHI,NULO:NUHI, got {bounds_text!r}")
        bounds = tuple(tuple(float(v) for v in part.split(":")) for part in lo_hi)
        result = fss.fit(ds, init=init, bounds=bounds, n_bootstrap=bootstrap,
                         bootstrap_seed=seed)
    except ValueError as exc:
        _fail(str(exc), EXIT_VALIDATION)

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "fit.json", "w") as fh:
        json.dump({"observable": observable, "ansatz": ds.ansatz,
                   **result.as_dict()}, fh, indent=2)
        fh.write("\n")
    from . import plots

    plots.collapse_overlay_svg(
        fss.rescale(ds, result.p_c, result.nu),
        [s.L for s in ds.series],
        result,
        observable,
        out_dir / "overlay.svg",
    )
    click.echo(
        f"{observable}: p_c = {result.p_c:.4f} +- {result.p_c_err:.4f}, "
        f"nu = {result.nu:.3f} +- {result.nu_err:.3f}, "
        f"quality = {result.quality:.4g}"
    )
    if not result.converged:
        _fail("collapse optimizer did not converge (best-so-far written)",
              EXIT_NO_CONVERGENCE)


@main.command("derivative")
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--observable", type=click.Choice(sorted(OBSERVABLES)),
              default="sp", show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default="derivative-out",
              show_default=True)
def derivative_cmd(input_csv, observable, out):
    """Second-difference report of a sweep observable versus p, per L."""
    try:
        stats = read_sweep_csv(input_csv)
        y_field = OBSERVABLES[observable][0]
        by_L = {}
        for s in stats:
            by_L.setdefault(s.L, []).append((s.p, getattr(s, y_field)))
        curves = {L: second_derivative(pts) for L, pts in sorted(by_L.items())}
    except ValueError as exc:
        _fail(str(exc), EXIT_VALIDATION)

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    peaks = {}
    with open(out_dir / "derivative.csv", "w") as fh:
        fh.write(f"L,p,d2_{observable}\n")
        for L, pts in curves.items():
            for p, v in pts:
                fh.write(f"{L},{fmt(p)},{fmt(v)}\n")
            p_peak, v_peak = max(pts, key=lambda pv: abs(pv[1]))
            peaks[str(L)] = {"p_peak": float(fmt(p_peak)),
                             "magnitude": float(fmt(abs(v_peak)))}
            click.echo(f"L = {L}: |d2| peak {abs(v_peak):.4g} at p = {fmt(p_peak)}")
    with open(out_dir / "peaks.json", "w") as fh:
        json.dump({"observable": observable, "peaks": peaks}, fh, indent=2)
        fh.write("\n")
    from . import plots

    plots.derivative_svg(curves, f"d2 {observable} / dp2", out_dir / "derivative.svg")


@main.command("oracle-check")
@click.option("--max-l", type=int, default=6, show_default=True,
              help="Largest system size (dense oracle cap is 8).")
@click.option("--cases", type=int, default=100, show_default=True,
              help="Co-simulation cases per system size.")
@click.option("--seed", type=int, default=0, show_default=True)
def oracle_check_cmd(max_l, cases, seed):
    """Co-simulate the stabilizer engine against the dense oracle."""
    if not 2 <= max_l <= MAX_DENSE_SITES:
        _fail(f"--max-l must be in [2, {MAX_DENSE_SITES}]", EXIT_VALIDATION)
    if cases < 1:
        _fail("--cases must be >= 1", EXIT_VALIDATION)
    p_values = (0.1, 0.25, 0.5)
    mismatches = 0
    total = 0
    for L in range(2, max_l + 1):
        for case in range(cases):
            p = p_values[case % len(p_values)]
            case_seed = seed + 1_000_003 * L + case
            if L % 2 == 0:
                res = cosimulate(CircuitConfig(L=L, T=4 * L, p=p, seed=case_seed))
            else:
                res = cosimulate_pairs(L, 4 * L, p, case_seed)
            total += 1
            if not res.matches:
                mismatches += 1
                click.echo(
                    f"MISMATCH L={L} case={case} p={p}: "
                    f"stab (Sp={res.stab_sp}, En={res.stab_en}) vs "
                    f"dense (Sp={res.dense_sp:.6f}, En={res.dense_en:.6f})",
                    err=True,
                )
        click.echo(f"L = {L}: {cases} cases checked")
    click.echo(f"{total - mismatches}/{total} cases match exactly")
    if mismatches:
        sys.exit(EXIT_ORACLE_MISMATCH)


@main.command("predict")
@click.option("--d", "dim", type=int, default=2, show_default=True,
              help="Qudit dimension of the large-d reference model.")
@click.option("--size", "-L", type=int, default=64, show_default=True)
@click.option("--ratio", type=float, default=4.0, show_default=True,
              help="Circuit depth as T/L.")
@click.option("--p-c", type=float, default=0.25, show_default=True,
              help="Reference transition point for the piecewise form.")
@click.option("--s0", type=float, default=1.0, show_default=True,
              help="Domain-wall tension for the large-p branch.")
@click.option("--p-grid", default="0:0.5:0.02", show_default=True)
@click.option("--input", "input_csv", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Sweep CSV to overlay (rows matching --size).")
@click.option("--out", type=click.Path(file_okay=False), default="predict-out",
              show_default=True)
def predict_cmd(dim, size, ratio, p_c, s0, p_grid, input_csv, out):
    """Overlay the closed-form purity prediction on sweep data."""
    try:
        grid = parse_values(p_grid)
        T = int(round(ratio * size))
        predicted = [
            spinmodel.predict_Sp(
                spinmodel.SpinModelParams(d=dim, T=T, L=size, p=p, p_c_ref=p_c), S0=s0
            )
            for p in grid
        ]
        data = None
        if input_csv:
            rows = [s for s in read_sweep_csv(input_csv) if s.L == size and s.T == T]
            data = [(s.p, s.mean_sp, s.se_mean_sp) for s in sorted(rows, key=lambda s: s.p)]
    except ValueError as exc:
        _fail(str(exc), EXIT_VALIDATION)

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "predict.csv", "w") as fh:
        fh.write("p,predicted_sp\n")
        for p, v in zip(grid, predicted):
            fh.write(f"{fmt(p)},{fmt(v)}\n")
    from . import plots

    plots.predict_overlay_svg(np.asarray(grid), np.asarray(predicted), data,
                              "mean S_p", out_dir / "predict.svg")
    click.echo(f"wrote {out_dir / 'predict.csv'} and {out_dir / 'predict.svg'}")


if __name__ == "__main__":
    main()
