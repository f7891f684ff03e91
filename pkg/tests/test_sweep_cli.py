"""Sweep bookkeeping and the command-line surface."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from resetsim.cli import load_spec, main, parse_values
from resetsim.stats import EnsembleStats
from resetsim.sweep import (
    CSV_HEADER,
    SweepSpec,
    build_fss_dataset,
    cell_seed,
    read_sweep_csv,
    run_sweep,
)

SMOKE_INI = """\
[sweep]
sizes = 8
ratios = 4
p_grid = 0, 0.5
n_samples = 10
seed = 7
out_dir = {out}
"""


def smoke_spec(tmp_path, **kw):
    out = str(tmp_path / "out") if tmp_path is not None else "out"
    args = dict(sizes=[8], ratios=[4], p_grid=[0.0, 0.5], n_samples=10, seed=7,
                out_dir=out, n_bootstrap=50)
    args.update(kw)
    return SweepSpec(**args)


def test_csv_header_is_bit_exact():
    assert CSV_HEADER == (
        "L,T,p,n_samples,mean_sp,var_sp,se_mean_sp,se_var_sp,"
        "mean_en,var_en,se_mean_en,se_var_en"
    )


def test_spec_validation():
    with pytest.raises(ValueError):
        smoke_spec(None, sizes=[7]).validate()
    with pytest.raises(ValueError):
        smoke_spec(None, n_samples=1).validate()
    with pytest.raises(ValueError):
        smoke_spec(None, p_grid=[9.0]).validate()  # q = p/L > 1
    with pytest.raises(ValueError):
        smoke_spec(None, cut="left-third").validate()


def test_cell_seed_depends_on_every_key_part():
    base = cell_seed(1, 8, 32, 0.1)
    assert base == cell_seed(1, 8, 32, 0.1)
    assert len({base, cell_seed(2, 8, 32, 0.1), cell_seed(1, 6, 32, 0.1),
                cell_seed(1, 8, 24, 0.1), cell_seed(1, 8, 32, 0.2)}) == 5


def test_run_sweep_outputs_and_determinism(tmp_path):
    spec = smoke_spec(tmp_path)
    csv_path, manifest_path = run_sweep(spec)
    body = csv_path.read_bytes()
    lines = body.decode().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    stats = read_sweep_csv(csv_path)
    assert stats[0].mean_sp == 0.0  # p = 0 keeps the state pure

    manifest = json.loads(manifest_path.read_text())
    assert manifest["spec"]["seed"] == 7
    assert [c["p"] for c in manifest["cells"]] == [0.0, 0.5]
    assert all(c["recomputed"] for c in manifest["cells"])

    # same spec into a fresh directory: byte-identical CSV
    spec2 = smoke_spec(tmp_path, out_dir=str(tmp_path / "out2"))
    csv2, _ = run_sweep(spec2)
    assert csv2.read_bytes() == body


def test_run_sweep_resume_recomputes_only_missing(tmp_path):
    spec = smoke_spec(tmp_path)
    csv_path, manifest_path = run_sweep(spec)
    body = csv_path.read_bytes()
    lines = body.decode().splitlines()
    csv_path.write_text("\n".join(lines[:-1]) + "\n")  # drop the last cell
    run_sweep(spec)
    assert csv_path.read_bytes() == body
    manifest = json.loads(manifest_path.read_text())
    assert [c["recomputed"] for c in manifest["cells"]] == [False, True]


def test_build_fss_dataset_groups_by_size():
    def row(L, p):
        return EnsembleStats(L=L, T=4 * L, p=p, n_samples=10, mean_sp=1.0,
                             var_sp=2.0, se_mean_sp=0.1, se_var_sp=0.2,
                             mean_en=3.0, var_en=4.0, se_mean_en=0.3, se_var_en=0.0)

    rows = [row(L, p) for L in (8, 16) for p in (0.1, 0.2, 0.3, 0.4)]
    ds = build_fss_dataset(rows, "var_sp")
    assert [s.L for s in ds.series] == [8, 16]
    assert ds.ansatz == "variance_form"
    assert build_fss_dataset(rows, "en").ansatz == "bare_form"
    # zero errors floored to keep the chi-square finite
    assert build_fss_dataset(rows, "var_en").series[0].y_err[0] == 1e-12
    with pytest.raises(ValueError):
        build_fss_dataset(rows, "purity")
    from dataclasses import replace

    with pytest.raises(ValueError, match="mixed"):
        build_fss_dataset(rows + [replace(row(8, 0.5), T=16)], "var_sp")


def test_parse_values():
    assert parse_values("1, 2, 3") == [1.0, 2.0, 3.0]
    assert parse_values("0:0.5:0.25") == [0.0, 0.25, 0.5]
    assert parse_values("4") == [4.0]
    with pytest.raises(ValueError):
        parse_values("0:0.5:0.3")  # step does not divide the range
    with pytest.raises(ValueError):
        parse_values("0:0.5")


def test_load_spec_overrides(tmp_path):
    cfg = tmp_path / "sweep.ini"
    cfg.write_text(SMOKE_INI.format(out=tmp_path / "out"))
    spec = load_spec(str(cfg))
    assert spec.sizes == [8] and spec.n_samples == 10 and spec.seed == 7
    spec = load_spec(str(cfg), seed=11, out=str(tmp_path / "o2"), samples=4)
    assert spec.seed == 11 and spec.out_dir == str(tmp_path / "o2")
    assert spec.n_samples == 4
    bad = tmp_path / "bad.ini"
    bad.write_text("[sweep]\nsizes = 8\nratios = 4\np_grid = 0\nn_samples = 10\nbogus = 1\n")
    with pytest.raises(ValueError, match="unknown config key"):
        load_spec(str(bad))


def test_cli_run_sweep_and_exit_codes(tmp_path):
    runner = CliRunner()
    cfg = tmp_path / "sweep.ini"
    cfg.write_text(SMOKE_INI.format(out=tmp_path / "out"))
    res = runner.invoke(main, ["run-sweep", str(cfg)])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "out" / "sweep.csv").exists()
    assert (tmp_path / "out" / "manifest.json").exists()

    # validation failure -> exit 1
    bad = tmp_path / "bad.ini"
    bad.write_text("[sweep]\nsizes = 7\nratios = 4\np_grid = 0\nn_samples = 10\n")
    res = runner.invoke(main, ["run-sweep", str(bad)])
    assert res.exit_code == 1


def test_cli_oracle_check(tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["oracle-check", "--max-l", "3", "--cases", "3", "--seed", "2"])
    assert res.exit_code == 0, res.output
    assert "6/6 cases match exactly" in res.output
    res = runner.invoke(main, ["oracle-check", "--max-l", "9"])
    assert res.exit_code == 1


def test_cli_collapse_and_derivative(tmp_path):
    # synthetic CSV from a known master curve
    rng = np.random.default_rng(3)
    p = np.round(np.arange(0.05, 0.451, 0.02), 10)
    rows = []
    for L in (16, 24, 32, 48):
        x = L * (p - 0.25)
        y = 2.0 * np.exp(-((x / 6.0) ** 2)) + 0.3
        err = 0.02 * y
        y = y + rng.normal(0, err)
        for pi, yi, ei in zip(p, y, err):
            rows.append(
                f"{L},{4 * L},{pi:.10g},500,0,{yi:.10g},0.001,{ei:.10g},"
                f"0,{yi:.10g},0.001,{ei:.10g}"
            )
    csv_path = tmp_path / "synth.csv"
    csv_path.write_text(CSV_HEADER + "\n" + "\n".join(rows) + "\n")

    runner = CliRunner()
    out = tmp_path / "collapse"
    res = runner.invoke(main, [
        "collapse", str(csv_path), "--observable", "var_sp",
        "--bootstrap", "5", "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    fit = json.loads((out / "fit.json").read_text())
    assert abs(fit["p_c"] - 0.25) < 0.02
    assert abs(fit["nu"] - 1.0) < 0.2
    assert (out / "overlay.svg").exists()

    dout = tmp_path / "deriv"
    res = runner.invoke(main, [
        "derivative", str(csv_path), "--observable", "var_sp", "--out", str(dout),
    ])
    assert res.exit_code == 0, res.output
    assert (dout / "derivative.csv").exists()
    peaks = json.loads((dout / "peaks.json").read_text())
    assert set(peaks["peaks"]) == {"16", "24", "32", "48"}

    # a single size cannot collapse -> exit 1
    single = tmp_path / "single.csv"
    single.write_text(CSV_HEADER + "\n" + "\n".join(r for r in rows if r.startswith("16,")) + "\n")
    res = runner.invoke(main, ["collapse", str(single)])
    assert res.exit_code == 1


def test_cli_predict(tmp_path):
    runner = CliRunner()
    out = tmp_path / "pred"
    res = runner.invoke(main, [
        "predict", "--size", "8", "--ratio", "4", "--p-c", "0.25",
        "--p-grid", "0:0.5:0.1", "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    lines = (out / "predict.csv").read_text().splitlines()
    assert lines[0] == "p,predicted_sp"
    # below the transition: T*p with T = 32
    assert lines[1] == "0,0" and lines[2] == "0.1,3.2"
