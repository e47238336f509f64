import hashlib

import numpy as np
import pytest

from adsfigures.cli import main
from adsfigures.io import read_snapshot_series, read_timeseries
from adsfigures.plots import (plot_density_surface,
                              plot_populations_velocity, surface_data)
from conftest import HEADER, make_snapshot_dir, write_timeseries_csv


def run_cli(*argv):
    return main(list(argv))


def sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_fig2_cli(scenario_csvs, tmp_path):
    fwd, b1, b3 = scenario_csvs
    out = tmp_path / "fig2.png"
    code = run_cli("fig2", "--forward", str(fwd), "--back1", str(b1),
                   "--back3", str(b3), "-o", str(out))
    assert code == 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_fig2_deterministic(scenario_csvs, tmp_path):
    fwd, b1, b3 = scenario_csvs
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    for out in (a, b):
        assert run_cli("fig2", "--forward", str(fwd), "--back1", str(b1),
                       "--back3", str(b3), "-o", str(out)) == 0
    assert sha256(a) == sha256(b)


def test_fig2_empty_csv_errors_without_image(scenario_csvs, tmp_path,
                                             capsys):
    fwd, b1, b3 = scenario_csvs
    empty = tmp_path / "empty.csv"
    empty.write_text(HEADER + "\n")
    out = tmp_path / "fig2.png"
    code = run_cli("fig2", "--forward", str(empty), "--back1", str(b1),
                   "--back3", str(b3), "-o", str(out))
    assert code == 1
    assert not out.exists()
    assert "error:" in capsys.readouterr().err


def test_fig2_missing_column_errors(scenario_csvs, tmp_path):
    fwd, b1, b3 = scenario_csvs
    bad = tmp_path / "bad.csv"
    cols = HEADER.split(",")
    cols.remove("p2")
    bad.write_text(",".join(cols) + "\n" + ",".join(["0"] * 11) + "\n")
    out = tmp_path / "fig2.png"
    assert run_cli("fig2", "--forward", str(bad), "--back1", str(b1),
                   "--back3", str(b3), "-o", str(out)) == 1
    assert not out.exists()


def test_fig2_requires_three_series(scenario_csvs, tmp_path):
    fwd, _, _ = scenario_csvs
    with pytest.raises(ValueError):
        plot_populations_velocity([read_timeseries(fwd)],
                                  tmp_path / "x.png")


def test_fig3_cli(tmp_path):
    d = make_snapshot_dir(tmp_path / "snaps")
    out = tmp_path / "fig3.png"
    assert run_cli("fig3", "--snapshots", str(d), "-o", str(out)) == 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_fig3_missing_dir_errors(tmp_path):
    out = tmp_path / "fig3.png"
    assert run_cli("fig3", "--snapshots", str(tmp_path / "nope"),
                   "-o", str(out)) == 1
    assert not out.exists()


def test_fourth_root_transform_on_constant_density(tmp_path):
    d = make_snapshot_dir(tmp_path / "snaps", value=0.0625)
    snaps = read_snapshot_series(d)
    _, _, rho1, rho3 = surface_data(snaps, fourth_root=True)
    assert np.allclose(rho1, 0.0625 ** 0.25)
    assert np.allclose(rho3, 0.0625 ** 0.25)
    _, _, lin1, _ = surface_data(snaps, fourth_root=False)
    assert np.allclose(lin1, 0.0625)


def test_linear_flag_changes_output(tmp_path):
    d = make_snapshot_dir(tmp_path / "snaps")
    a, b = tmp_path / "root.png", tmp_path / "lin.png"
    assert run_cli("fig3", "--snapshots", str(d), "-o", str(a)) == 0
    assert run_cli("fig3", "--snapshots", str(d), "--linear",
                   "-o", str(b)) == 0
    assert sha256(a) != sha256(b)


def test_surface_needs_two_snapshots(tmp_path):
    d = make_snapshot_dir(tmp_path / "snaps", n_snaps=1)
    snaps = read_snapshot_series(d)
    with pytest.raises(ValueError, match="2 snapshots"):
        plot_density_surface(snaps, tmp_path / "x.png")
