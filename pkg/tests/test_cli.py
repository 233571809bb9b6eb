import csv

import pytest

from ssip.cli import main


def test_lj_table(tmp_path, capsys):
    assert main(["lj-table", "--out", str(tmp_path)]) == 0
    with open(tmp_path / "lj_characteristics.csv", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["geometry"] for r in rows] == ["point", "disk", "cylinder"]
    assert "9/9 checks passed" in capsys.readouterr().out


def test_disk_csv_leading_columns(tmp_path):
    rc = main(["verify-disks", "--family", "electrostatic", "--gaps", "1,10", "--out", str(tmp_path)])
    assert rc == 0
    with open(tmp_path / "disks_electrostatic_parallel.csv", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    assert header[:4] == ["g_over_R", "value", "reference_case", "relative_error_vs_analytic"]


def test_run_bundled(tmp_path, capsys):
    rc = main(["run", "--config", "charged_beams", "--targets", "0.4", "--out", str(tmp_path)])
    assert rc == 0
    assert "1 converged steps" in capsys.readouterr().out
    assert (tmp_path / "charged_beams" / "log.json").exists()


def test_run_quadrature_override(tmp_path):
    assert main(["run", "--config", "charged_beams", "--targets", "0.1", "--gauss-points", "4",
                 "--out", str(tmp_path)]) == 0


def test_run_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x", "fibers": [], "surprise": 1}')
    assert main(["run", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_run_without_config():
    assert main(["run"]) == 2


def test_fd_check_subset(tmp_path):
    assert main(["fd-check", "--families", "coulomb", "--configs", "2", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fd_check.csv").exists()


def test_broadphase_check(tmp_path):
    assert main(["broadphase-check", "--configs", "5", "--out", str(tmp_path)]) == 0


def test_tolerance_scale_can_fail(tmp_path):
    assert main(["lj-table", "--tolerance-scale", "1e-12", "--out", str(tmp_path)]) == 1


def test_schema(capsys):
    assert main(["schema"]) == 0
    assert '"fibers"' in capsys.readouterr().out


def test_unknown_verb():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_verify_planar(tmp_path):
    assert main(["verify-planar", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "disks_vdw_planar.csv").exists()
