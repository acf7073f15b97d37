"""Command-line interface: exit codes, output files, stdout contract."""

import shutil
import subprocess
import sys

import pytest

from resonancekit.cli import main
from resonancekit.sweep import ERROR_CSV_HEADER, LOCUS_CSV_HEADER, csv_to_table

_SMALL = ["--g-max", "0.2", "--g-steps", "3", "--n-max", "12", "--levels", "4"]


def test_sweep_writes_csv_and_reports_row_count(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", *_SMALL, "--methods", "exact,jc", "--out", str(out)])
    captured = capsys.readouterr()
    assert rc == 0
    assert captured.out == f"wrote {out}: 24 rows, 0 failed points\n"
    assert captured.err == ""
    table = csv_to_table(out.read_text(encoding="utf-8"))
    assert len(table.rows) == 24
    assert {r.method for r in table.rows} == {"exact", "jc"}


def test_sweep_failed_points_exit_1(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", *_SMALL, "--omega0", "0.5",
               "--methods", "exact,jc", "--out", str(out)])
    captured = capsys.readouterr()
    assert rc == 1
    assert "3 failed points" in captured.out
    assert "method=jc" in captured.err
    # successful rows are still written
    table = csv_to_table(out.read_text(encoding="utf-8"))
    assert {r.method for r in table.rows} == {"exact"}


def test_invalid_grid_exits_2(tmp_path, capsys):
    rc = main(["sweep", "--g-steps", "0", "--out", str(tmp_path / "x.csv")])
    captured = capsys.readouterr()
    assert rc == 2
    assert "configuration error" in captured.err
    assert "g_steps" in captured.err
    assert not (tmp_path / "x.csv").exists()


def test_unknown_method_exits_2(tmp_path, capsys):
    rc = main(["sweep", *_SMALL, "--methods", "exact,bogus",
               "--out", str(tmp_path / "x.csv")])
    captured = capsys.readouterr()
    assert rc == 2
    assert "unknown entries ['bogus']" in captured.err


def test_compare_prints_per_method_stats(tmp_path, capsys):
    out = tmp_path / "run.csv"
    rc = main(["compare", "--g-max", "0.25", "--g-steps", "6", "--n-max", "24",
               "--levels", "6", "--methods", "exact,jc", "--out", str(out)])
    captured = capsys.readouterr()
    assert rc == 0
    lines = captured.out.splitlines()
    assert lines[0] == "exact: max |dE| = 0, mean |dE| = 0 over 36 pairs"
    assert lines[1].startswith("jc: max |dE| = ")
    assert lines[1].endswith("over 36 pairs")
    assert out.exists()
    errors = tmp_path / "run_errors.csv"
    assert errors.read_text(encoding="utf-8").splitlines()[0] == ERROR_CSV_HEADER


def test_compare_without_exact_exits_2(tmp_path, capsys):
    rc = main(["compare", *_SMALL, "--methods", "jc",
               "--out", str(tmp_path / "run.csv")])
    captured = capsys.readouterr()
    assert rc == 2
    assert "needs the exact baseline" in captured.err


def test_resonances_prints_and_writes(tmp_path, capsys):
    out = tmp_path / "loci.csv"
    rc = main(["resonances", "--g-max", "0.4", "--g-steps", "21",
               "--n-max", "20", "--levels", "6", "--out", str(out)])
    captured = capsys.readouterr()
    assert rc == 0
    assert captured.out.splitlines()[0] == LOCUS_CSV_HEADER
    assert out.read_text(encoding="utf-8") == captured.out


def test_resonances_default_is_stdout_only(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = main(["resonances", "--g-max", "0.4", "--g-steps", "21",
               "--n-max", "20", "--levels", "6"])
    captured = capsys.readouterr()
    assert rc == 0
    assert captured.out.splitlines()[0] == LOCUS_CSV_HEADER
    assert list(tmp_path.iterdir()) == []  # nothing written without --out


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("g_max=0.6\ng_steps=4\nn_max=16\nn_levels=4\nmethods=exact\n")
    out = tmp_path / "out.csv"
    rc = main(["sweep", "--config", str(cfg), "--g-max", "0.3", "--out", str(out)])
    captured = capsys.readouterr()
    assert rc == 0
    assert captured.out == f"wrote {out}: 16 rows, 0 failed points\n"
    table = csv_to_table(out.read_text(encoding="utf-8"))
    assert max(r.g for r in table.rows) == 0.3  # flag beats the file value


def test_missing_config_file_exits_2(tmp_path, capsys):
    rc = main(["sweep", "--config", str(tmp_path / "absent.cfg"),
               "--out", str(tmp_path / "x.csv")])
    captured = capsys.readouterr()
    assert rc == 2
    assert "configuration error" in captured.err


def test_repeated_runs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--g-max", "0.25", "--g-steps", "6", "--n-max", "24",
            "--levels", "6", "--methods", "exact,jc"]
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_subcommand_is_required():
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2


def test_console_script_entry_point(tmp_path):
    exe = shutil.which("resonancekit")
    assert exe is not None
    out = tmp_path / "sweep.csv"
    proc = subprocess.run(
        [exe, "sweep", *_SMALL, "--methods", "exact", "--out", str(out)],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith(f"wrote {out}: 12 rows")
    assert out.exists()


def test_module_invocation(tmp_path):
    out = tmp_path / "sweep.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "resonancekit.cli", "sweep", *_SMALL,
         "--methods", "exact", "--out", str(out)],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert out.exists()
