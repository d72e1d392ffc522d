import subprocess
import sys

import pytest

from kgsplit.cli import main

FAST_CONFIG = """\
grid: [64]
model: {m: 1.0, lambda: -1.0}
data: {s: 4.0, seed: 12}
scheme: lie
final_time: 0.5
tau_list: [0.125, 0.0625, 0.03125]
tau_ref: 0.00390625
"""

BLOWUP_CONFIG = """\
grid: [32]
model: {m: 1.0, lambda: 50.0}
data: {s: 2.0, seed: 3}
scheme: lie
final_time: 2.0
tau_list: [0.5, 0.25, 0.125]
tau_ref: 0.015625
"""


def write_config(tmp_path, text=FAST_CONFIG, name="study.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_run_writes_outputs_and_reports_the_fit(tmp_path, capsys):
    config = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "fitted order = 1.0" in stdout
    assert "tau = 1.250000e-01" in stdout
    for name in ("errors.csv", "plotdata.csv", "manifest.txt"):
        assert (out / name).exists(), name
    cache = list((out / "reference-cache").glob("reference-*.npz"))
    assert len(cache) == 1


def test_run_reuses_the_cached_reference(tmp_path, capsys):
    config = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out)]) == 0
    cache = list((out / "reference-cache").glob("reference-*.npz"))
    stamp = cache[0].stat().st_mtime_ns
    assert main(["run", "--config", str(config), "--out", str(out)]) == 0
    assert cache[0].stat().st_mtime_ns == stamp
    capsys.readouterr()


def test_run_defaults_the_cache_next_to_the_config(tmp_path, capsys):
    text = FAST_CONFIG + f"outputs: {{csv: {tmp_path / 'rows.csv'}}}\n"
    config = write_config(tmp_path, text)
    assert main(["run", "--config", str(config)]) == 0
    assert (tmp_path / "reference-cache").is_dir()
    assert (tmp_path / "rows.csv").exists()
    capsys.readouterr()


def test_invalid_config_exits_2(tmp_path, capsys):
    config = write_config(tmp_path, FAST_CONFIG + "tau_reference: 0.001\n")
    assert main(["run", "--config", str(config)]) == 2
    assert "config error" in capsys.readouterr().err


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "absent.yaml")]) == 2
    assert "config error" in capsys.readouterr().err


def test_bad_seed_override_exits_2(tmp_path, capsys):
    config = write_config(tmp_path)
    assert main(["run", "--config", str(config), "--seed", "-1"]) == 2
    capsys.readouterr()


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_blow_up_exits_3(tmp_path, capsys):
    config = write_config(tmp_path, BLOWUP_CONFIG)
    code = main(["run", "--config", str(config), "--out", str(tmp_path / "out")])
    assert code == 3
    assert "blow-up" in capsys.readouterr().err


def test_report_refits_a_csv(tmp_path, capsys):
    config = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["report", "--csv", str(out / "errors.csv")]) == 0
    stdout = capsys.readouterr().out
    assert "order = 1.0" in stdout and "r^2" in stdout


def test_report_needs_a_source(capsys):
    assert main(["report"]) == 2
    assert "config error" in capsys.readouterr().err


def test_report_missing_csv_exits_1(tmp_path, capsys):
    assert main(["report", "--csv", str(tmp_path / "none.csv")]) == 1
    assert "i/o error" in capsys.readouterr().err


def test_reference_subcommand_caches(tmp_path, capsys):
    config = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["reference", "--config", str(config), "--out", str(out)]) == 0
    assert "reference cached: key = " in capsys.readouterr().out
    assert len(list((out / "reference-cache").glob("reference-*.npz"))) == 1


def test_seed_override_reaches_the_manifest(tmp_path, capsys):
    config = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out),
                 "--seed", "99"]) == 0
    capsys.readouterr()
    assert "data.seed: 99" in (out / "manifest.txt").read_text()


def test_convention_flag_reaches_the_manifest(tmp_path, capsys):
    config = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out),
                 "--convention", "dealias"]) == 0
    capsys.readouterr()
    manifest = (out / "manifest.txt").read_text()
    assert "conventions: dealias" in manifest
    assert "dealias: on (2/3 rule)" in manifest


def test_unknown_convention_exits_2(tmp_path, capsys):
    config = write_config(tmp_path)
    assert main(["run", "--config", str(config), "--convention", "fancy"]) == 2
    capsys.readouterr()


def test_installed_entry_point(tmp_path):
    config = write_config(tmp_path)
    out = tmp_path / "out"
    proc = subprocess.run(
        [sys.executable, "-m", "kgsplit.cli", "run", "--config", str(config),
         "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "fitted order" in proc.stdout
    usage = subprocess.run([sys.executable, "-m", "kgsplit.cli"],
                           capture_output=True, text=True)
    assert usage.returncode == 2
