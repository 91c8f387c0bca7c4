"""
Command-line tests: catalog listing, config validation, runs, exit codes and reproducibility.
"""
import json
from pathlib import Path

import pandas as pd
import pytest

from app.experiments import list_experiments
from app.main import main
from app.services.config_service import ConfigError, load_config
from app.services.output_service import FLAGGED_FILE, MANIFEST_FILE, RESULTS_FILE, SUMMARY_FILE

pytestmark = pytest.mark.integration

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
REFERENCE_KINDS = {"lemma", "corollary", "theorem", "principle", "formula", "model", "nonlinearity"}

SMALL_KERNEL_SWEEP = """
experiment = "kernel-sweep"
name = "small-kernel-sweep"

[params]
M = 0
times = [1.0, 10.0]
radius_factors = [0.25, 1.0, 3.0]

[sweep]
k = [0]
iota = [0, 1]
"""


def write_config(tmp_path: Path, text: str, name: str = "config.toml") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


# ============================================================================
# LIST AND VALIDATE
# ============================================================================

def test_list_prints_every_experiment(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    for entry in list_experiments():
        assert f"[{entry['reference']}]" in out
        header = next(line for line in lines if line.startswith(entry["id"] + " "))
        assert header.rstrip().endswith(f"[{entry['reference']}]")
        assert entry["reference"].split(":")[0] in REFERENCE_KINDS


def test_every_result_has_its_own_id():
    references = [entry["reference"] for entry in list_experiments()]
    assert len(references) == len(set(references))
    ids = {entry["id"] for entry in list_experiments()}
    for experiment_id in (
        "strichartz",
        "strichartz-inverse-gradient",
        "strichartz-log-endpoint",
        "low-frequency-kernel",
        "low-frequency-log-kernel",
        "weighted-strichartz-1",
        "weighted-strichartz-2",
        "relativistic-membrane-evolution",
        "nonlinear-membrane-evolution",
        "maxwell-scalar-evolution",
        "liquid-crystal-evolution",
        "wave-maps-cubic-evolution",
    ):
        assert experiment_id in ids
    assert "preset-evolution" not in ids


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.toml")), ids=lambda p: p.stem)
def test_shipped_configs_validate(path):
    assert main(["validate", str(path)]) == 0


def test_weighted_hypothesis_violation_is_a_config_error(tmp_path, capsys):
    text = (CONFIG_DIR / "weighted_strichartz.toml").read_text(encoding="utf-8").replace("beta2 = 0.6", "beta2 = 1.0")
    path = write_config(tmp_path, text)
    assert main(["validate", str(path)]) == 1
    err = capsys.readouterr().err
    assert "min{3β₁/2, 1}" in err
    assert "sweep[0]" in err


def test_preset_evolution_id_fixes_the_preset(tmp_path, capsys):
    text = (CONFIG_DIR / "membrane_evolution.toml").read_text(encoding="utf-8")
    text = text.replace('profile = "gaussian"', 'preset = "maxwell-scalar"\nprofile = "gaussian"')
    assert main(["validate", str(write_config(tmp_path, text))]) == 1
    assert "relativistic-membrane" in capsys.readouterr().err


def test_strichartz_rejects_the_inverse_endpoint(tmp_path, capsys):
    text = (CONFIG_DIR / "strichartz_endpoint.toml").read_text(encoding="utf-8")
    text = text.replace('experiment = "strichartz-log-endpoint"', 'experiment = "strichartz"')
    text = text.replace("t_short = 10.0\nt_long = 100.0", 'p = 2.0\nr = "inf"\nendpoint = "inverse"')
    assert main(["validate", str(write_config(tmp_path, text))]) == 1
    assert "strichartz-inverse-gradient" in capsys.readouterr().err


def test_unknown_experiment(tmp_path):
    path = write_config(tmp_path, 'experiment = "heat-flow"\n')
    with pytest.raises(ConfigError, match="Unknown experiment"):
        load_config(path)


def test_unknown_key_is_rejected(tmp_path):
    path = write_config(tmp_path, SMALL_KERNEL_SWEEP + "\n[grid]\nhalf_length = 4.0\npoints_per_axis = 32\nspacing = 1.0\n")
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    assert any(problem.startswith("grid.spacing") for problem in excinfo.value.problems)


def test_toml_syntax_error_exits_with_config_status(tmp_path, capsys):
    path = write_config(tmp_path, 'experiment = "kernel-sweep\n')
    assert main(["run", str(path)]) == 1
    assert "TOML syntax error" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["validate", str(tmp_path / "absent.toml")]) == 1


def test_every_failing_point_is_reported(tmp_path):
    text = SMALL_KERNEL_SWEEP.replace("iota = [0, 1]", "iota = [0, 1, 2]")
    with pytest.raises(ConfigError) as excinfo:
        load_config(write_config(tmp_path, text))
    assert len(excinfo.value.problems) == 1
    assert excinfo.value.problems[0].startswith("sweep[2]")


# ============================================================================
# RUNS
# ============================================================================

def test_kernel_sweep_run_writes_the_result_files(tmp_path):
    config = write_config(tmp_path, SMALL_KERNEL_SWEEP)
    out = tmp_path / "run"
    assert main(["run", str(config), "--output", str(out)]) == 0
    for name in (RESULTS_FILE, FLAGGED_FILE, SUMMARY_FILE, MANIFEST_FILE):
        assert (out / name).is_file()

    results = pd.read_csv(out / RESULTS_FILE)
    assert list(results.columns) == ["k", "iota", "M", "t", "r", "regime", "abs_value", "envelope", "ratio", "quad_err"]
    assert len(results) == 2 * 2 * 3
    assert set(results["regime"]) <= {"static", "core", "light-cone", "exterior", "uniform"}

    summary = json.loads((out / SUMMARY_FILE).read_text(encoding="utf-8"))
    assert summary["status"] == 0
    assert len(summary["points"]) == 2


def test_duplicate_runs_are_byte_identical(tmp_path):
    config = write_config(tmp_path, SMALL_KERNEL_SWEEP)
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["run", str(config), "--output", str(first)]) == 0
    assert main(["run", str(config), "--output", str(second), "--workers", "2"]) == 0
    for name in (RESULTS_FILE, FLAGGED_FILE, SUMMARY_FILE, MANIFEST_FILE):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_manifest_reruns_reproduce_results(tmp_path):
    config = write_config(tmp_path, SMALL_KERNEL_SWEEP)
    first, again = tmp_path / "first", tmp_path / "again"
    assert main(["run", str(config), "--output", str(first)]) == 0
    assert main(["run", str(first / MANIFEST_FILE), "--output", str(again)]) == 0
    assert (first / RESULTS_FILE).read_bytes() == (again / RESULTS_FILE).read_bytes()
    assert (first / MANIFEST_FILE).read_bytes() == (again / MANIFEST_FILE).read_bytes()


def test_failing_acceptance_gate_exits_with_three(tmp_path):
    text = SMALL_KERNEL_SWEEP + '\n[[acceptance]]\ncolumn = "sup_ratio"\nmax = 1e-12\naggregate = "max"\n'
    out = tmp_path / "run"
    assert main(["run", str(write_config(tmp_path, text)), "--output", str(out)]) == 3
    summary = json.loads((out / SUMMARY_FILE).read_text(encoding="utf-8"))
    assert summary["status"] == 3
    assert summary["acceptance"][0]["passed"] is False


def test_gate_on_a_missing_column_fails(tmp_path):
    text = SMALL_KERNEL_SWEEP + '\n[[acceptance]]\ncolumn = "no_such_column"\nmax = 1.0\n'
    assert main(["run", str(write_config(tmp_path, text)), "--output", str(tmp_path / "run")]) == 3


def test_output_directory_from_config(tmp_path):
    target = tmp_path / "from-config"
    text = SMALL_KERNEL_SWEEP + f'\n[output]\ndirectory = "{target.as_posix()}"\n'
    assert main(["run", str(write_config(tmp_path, text))]) == 0
    assert (target / RESULTS_FILE).is_file()


def test_low_frequency_kernel_run_reports_the_halving_change(tmp_path):
    text = (
        'experiment = "low-frequency-kernel"\n\n[params]\ntimes = [1.0, 10.0]\nradius_factors = [0.0, 1.0]\n'
        '\n[[acceptance]]\ncolumn = "halving_change"\nmax = 0.2\n'
    )
    out = tmp_path / "run"
    assert main(["run", str(write_config(tmp_path, text)), "--output", str(out)]) == 0
    results = pd.read_csv(out / RESULTS_FILE)
    assert set(results["regime"]) == {"uniform"}
    assert set(results["k"]) == {-1}
    summary = json.loads((out / SUMMARY_FILE).read_text(encoding="utf-8"))
    assert summary["points"][0]["summary"]["halving_change"] <= 0.2
