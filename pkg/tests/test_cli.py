import json
import subprocess
import sys
from pathlib import Path

import pytest

from longedge.cli import ConfigError, ExperimentConfig, main


BASE = {
    "model": "continuous",
    "family": "F",
    "alpha": 3.0,
    "d": 1,
    "rho": 1.0,
    "n_grid": [10],
    "m": 20,
    "seed": 12345,
}


def write_config(tmp_path: Path, **overrides) -> Path:
    cfg = dict(BASE)
    cfg.update(overrides)
    p = tmp_path / "config.json"
    p.write_text(json.dumps(cfg))
    return p


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({**BASE, "bogus_key": 1})


def test_config_validates_values():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({**BASE, "model": "nope"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({**BASE, "alpha": -1.0})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({**BASE, "m": 0})


def test_config_roundtrip_defaults():
    cfg = ExperimentConfig.from_dict(dict(BASE))
    assert cfg.model == "continuous"
    assert cfg.workers == 1


def run_cli(args, tmp_path):
    return subprocess.run(
        [sys.executable, "-m", "longedge.cli", *args],
        capture_output=True, text=True, cwd=tmp_path)


def test_simulate_writes_outputs(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "out"
    r = run_cli(["simulate", "--config", str(cfg), "--out", str(out)], tmp_path)
    assert r.returncode == 0, r.stderr
    assert (out / "simulate_summary.json").exists()
    csvs = list(out.glob("*.csv"))
    assert csvs
    header = csvs[0].read_text().splitlines()[0]
    assert "e_star" in header


def test_simulate_deterministic_given_seed(tmp_path):
    cfg = write_config(tmp_path)
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        r = run_cli(["simulate", "--config", str(cfg), "--out", str(out)], tmp_path)
        assert r.returncode == 0, r.stderr
        outs.append(sorted(p.read_bytes() for p in out.glob("*.csv")))
    assert outs[0] == outs[1]


def test_seed_flag_overrides_config(tmp_path):
    cfg = write_config(tmp_path)
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    r1 = run_cli(["simulate", "--config", str(cfg), "--out", str(out1),
                  "--seed", "999"], tmp_path)
    r2 = run_cli(["simulate", "--config", str(cfg), "--out", str(out2)], tmp_path)
    assert r1.returncode == 0 and r2.returncode == 0
    a = sorted(p.read_bytes() for p in out1.glob("*.csv"))
    b = sorted(p.read_bytes() for p in out2.glob("*.csv"))
    assert a != b


def test_exact_command(tmp_path):
    cfg = write_config(tmp_path, n_grid=[5], r_grid=[0.5, 1.0, 2.0])
    out = tmp_path / "exact"
    r = run_cli(["exact", "--config", str(cfg), "--out", str(out)], tmp_path)
    assert r.returncode == 0, r.stderr
    files = list(out.iterdir())
    assert files


def test_norming_command(tmp_path):
    cfg = write_config(tmp_path, schedule="frechet", n_grid=[10, 100])
    out = tmp_path / "norm"
    r = run_cli(["norming", "--config", str(cfg), "--out", str(out)], tmp_path)
    assert r.returncode == 0, r.stderr


def test_invalid_config_exit_code(tmp_path):
    cfg = write_config(tmp_path, model="martian")
    r = run_cli(["simulate", "--config", str(cfg), "--out", str(tmp_path / "x")], tmp_path)
    assert r.returncode == 1


def test_unknown_key_exit_code(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({**BASE, "extra": True}))
    r = run_cli(["simulate", "--config", str(p), "--out", str(tmp_path / "x")], tmp_path)
    assert r.returncode == 1


def test_unknown_suite_exit_code(tmp_path):
    r = run_cli(["verify", "--suite", "no-such-suite"], tmp_path)
    assert r.returncode == 1
    assert "no-such-suite" in (r.stderr + r.stdout)


def test_main_callable_directly(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "direct"
    code = main(["simulate", "--config", str(cfg), "--out", str(out)])
    assert code == 0
