import json
from pathlib import Path

import numpy as np
import pytest

from qmatrix import cli
from qmatrix.errors import ConfigError, EmptyInput
from qmatrix.io import (
    default_output_dir,
    pgm_bytes,
    read_csv,
    read_pgm,
    write_csv,
    write_histogram,
    write_pgm_heatmap,
)
from qmatrix.scenarios import SCENARIOS, ScenarioConfig, parse_overrides, resolve, run

DATA = Path(__file__).parent / "data"


# --- CSV / PGM --------------------------------------------------------------------

def test_csv_one_column(tmp_path):
    path = write_csv(tmp_path / "a.csv", {"x": [1, 2, 3]})
    assert path.read_bytes() == b"x\n1\n2\n3\n"


def test_csv_float_format(tmp_path):
    path = write_csv(tmp_path / "a.csv", {"e": [np.pi, -0.0, 1e-300], "k": [0, 1, 2]})
    lines = path.read_text().splitlines()
    assert lines[0] == "e,k"
    assert lines[1] == "3.14159265359e+00,0"
    assert lines[2] == "0.00000000000e+00,1"


def test_csv_round_trip(tmp_path):
    values = np.random.default_rng(4).normal(size=50) * 10.0 ** np.arange(-25, 25)
    path = write_csv(tmp_path / "r.csv", {"v": values, "label": ["s"] * 50})
    back = read_csv(path)
    np.testing.assert_allclose(back["v"], values, rtol=5e-12)
    assert back["label"] == ["s"] * 50


def test_csv_rejects_nonfinite_and_ragged(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "n.csv", {"x": [1.0, np.nan]})
    with pytest.raises(ValueError):
        write_csv(tmp_path / "n.csv", {"x": [1.0], "y": [1.0, 2.0]})


def test_pgm_single_pixel(tmp_path):
    path = write_pgm_heatmap([[7.0]], tmp_path / "one.pgm")
    assert path.read_bytes() == b"P5\n1 1\n65535\n\x00\x00"


def test_pgm_linear_map(tmp_path):
    path = write_pgm_heatmap(np.array([[0, 1], [2, 3]]), tmp_path / "g.pgm")
    np.testing.assert_array_equal(read_pgm(path).ravel(), [0, 21845, 43690, 65535])


def test_pgm_constant_and_empty():
    assert pgm_bytes(np.full((2, 3), 4.2)).endswith(b"\x00" * 12)
    with pytest.raises(EmptyInput):
        pgm_bytes(np.zeros((0, 3)))


def test_histogram_rows(tmp_path):
    table = read_csv(write_histogram(tmp_path / "h.csv", [1.0, 2.0, 3.0], bins=5))
    assert len(table["bin_center"]) == 5
    assert sum(table["count"]) == 3
    single = read_csv(write_histogram(tmp_path / "s.csv", [4.0], bins=3))
    assert sum(1 for c in single["count"] if c) == 1


def test_default_output_dir(monkeypatch, tmp_path):
    monkeypatch.setenv("QMATRIX_OUT", str(tmp_path / "elsewhere"))
    assert default_output_dir() == tmp_path / "elsewhere"
    monkeypatch.delenv("QMATRIX_OUT")
    assert default_output_dir() == Path("qmatrix-out")


# --- configuration ----------------------------------------------------------------

def test_defaults_match_reference():
    reference = json.loads((DATA / "reference_defaults.json").read_text())
    assert set(reference) == set(SCENARIOS)
    for name, constants in reference.items():
        defaults = SCENARIOS[name].defaults
        for key, value in constants.items():
            assert defaults[key] == pytest.approx(value, rel=1e-15), (name, key)


def test_override_parsing():
    assert parse_overrides(["j=3", "ix=0.5", "frame=body"]) == {"j": 3, "ix": 0.5, "frame": "body"}
    with pytest.raises(ConfigError):
        parse_overrides(["novalue"])


def test_resolve_rejects_unknown_and_mistyped():
    with pytest.raises(ConfigError):
        resolve("rotor", {"foo": 1})
    with pytest.raises(ConfigError):
        resolve("rotor-density", {"j": "big"})
    with pytest.raises(ConfigError):
        resolve("rotor-density", {"j": 2.5})
    with pytest.raises(ConfigError):
        resolve("nope")
    assert resolve("rotor", {"j": 3})["j"] == 3.0
    assert resolve("bh-trimer", {"n_particles": 6.0})["n_particles"] == 6


# --- runs -------------------------------------------------------------------------

def test_rotor_run(tmp_path):
    manifest = run(ScenarioConfig("rotor", {}, tmp_path))
    table = read_csv(tmp_path / "rotor-levels.csv")
    np.testing.assert_allclose(table["energy"], [4.2679, 4.5, 6.0, 7.5, 7.7321], atol=5e-5)
    saved = json.loads((tmp_path / "rotor-manifest.json").read_text())
    assert saved["artifacts"] == manifest.artifacts == ["rotor-levels.csv"]
    assert saved["parameters"]["j"] == 2
    assert saved["version"]


def test_pullen_edmonds_run(tmp_path):
    run(ScenarioConfig("pullen-edmonds", {}, tmp_path))
    table = read_csv(tmp_path / "pullen-edmonds-levels.csv")
    assert table["energy"][0] == pytest.approx(1.0980, abs=5e-5)
    assert table["symmetry"][0] == "A1"
    assert read_pgm(tmp_path / "pullen-edmonds-wavefunction.pgm").shape == (161, 161)


def test_runs_are_byte_identical(tmp_path):
    for out in ("a", "b"):
        run(ScenarioConfig("bloch-oscillating", {"periods": 1}, tmp_path / out))
    for name in ("bloch-oscillating-dynamics.csv", "bloch-oscillating-amplitude.pgm"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_formats_filter(tmp_path):
    manifest = run(ScenarioConfig("bloch-breathing", {"periods": 1}, tmp_path, frozenset({"pgm"})))
    assert manifest.artifacts == ["bloch-breathing-amplitude.pgm"]


@pytest.mark.parametrize("name,overrides", [
    ("double-well", {"steps": 50}),
    ("bloch-flip", {}),
    ("rotor-density", {"j": 30}),
    ("bh-dimer-full", {"n_particles": 6}),
    ("bh-dimer-sector", {}),
    ("bh-trimer", {"n_particles": 6, "cutoff": 6}),
    ("lindblad-dimer", {"steps": 100}),
])
def test_every_scenario_runs(tmp_path, name, overrides):
    manifest = run(ScenarioConfig(name, overrides, tmp_path))
    assert manifest.artifacts
    for artifact in manifest.artifacts:
        assert (tmp_path / artifact).stat().st_size > 0


# --- command line -----------------------------------------------------------------

def test_cli_list(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    for name in SCENARIOS:
        assert name in out


def test_cli_run_with_overrides(tmp_path, capsys):
    assert cli.main(["run", "rotor", "j=1", "--out", str(tmp_path), "--formats", "csv"]) == 0
    assert len(read_csv(tmp_path / "rotor-levels.csv")["energy"]) == 3


def test_cli_config_file_and_override_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"j": 1, "ix": 2.0}')
    assert cli.main(["run", "rotor", "--config", str(cfg), "j=2", "--out", str(tmp_path / "o")]) == 0
    params = json.loads((tmp_path / "o" / "rotor-manifest.json").read_text())["parameters"]
    assert params["j"] == 2 and params["ix"] == 2.0


def test_cli_jobs_use_separate_directories(tmp_path):
    for stem, j in (("small", 1), ("large", 3)):
        (tmp_path / f"{stem}.json").write_text(json.dumps({"j": j}))
    argv = ["run", "rotor", "--config", str(tmp_path / "small.json"), "--config", str(tmp_path / "large.json"),
            "--jobs", "2", "--out", str(tmp_path / "o")]
    assert cli.main(argv) == 0
    assert len(read_csv(tmp_path / "o" / "small" / "rotor-levels.csv")["energy"]) == 3
    assert len(read_csv(tmp_path / "o" / "large" / "rotor-levels.csv")["energy"]) == 7


def test_cli_j_flag(tmp_path):
    assert cli.main(["run", "rotor-density", "--j", "20", "--out", str(tmp_path)]) == 0
    params = json.loads((tmp_path / "rotor-density-manifest.json").read_text())["parameters"]
    assert params["j"] == 20
    assert cli.main(["run", "rotor", "--j", "20", "--out", str(tmp_path)]) == 2


def test_cli_uses_environment_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("QMATRIX_OUT", str(tmp_path / "env"))
    assert cli.main(["run", "rotor"]) == 0
    assert (tmp_path / "env" / "rotor-levels.csv").exists()


@pytest.mark.parametrize("argv,code", [
    (["run", "rotor", "foo=1"], 2),
    (["run", "no-such-scenario"], 2),
    (["run", "rotor", "--formats", "png"], 2),
    (["frobnicate"], 2),
    (["run", "bloch-flip", "nmax=60"], 3),
])
def test_cli_exit_codes(tmp_path, argv, code):
    assert cli.main(argv + ["--out", str(tmp_path)] if argv[0] == "run" else argv) == code


def test_cli_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.main(["run", "rotor", "--out", str(blocker / "sub")]) == 4
