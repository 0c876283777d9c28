import json
import math
from pathlib import Path

import pytest

from soficlab.cli import EXIT_CAP, EXIT_CONFIG, EXIT_OK, run
from soficlab.config import ConfigError, load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _write(tmp_path, text, name="exp.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


Z2_DEFECT = """
kind = "defect"
p = 2
[presentation]
generators = "ab"
relators = ["abAB"]
[chain]
builtin = "abelianization"
modulus = 2
levels = 3
[experiment]
dim = 1
group_tag = "Z^2"
"""


def test_defect_run_writes_reports(tmp_path, capsys):
    cfg_path = _write(tmp_path, Z2_DEFECT)
    assert run("defect", str(cfg_path), out=str(tmp_path), plot=True) == EXIT_OK
    csv_path = tmp_path / "defect_exp.csv"
    json_path = tmp_path / "defect_exp.json"
    svg_path = tmp_path / "defect_exp.svg"
    assert csv_path.exists() and json_path.exists() and svg_path.exists()

    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("# soficlab report v1; kind=defect")
    assert lines[1].split(",")[0] == "level"
    assert len(lines) == 2 + 3  # comment, header, three levels

    data = json.loads(json_path.read_text())
    assert data["kind"] == "defect"
    assert [r["dimH_ffp"] for r in data["records"]] == [2, 2, 2]
    # CSV floats are renderings of the exact integers in the JSON
    for line, rec in zip(lines[2:], data["records"]):
        defect_cell = float(line.split(",")[8])
        assert defect_cell == rec["dimH_ffp"] / rec["N"] * math.log(2)

    assert svg_path.read_text().startswith("<svg")


def test_reports_are_byte_identical_across_runs(tmp_path):
    cfg_path = _write(tmp_path, Z2_DEFECT)
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert run("defect", str(cfg_path), out=str(out1)) == EXIT_OK
    assert run("defect", str(cfg_path), out=str(out2)) == EXIT_OK
    assert (out1 / "defect_exp.csv").read_bytes() == (out2 / "defect_exp.csv").read_bytes()
    assert (out1 / "defect_exp.json").read_bytes() == (out2 / "defect_exp.json").read_bytes()


def test_jobs_flag_gives_same_rows(tmp_path):
    cfg_path = _write(tmp_path, Z2_DEFECT)
    out1, out2 = tmp_path / "serial", tmp_path / "parallel"
    assert run("defect", str(cfg_path), jobs=1, out=str(out1)) == EXIT_OK
    assert run("defect", str(cfg_path), jobs=2, out=str(out2)) == EXIT_OK
    assert (out1 / "defect_exp.csv").read_bytes() == (out2 / "defect_exp.csv").read_bytes()


def test_bundled_configs_load():
    for name in ("f2_ow", "z2_torus", "genus2", "oracle_small", "chain", "f2_entropy"):
        cfg = load_config(CONFIGS / f"{name}.toml")
        assert cfg.levels


def test_oracle_check_prints_counts(tmp_path, capsys):
    assert run("oracle-check", str(CONFIGS / "oracle_small.toml"), out=str(tmp_path)) == EXIT_OK
    out = capsys.readouterr().out
    assert "brute count" in out and "p^kernel_dim" in out


def test_chain_info_rows(tmp_path):
    assert run("chain-info", str(CONFIGS / "chain.toml"), out=str(tmp_path)) == EXIT_OK
    lines = (tmp_path / "chain_info_chain.csv").read_text().splitlines()
    assert lines[1] == "level,N,word,trivial_image,farber_defect"
    # the commutator acts trivially on abelian levels and is flagged, not failed
    trivial = [l for l in lines if ",abAB," in l]
    assert trivial and all(l.split(",")[3] == "true" for l in trivial)


def test_config_error_exit_code(tmp_path, capsys):
    bad = _write(tmp_path, 'kind = "defect"\n')
    assert run("defect", str(bad), out=str(tmp_path)) == EXIT_CONFIG
    assert run("defect", str(tmp_path / "missing.toml"), out=str(tmp_path)) == EXIT_CONFIG
    not_prime = _write(tmp_path, Z2_DEFECT.replace("p = 2", "p = 4"), "p4.toml")
    assert run("defect", str(not_prime), out=str(tmp_path)) == EXIT_CONFIG


def test_cap_exceeded_exit_code(tmp_path, capsys):
    big = _write(
        tmp_path,
        """
kind = "oracle-check"
p = 2
[presentation]
generators = "ab"
relators = []
[[chain.level]]
random = { N = 64, seed = 1 }
[experiment]
matrix = [["1 - A", "1 - B"]]
""",
    )
    assert run("oracle-check", str(big), out=str(tmp_path)) == EXIT_CAP


def test_plot_needs_two_levels(tmp_path):
    single = _write(
        tmp_path,
        Z2_DEFECT.replace("levels = 3", "levels = 1"),
        "single.toml",
    )
    assert run("defect", str(single), out=str(tmp_path), plot=True) == EXIT_CONFIG


def test_config_rejects_unknown_kind(tmp_path):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, Z2_DEFECT), kind="frobnicate")
