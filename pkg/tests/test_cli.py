"""End-to-end checks of the command line front end.

Runs the handlers in-process through cli.main so stderr and exit codes
are observable, plus one subprocess call against the installed console
script. Configs use coarse grids to keep the suite quick.
"""

import csv
import json
import math
import subprocess

import pytest

from speclab import cli
from speclab.cli import COMMANDS, DEFAULT_H_LADDER, parse_config
from speclab.errors import InvalidConfigError


def _write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


DISK_EIG = """
h_ladder = [0.0625, 0.03125]
k_max = 3

[[domain]]
kind = "disk"
"""


# ----------------------------------------------------------------------
# config parsing


def test_parse_fills_defaults(tmp_path):
    path = _write(tmp_path, '[[domain]]\nkind = "disk"\n')
    cfg = parse_config(path, "eig")
    assert cfg.h_ladder == DEFAULT_H_LADDER
    assert cfg.k_max >= 1
    assert cfg.seed == cli.DEFAULT_SEED
    assert cfg.domains[0].kind == "disk"
    assert cfg.domains[0].label == "disk()"


def test_parse_rejects_missing_file(tmp_path):
    with pytest.raises(InvalidConfigError, match="not found"):
        parse_config(tmp_path / "nope.toml", "sweep")


def test_parse_rejects_bad_toml(tmp_path):
    path = _write(tmp_path, "h_ladder = [1,\n")
    with pytest.raises(InvalidConfigError, match="parse error"):
        parse_config(path, "sweep")


def test_parse_rejects_unknown_key(tmp_path):
    path = _write(tmp_path, "mesh = 3\n")
    with pytest.raises(InvalidConfigError, match="mesh"):
        parse_config(path, "sweep")


@pytest.mark.parametrize(
    "ladder",
    ["[]", "[0.1, 0.2]", "[0.1, 0.1]", "[0.1, -0.05]", '["a"]'],
)
def test_parse_rejects_bad_ladder(tmp_path, ladder):
    path = _write(tmp_path, f"h_ladder = {ladder}\n")
    with pytest.raises(InvalidConfigError, match="h_ladder"):
        parse_config(path, "sweep")


def test_parse_rejects_bad_domain_table(tmp_path):
    path = _write(tmp_path, '[[domain]]\nkind = "pentagon"\n')
    with pytest.raises(InvalidConfigError, match="unknown kind"):
        parse_config(path, "eig")
    # parameter errors surface at parse time, tagged with the table index
    path = _write(tmp_path, '[[domain]]\nkind = "annulus"\nhole = 2.0\n')
    with pytest.raises(InvalidConfigError, match=r"domain\[0\]"):
        parse_config(path, "eig")


@pytest.mark.parametrize("command", ["eig", "torsion", "asym", "verify"])
def test_point_commands_require_a_domain(tmp_path, command):
    path = _write(tmp_path, "k_max = 4\n")
    with pytest.raises(InvalidConfigError, match="domain"):
        parse_config(path, command)


def test_sweep_and_sharpness_need_no_domain(tmp_path):
    path = _write(tmp_path, "k_max = 4\n")
    assert parse_config(path, "sweep").domains == []
    assert parse_config(path, "sharpness").domains == []


def test_parse_sweep_and_sharpness_tables(tmp_path):
    path = _write(
        tmp_path,
        "[sweep]\ncorpus = \"connected\"\n"
        "[sharpness]\nfamilies = [\"volume-split\"]\n"
        "t_grid = [0.02, 0.04, 0.08, 0.16]\ndoubling = true\n",
    )
    cfg = parse_config(path, "sweep")
    assert cfg.corpus_name == "connected"
    assert cfg.families == ("volume-split",)
    assert cfg.t_grid == (0.02, 0.04, 0.08, 0.16)
    assert cfg.with_doubling

    bad = _write(tmp_path, '[sweep]\ncorpus = "everything"\n', "b.toml")
    with pytest.raises(InvalidConfigError, match="corpus"):
        parse_config(bad, "sweep")
    bad = _write(tmp_path, "[sharpness]\nt_grid = [0.1, 0.2]\n", "c.toml")
    with pytest.raises(InvalidConfigError, match="t_grid"):
        parse_config(bad, "sharpness")
    bad = _write(tmp_path, '[sharpness]\nfamilies = ["squircle"]\n', "d.toml")
    with pytest.raises(InvalidConfigError, match="families"):
        parse_config(bad, "sharpness")


# ----------------------------------------------------------------------
# command runs and artifacts


def _run(command, config_path, out_dir, capsys=None):
    code = cli.main(
        [command, "--config", str(config_path), "--out", str(out_dir)]
    )
    if capsys is not None:
        return code, capsys.readouterr()
    return code


def test_eig_writes_all_artifacts(tmp_path):
    cfg = _write(tmp_path, DISK_EIG)
    out = tmp_path / "out"
    assert _run("eig", cfg, out) == 0
    for name in ("records.csv", "records.json", "run-manifest.json"):
        assert (out / name).is_file()
    assert (out / "plots").is_dir()
    assert list((out / "plots").glob("*.svg"))

    rows = list(csv.DictReader((out / "records.csv").open()))
    assert rows[0]["domain"] == "disk()"
    # two ladder rungs plus the extrapolated triple
    assert len(rows) == 3 * 3
    extrapolated = [r for r in rows if r["extrapolated"] == "1"]
    assert len(extrapolated) == 3
    assert all(float(r["error_estimate"]) > 0 for r in extrapolated)

    manifest = json.loads((out / "run-manifest.json").read_text())
    assert manifest["seed"] == cli.DEFAULT_SEED
    assert manifest["config"]["command"] == "eig"
    assert manifest["config"]["h_ladder"] == [0.0625, 0.03125]
    assert set(manifest["versions"]) >= {"python", "numpy", "scipy", "speclab"}


def test_fixed_config_is_byte_deterministic(tmp_path):
    cfg = _write(tmp_path, DISK_EIG)
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert _run("eig", cfg, out) == 0
        outs.append(out)
    for name in ("records.csv", "records.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_torsion_command_reports_ladder_and_extrapolation(tmp_path):
    cfg = _write(tmp_path, DISK_EIG)
    out = tmp_path / "out"
    assert _run("torsion", cfg, out) == 0
    rows = list(csv.DictReader((out / "records.csv").open()))
    assert [r["extrapolated"] for r in rows] == ["0", "0", "1"]
    final = rows[-1]
    # unit-radius disk: T = pi/8, sup w = 1/4
    assert float(final["torsion"]) == pytest.approx(math.pi / 8, rel=0.02)
    assert float(final["sup_w"]) == pytest.approx(0.25, rel=0.02)
    assert float(final["torsion_error"]) > 0


def test_asym_command_emits_witnesses(tmp_path):
    cfg = _write(
        tmp_path,
        'h_ladder = [0.03125]\n[[domain]]\nkind = "disk"\n',
    )
    out = tmp_path / "out"
    assert _run("asym", cfg, out) == 0
    rows = list(csv.DictReader((out / "records.csv").open()))
    assert [r["order"] for r in rows] == ["1", "2"]
    assert rows[0]["witness"].startswith("ball ")
    assert rows[1]["witness"].startswith("pair ")
    # a ball is its own best single-ball witness
    assert float(rows[0]["value"]) <= float(rows[0]["value_error"]) + 0.02

    payload = json.loads((out / "records.json").read_text())
    assert payload["rows"][0]["witness"]["kind"] == "ball"
    assert payload["rows"][1]["witness"]["kind"] == "ball-pair"


def test_verify_command_checks_one_domain(tmp_path):
    cfg = _write(
        tmp_path,
        'h_ladder = [0.041666666666666664]\nk_max = 3\n'
        '[[domain]]\nkind = "disk"\n',
    )
    out = tmp_path / "out"
    assert _run("verify", cfg, out) == 0
    payload = json.loads((out / "records.json").read_text())
    assert payload["failures"] == []
    assert payload["aggregates"]["faber-krahn"]["violations"] == 0
    verdicts = {row["verdict"] for row in payload["records"]}
    assert "violated" not in verdicts
    assert list(payload["provenance"]) == ["disk()"]


def test_exit_code_2_on_config_error(tmp_path, capsys):
    cfg = _write(tmp_path, "h_ladder = [0.1, 0.2]\n")
    code, captured = _run("sweep", cfg, tmp_path / "out", capsys)
    assert code == 2
    assert "config error" in captured.err
    assert "h_ladder" in captured.err
    assert not (tmp_path / "out").exists()


def test_exit_code_1_on_build_failure(tmp_path, capsys):
    # the speck passes shape validation but rasterizes to nothing
    cfg = _write(
        tmp_path,
        'h_ladder = [0.0625]\n[[domain]]\nkind = "disk"\narea = 1e-6\n',
    )
    code, captured = _run("eig", cfg, tmp_path / "out", capsys)
    assert code == 1
    assert "error" in captured.err


def test_console_script_is_installed(tmp_path):
    cfg = _write(tmp_path, DISK_EIG)
    out = tmp_path / "out"
    proc = subprocess.run(
        [
            "speclab", "eig",
            "--config", str(cfg),
            "--out", str(out),
        ],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "records.csv").is_file()


def test_command_list_is_stable():
    assert COMMANDS == ("eig", "torsion", "asym", "verify", "sweep",
                        "sharpness")
    with pytest.raises(SystemExit) as exc:
        cli.main(["fold", "--config", "x.toml"])
    assert exc.value.code == 2


def test_jobs_flag_validated(tmp_path, capsys):
    cfg = _write(tmp_path, DISK_EIG)
    code = cli.main(
        ["eig", "--config", str(cfg), "--out", str(tmp_path / "o"),
         "--jobs", "0"]
    )
    captured = capsys.readouterr()
    assert code == 2
    assert "jobs" in captured.err
