import csv
import io
import json
import subprocess
import sys

import pytest

from qcapqubit.cli import load_config, parse_axis, parse_quantity, run
from qcapqubit.errors import ValidationError

FINAL = ["--area", "5e4um2", "--temp", "25mK", "--inductance", "60nH"]


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- unit parsing ----------------------------------------------------------


@pytest.mark.parametrize(
    "text, kind, expected",
    [
        ("25mK", "temperature", 0.025),
        ("0.1K", "temperature", 0.1),
        ("60nH", "inductance", 60e-9),
        ("100fF", "capacitance", 1e-13),
        ("10GHz", "frequency", 1e10),
        ("5e4um2", "area", 5e-8),
        ("1mm2", "area", 1e-6),
        ("0.5cm2", "area", 5e-5),
        ("1e6m/s", "velocity", 1e6),
        ("2mV", "voltage", 2e-3),
        ("1e8cm-2", "density", 1e8),
        ("10meV", "depth", 10.0),
        ("0.01eV", "depth", 10.0),
        ("0.025", "temperature", 0.025),
        (3, "temperature", 3.0),
    ],
)
def test_parse_quantity(text, kind, expected):
    assert parse_quantity(text, kind) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize(
    "text, kind",
    [("25mF", "temperature"), ("5e4um", "area"), ("abc", "inductance"), ("10xHz", "frequency"), ("1e400", "temperature")],
)
def test_parse_quantity_rejects(text, kind):
    with pytest.raises(ValidationError):
        parse_quantity(text, kind)


def test_parse_axis():
    assert parse_axis("15mK,25mK", "temperature") == pytest.approx([0.015, 0.025])
    assert parse_axis("linspace(10mK, 30mK, 3)", "temperature") == pytest.approx([0.01, 0.02, 0.03])
    assert parse_axis(["1mm2", 2e-6], "area") == pytest.approx([1e-6, 2e-6])


# -- subcommands -----------------------------------------------------------


def test_design_final_point(capsys):
    assert run(["design", *FINAL, "--format", "json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert row["f_actual"] == pytest.approx(3.55e9, rel=0.2)
    assert row["anharmonicity"] > 0
    assert row["inductance"] == pytest.approx(60e-9)
    assert set(row) >= {"tau", "v_zp", "n_zp", "feasible"}


def test_design_text_output(capsys):
    assert run(["design", *FINAL]) == 0
    out = capsys.readouterr().out
    for label in ("actual frequency", "anharmonicity", "tau", "V_zp", "n_zp", "check"):
        assert label in out


def test_linear_stub_has_zero_anharmonicity(capsys):
    assert run(["design", *FINAL, "--linear-stub", "--format", "json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert abs(row["anharmonicity"]) <= 1e-6


def test_tables_csv_rows(capsys):
    assert run(["tables", "--which", "1", "--format", "csv"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert len(rows) == 3
    assert rows[0]["table"] == "1" and "actual_rel_dev" in rows[0]


def test_cq_curve(capsys):
    assert run(["cq", "--area", "1mm2", "--temp", "25mK", "--num", "5"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert len(rows) == 5
    assert float(rows[2]["voltage"]) == 0.0
    assert float(rows[2]["capacitance"]) == pytest.approx(7.03116577e-13, rel=1e-8)


def test_sweep_command(tmp_path):
    out = tmp_path / "s.csv"
    code = run(["sweep", *FINAL, "--temps", "15mK,25mK", "--quantities", "f_actual,anharmonicity", "-o", str(out)])
    assert code == 0
    rows = _csv(out.read_text())
    assert [float(r["temperature"]) for r in rows] == [0.015, 0.025]
    assert float(rows[0]["anharmonicity"]) > float(rows[1]["anharmonicity"])


def test_sens_command(capsys):
    assert run(["sens", *FINAL, "--format", "json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert row["richardson_error"] <= 1e-3
    assert row["temperature_exponent"] < 0


def test_check_command(capsys):
    assert run(["check", *FINAL, "--puddle-density", "2e8cm-2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["puddle_density_ok"] is False and data["puddle_depth_ok"] is True


def test_kerr_cancellation(capsys):
    assert run(["kerr", "--omega", "2e10", "--alpha", "0.002", "--tau", "1e-13"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert [float(r["energy_hbar_omega"]) for r in rows] == pytest.approx([0.5, 1.5, 2.5], rel=1e-10)


# -- errors ----------------------------------------------------------------


def _error_line(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    return err[-1]


def test_validation_exit_code(capsys):
    assert run(["design", "--area=-1mm2"]) == 2
    assert _error_line(capsys).startswith("error code=2 kind=validation:")


def test_both_inductance_and_frequency(capsys):
    assert run(["design", *FINAL, "--design-freq", "5GHz"]) == 2


def test_usage_errors(capsys):
    assert run(["frobnicate"]) == 2
    assert _error_line(capsys) == "error code=2 kind=usage: invalid command line"
    assert run(["design", "--no-such-flag"]) == 2
    assert run(["design", "--temp", "25mF"]) == 2
    assert run([]) == 2


def test_numeric_exit_code(capsys):
    # strong quartic softening leaves too few localized Fock states
    assert run(["kerr", "--omega", "1", "--tau", "0.5", "--n-trunc", "20"]) == 3
    assert _error_line(capsys).startswith("error code=3 kind=numeric:")


def test_io_error_exit_code(tmp_path, capsys):
    assert run(["tables", "--which", "1", "-o", str(tmp_path / "no" / "x.csv")]) == 2
    assert "kind=io" in _error_line(capsys)


# -- config ----------------------------------------------------------------


def test_config_merge_flags_win(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"area": "5e4um2", "temperature": "50mK", "inductance": "60nH"}))
    assert run(["--config", str(cfg), "design", "--format", "json"]) == 0
    (hot,) = json.loads(capsys.readouterr().out)
    assert run(["--config", str(cfg), "design", "--temp", "25mK", "--format", "json"]) == 0
    (cold,) = json.loads(capsys.readouterr().out)
    assert run(["design", *FINAL, "--format", "json"]) == 0
    (ref,) = json.loads(capsys.readouterr().out)
    assert cold == ref
    assert hot["anharmonicity"] < cold["anharmonicity"]


def test_config_flag_replaces_other_inductor_choice(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"design_frequency": "5GHz"}))
    assert run(["--config", str(cfg), "design", "--inductance", "60nH", "--format", "json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert row["inductance"] == pytest.approx(60e-9)


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"area": "1mm2", "colour": "blue"}))
    with pytest.raises(ValidationError, match="colour"):
        load_config(str(cfg))
    assert run(["--config", str(cfg), "design"]) == 2
    assert "colour" in _error_line(capsys)


@pytest.mark.parametrize("content", ["[1, 2]", "{not json", '{"temperature": "hot"}', '{"n_levels": "x"}'])
def test_config_bad_content(tmp_path, content):
    cfg = tmp_path / "c.json"
    cfg.write_text(content)
    with pytest.raises(ValidationError):
        load_config(str(cfg))


def test_missing_config(tmp_path):
    assert run(["--config", str(tmp_path / "nope.json"), "design"]) == 2


# -- determinism -----------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", *FINAL, "--temps", "15mK,25mK", "--areas", "5e4um2,1e5um2"],
        ["sweep", *FINAL, "--temps", "15mK,25mK", "--format", "json", "--workers", "3"],
        ["tables", "--format", "csv"],
        ["tables", "--which", "2,3", "--format", "json"],
    ],
)
def test_byte_identical_outputs(tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run([*argv, "-o", str(a)]) == 0
    assert run([*argv, "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verbose_banner_on_stderr_only(capsys):
    assert run(["--verbose", "kerr", "--omega", "1e10"]) == 0
    captured = capsys.readouterr()
    assert "qcapqubit" not in captured.out
    assert captured.out.startswith("level,")


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qcapqubit.cli", "kerr", "--omega", "1e10", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)) == 3
