"""End-to-end checks of the command-line surface.

Commands run in-process through main(argv) so exit codes, stdout, and
stderr can be asserted directly; one test exercises the installed
console script through a real subprocess. Output rows are cross-checked
against the library API, which assembles the same reports without going
through the config layering.
"""

import json
import math
import shutil
import subprocess

import pytest

from solaraudit import config as cfg
from solaraudit.cli import main
from solaraudit.models import ThreeLevelParams, decay_report
from solaraudit.output import format_number

REPORT_HEADER = "j_abs,j_loss,power,ratio,sigma,verdict"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_lines(out):
    lines = out.splitlines()
    rows = [ln.split(",") for ln in lines[1:] if not ln.startswith("#")]
    footers = [ln for ln in lines[1:] if ln.startswith("#")]
    return lines[0], rows, footers


def test_help_paths(capsys):
    code, out, err = run_cli(capsys)
    assert code == 0 and err == ""
    assert "Commands:" in out
    for command in ("toy-decay", "sweep", "fmo-trace", "compare-power"):
        assert command in out
    for argv in (["-h"], ["--help"], ["help"], ["toy-decay", "--help"]):
        code_i, out_i, err_i = run_cli(capsys, *argv)
        assert code_i == 0 and out_i == out and err_i == ""


def test_unknown_command(capsys):
    code, out, err = run_cli(capsys, "frobnicate")
    assert code == 2 and out == ""
    assert err.startswith("error: ") and "unknown command" in err


def test_malformed_argv(capsys):
    code, _, err = run_cli(capsys, "toy-decay", "--t_loss")
    assert code == 2 and "needs a value" in err
    code, _, err = run_cli(capsys, "toy-decay", "0.5")
    assert code == 2 and "unexpected argument" in err
    code, _, err = run_cli(capsys, "toy-decay", "--", "x")
    assert code == 2 and "unexpected argument" in err
    code, _, err = run_cli(capsys, "toy-decay", "--format", "xml")
    assert code == 2 and "--format must be csv or json" in err


def test_report_csv_shape(capsys):
    for command in ("toy-decay", "toy-ham", "donor-acceptor", "photocell"):
        code, out, err = run_cli(capsys, command)
        assert code == 0 and err == ""
        header, rows, footers = csv_lines(out)
        assert header == REPORT_HEADER
        assert len(rows) == 1 and footers == []
        assert len(rows[0]) == 6
        assert rows[0][5] in ("consistent", "violation", "undefined")
        for cell in rows[0][:5]:
            float(cell)


def test_report_landmark_ratios(capsys):
    # Defaults put the load transition half a hot gap below recycling,
    # so both multi-level cycles report an extraction ratio of 1/2.
    for command in ("donor-acceptor", "photocell"):
        _, out, _ = run_cli(capsys, command)
        _, rows, _ = csv_lines(out)
        assert float(rows[0][3]) == pytest.approx(0.5, rel=1e-12)
    _, out, _ = run_cli(capsys, "toy-decay")
    _, rows, _ = csv_lines(out)
    assert float(rows[0][3]) == pytest.approx(0.6, rel=1e-12)


def test_report_row_matches_library_route(capsys):
    _, out, _ = run_cli(capsys, "toy-decay")
    report = decay_report(ThreeLevelParams(**cfg.default_section("toy")))
    cells = [
        format_number(x)
        for x in (report.j_abs, report.j_loss, report.power, report.ratio, report.sigma)
    ]
    cells.append(report.verdict)
    assert out.splitlines()[1] == ",".join(cells)


def test_json_payload_shape(capsys):
    code, out, _ = run_cli(capsys, "toy-decay", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"model", "params", "rows", "units", "violations"}
    assert payload["model"] == "toy-decay"
    assert payload["violations"] == []
    assert isinstance(payload["units"], dict) and payload["units"]
    assert len(payload["rows"]) == 1 and len(payload["rows"][0]) == 6
    # auto rates pass through the layering as nulls
    assert payload["params"]["gamma_h"] is None
    assert payload["params"]["gamma_c"] is None
    assert payload["params"]["omega_abs"] == 1.0


def test_flag_override_flips_verdict(capsys):
    _, out, _ = run_cli(capsys, "toy-decay")
    assert out.splitlines()[1].endswith(",consistent")
    _, out, _ = run_cli(capsys, "toy-decay", "--t_loss", "0.9")
    assert out.splitlines()[1].endswith(",violation")


def test_config_file_layering(capsys, tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("[toy]\nt_loss = 0.2\n")
    _, out, _ = run_cli(capsys, "toy-decay", "--config", str(path), "--format", "json")
    params = json.loads(out)["params"]
    assert params["t_loss"] == 0.2
    assert params["omega_rc"] == 0.5
    _, out, _ = run_cli(
        capsys, "toy-decay", "--config", str(path), "--t_loss", "0.4", "--format", "json"
    )
    assert json.loads(out)["params"]["t_loss"] == 0.4


def test_config_file_errors(capsys, tmp_path):
    cases = {
        "unknown_key.cfg": ("[toy]\nbogus = 1\n", "unknown keys in [toy]: bogus"),
        "unknown_section.cfg": ("[nope]\nx = 1\n", "unknown section [nope]"),
        "dup_key.cfg": ("[toy]\ngamma = 1\ngamma = 2\n", "duplicate key"),
        "stray_key.cfg": ("gamma = 1\n", "outside any [section]"),
        "bad_line.cfg": ("[toy]\ngamma\n", "expected '[section]' or 'key = value'"),
    }
    for name, (text, needle) in cases.items():
        path = tmp_path / name
        path.write_text(text)
        code, _, err = run_cli(capsys, "toy-decay", "--config", str(path))
        assert code == 2 and err.startswith("error: ")
        assert needle in err
    code, _, err = run_cli(capsys, "toy-decay", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2 and "cannot read config file" in err


def test_bad_values_exit_2(capsys):
    code, _, err = run_cli(capsys, "toy-decay", "--omega_abs", "banana")
    assert code == 2 and "omega_abs" in err
    code, _, err = run_cli(capsys, "toy-decay", "--omega_rc", "2.5")
    assert code == 2 and "omega_rc" in err
    code, _, err = run_cli(capsys, "toy-decay", "--nope", "3")
    assert code == 2 and "unknown keys in [toy]: nope" in err


def test_out_file_matches_stdout(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "sweep")
    assert code == 0
    target = tmp_path / "table.csv"
    code, silent, _ = run_cli(capsys, "sweep", "--out", str(target))
    assert code == 0 and silent == ""
    assert target.read_text() == out
    code, _, err = run_cli(capsys, "sweep", "--out", str(tmp_path / "nodir" / "x.csv"))
    assert code == 2 and "cannot write output file" in err


def test_sweep_csv_footer_marks_onset(capsys):
    code, out, _ = run_cli(capsys, "sweep")
    assert code == 0
    header, rows, footers = csv_lines(out)
    assert header == "axis," + REPORT_HEADER
    assert len(rows) == 50 and all(len(r) == 7 for r in rows)
    assert len(footers) == 1 and footers[0].startswith("# violation: ")
    lo, hi = (float(tok) for tok in footers[0][len("# violation: ") :].split(".."))
    onset = 2.0 * (1.0 - 0.05) / (1.0 + 0.05)
    assert abs(lo - onset) < 1e-3
    assert hi == pytest.approx(1.98, rel=1e-12)


def test_sweep_json_violations(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"model", "params", "rows", "units", "violations"}
    assert payload["model"] == "toy_decay"
    assert len(payload["rows"]) == 50 and len(payload["rows"][0]) == 7
    assert len(payload["violations"]) == 1
    lo, hi = payload["violations"][0]
    assert abs(lo - 2.0 * 0.95 / 1.05) < 1e-3
    assert hi == pytest.approx(1.98, rel=1e-12)


def test_sweep_flag_namespaces(capsys):
    # --t_loss belongs to the model section, --axis_points to [sweep],
    # and the model choice applies no matter where it sits in argv.
    code, out, _ = run_cli(
        capsys,
        "sweep",
        "--axis_points",
        "7",
        "--t_loss",
        "0.5",
        "--model",
        "toy_ham",
    )
    assert code == 0
    _, rows, footers = csv_lines(out)
    assert len(rows) == 7 and footers == []
    assert all(r[6] == "consistent" for r in rows)


def test_sweep_unknown_flag(capsys):
    code, _, err = run_cli(capsys, "sweep", "--omega_beta", "0.4")
    assert code == 2
    assert "unknown flags for a sweep over toy_decay: --omega_beta" in err
    code, out, _ = run_cli(
        capsys, "sweep", "--model", "donor_acceptor", "--omega_beta", "0.4",
        "--axis_start", "0.1", "--axis_stop", "0.3", "--axis_points", "3",
    )
    assert code == 0 and out.count("\n") >= 4


def test_grid_validation(capsys):
    code, _, err = run_cli(capsys, "sweep", "--axis_points", "1")
    assert code == 2 and "at least 2 points" in err
    code, _, err = run_cli(capsys, "sweep", "--axis_start", "2", "--axis_stop", "1")
    assert code == 2 and "stop > start" in err
    code, _, err = run_cli(capsys, "compare-power", "--ratio_points", "1")
    assert code == 2 and "at least 2 points" in err


def test_compare_power_csv(capsys):
    code, out, _ = run_cli(capsys, "compare-power")
    assert code == 0
    header, rows, footers = csv_lines(out)
    assert header == "ratio,p_dec,p_ham"
    assert len(rows) == 60 and footers == []
    assert all(float(r[1]) < 0.0 for r in rows)
    code, out, _ = run_cli(capsys, "compare-power", "--ratio_points", "7")
    assert code == 0 and len(csv_lines(out)[1]) == 7


def test_fmo_trace_quick(capsys):
    code, out, err = run_cli(
        capsys, "fmo-trace", "--t_max_ps", "0.2", "--n_times", "5"
    )
    assert code == 0 and err == ""
    header, rows, _ = csv_lines(out)
    assert header == "t_ps,j_abs,j_loss,sink_flow,sigma"
    assert len(rows) == 5
    times = [float(r[0]) for r in rows]
    assert times[0] == 0.0 and times[-1] == pytest.approx(0.2, rel=1e-12)
    for row in rows:
        assert all(math.isfinite(float(cell)) for cell in row)


def test_fmo_trace_numerics_exit(capsys):
    code, out, err = run_cli(capsys, "fmo-trace", "--t_sun", "1.0")
    assert code == 3 and out == ""
    assert err.startswith("numerical failure: ")


def test_nan_cells(capsys):
    # With the sink switched off the cycle stalls: zero currents make the
    # extraction ratio nan, which must print as a 'nan' cell and a JSON null.
    argv = ("toy-decay", "--gamma", "0", "--gamma_h", "1e-4", "--gamma_c", "1e-4")
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    _, rows, _ = csv_lines(out)
    assert rows[0][3] == "nan"
    code, out, _ = run_cli(capsys, *argv, "--format", "json")
    assert code == 0
    assert json.loads(out)["rows"][0][3] is None


def test_byte_determinism(capsys):
    for fmt in ("csv", "json"):
        _, first, _ = run_cli(capsys, "sweep", "--format", fmt)
        _, second, _ = run_cli(capsys, "sweep", "--format", fmt)
        assert first == second


def test_config_round_trip():
    sections = {name: cfg.default_section(name) for name in sorted(cfg.SCHEMAS)}
    assert sections["toy"]["gamma_h"] is None
    assert sections["fmo"]["gamma_ant_fmo"] is None
    text = cfg.emit_config(sections)
    reparsed = cfg.parse_config_text(text, where="round-trip")
    assert cfg.validate_sections(reparsed, where="round-trip") == sections
    # a second emit/parse cycle is a fixed point
    assert cfg.emit_config(cfg.validate_sections(reparsed)) == text


def test_config_round_trip_handcrafted():
    text = "\n".join(
        (
            "[toy]  # scheme parameters",
            "omega_abs = 1.5e0",
            "omega_rc = 0.3",
            "gamma = 2e-4",
            "gamma_h = auto",
            "gamma_c = 0.007",
            "t_abs = 2.0",
            "t_loss = 0.1",
        )
    )
    typed = cfg.validate_sections(cfg.parse_config_text(text))
    assert typed["toy"]["gamma_h"] is None
    assert typed["toy"]["omega_abs"] == 1.5
    again = cfg.validate_sections(cfg.parse_config_text(cfg.emit_config(typed)))
    assert again == typed


def test_console_script_subprocess():
    exe = shutil.which("solaraudit")
    assert exe is not None, "console script not installed"
    proc = subprocess.run(
        [exe, "toy-decay"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == REPORT_HEADER
    proc = subprocess.run(
        [exe, "toy-decay", "--omega_rc", "9"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 2
    assert proc.stderr.startswith("error: ")
