import csv
import io
from pathlib import Path

import pytest

from erqt import ConfigError
from erqt.cli import main
from erqt.config import (
    CSV_HEADER,
    ResultRow,
    dump_config,
    emit_csv,
    parse_config,
    run_scenario,
)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

MINIMAL = """
scenario: minimal
system: {preset: single-level}
reservoirs:
  left:
    modes:
      - {omega: 0.0, gamma: 0.2, coupling: [[0.1, 0.0]]}
  right:
    proportional: {lambda: 1.0}
bias: {mu_L: 0.5, mu_R: -0.5}
run:
  methods: [pc_analytic, pc_integral, lyapunov]
"""

ASYMMETRIC_ZERO_BIAS = """
scenario: zero-bias
system: {hamiltonian: [[[0.05, 0.0]]]}
reservoirs:
  left:
    modes: [{omega: -0.3, gamma: 0.4, coupling: [[0.2, 0.0]]}]
  right:
    modes: [{omega: 0.25, gamma: 0.1, coupling: [[0.1, 0.0]]}]
bias: {mu_L: 0.2, mu_R: 0.2, T_L: 0.1, T_R: 0.1}
run:
  methods: [general, lyapunov]
"""


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_minimal_config_fills_defaults():
    cfg = parse_config(MINIMAL)
    dumped = dump_config(cfg)
    for key in ("T_L: 0.0", "kind: markovian", "abs_tol: 1.0e-10", "format: csv", "window_padding_factor"):
        assert key in dumped
    assert cfg.n_system == 1


@pytest.mark.parametrize("name", ["benchmark", "kramers_sweep", "landauer_convergence"])
def test_normalization_is_idempotent(name):
    cfg = parse_config((CONFIGS / f"{name}.yaml").read_text())
    again = parse_config(dump_config(cfg))
    assert again == cfg
    assert dump_config(again) == dump_config(cfg)


def test_zero_gamma_names_mode_index():
    bad = MINIMAL.replace("gamma: 0.2", "gamma: 0")
    with pytest.raises(ConfigError, match=r"modes\[0\]\.gamma.*mode 0"):
        parse_config(bad)


def test_markovian_only_method_rejected_for_nonmarkovian():
    text = MINIMAL + "relaxation: {kind: nonmarkovian}\n"
    with pytest.raises(ConfigError, match="pc_analytic.*nonmarkovian"):
        parse_config(text)


@pytest.mark.parametrize(
    ("patch", "where"),
    [
        (("mu_R: -0.5}", "mu_R: -0.5, beta: 1}"), "bias"),
        (("[pc_analytic,", "[magic,"), r"run\.methods\[0\]"),
        (("[[0.1, 0.0]]", "[[0.1, 0.0], [0.2, 0.0]]"), "coupling"),
        (("{lambda: 1.0}", "{lambda: -1.0}"), "lambda"),
        (("{preset: single-level}", "{hamiltonian: [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}"), "Hermitian"),
    ],
)
def test_validation_errors_name_the_field(patch, where):
    with pytest.raises(ConfigError, match=where):
        parse_config(MINIMAL.replace(*patch))


def test_parse_error_reports_line():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("scenario: x\nsystem: [1, 2\nbias: 3\n")


def test_two_mechanisms_on_one_side_rejected():
    text = MINIMAL.replace("proportional: {lambda: 1.0}", "proportional: {lambda: 1.0}\n    modes: []")
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config(text)


def test_benchmark_rows_agree():
    rows = run_scenario(parse_config(MINIMAL))
    assert [r.method for r in rows] == ["pc_analytic", "pc_integral", "lyapunov"]
    for r in rows:
        assert r.current == pytest.approx(0.05, rel=1e-6)
        assert not r.diagnostics and r.param_name == "" and r.param_value is None


def test_zero_bias_anomaly_flag():
    rows = run_scenario(parse_config(ASYMMETRIC_ZERO_BIAS))
    assert all("zero_bias_anomaly" in r.diagnostics for r in rows)
    assert not any(r.is_error for r in rows)


def test_sweep_rows_in_declared_order():
    text = MINIMAL + "  sweep: {parameter: gamma_scale, values: [3.0, 0.1, 1.0]}\n"
    rows = run_scenario(parse_config(text))
    assert len(rows) == 9
    assert [r.param_value for r in rows] == [3.0] * 3 + [0.1] * 3 + [1.0] * 3
    assert [r.method for r in rows[:3]] == ["pc_analytic", "pc_integral", "lyapunov"]
    threaded = run_scenario(parse_config(text), threads=3)
    assert [r.current for r in threaded] == [r.current for r in rows]


def test_bias_delta_sweep_is_symmetric_about_center():
    text = MINIMAL + "  sweep: {parameter: bias_delta, values: [0.0, 1.0]}\n"
    rows = run_scenario(parse_config(text))
    assert rows[0].current == 0.0
    assert rows[3].current == pytest.approx(0.05, rel=1e-13)


def test_n_modes_sweep_requires_band():
    with pytest.raises(ConfigError, match="band"):
        parse_config(MINIMAL + "  sweep: {parameter: n_modes, values: [4]}\n")


def test_row_errors_do_not_abort():
    text = ASYMMETRIC_ZERO_BIAS.replace("[general, lyapunov]", "[pc_analytic, general]")
    rows = run_scenario(parse_config(text))
    assert rows[0].diagnostics == ("not_proportional",) and rows[0].is_error
    assert rows[1].current == rows[1].current  # not NaN


def test_emit_csv_empty_is_header_only(tmp_path):
    path = tmp_path / "out.csv"
    emit_csv([], path)
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"


def test_emit_csv_round_trips_bit_identically(tmp_path):
    values = [0.1 + 0.2, 1 / 3, 5e-324, -2.5e300, 0.05]
    rows = [ResultRow("s", "gamma_scale", v, "general", v, 1e-11, 10, 0.001, ("a", "b")) for v in values]
    path = tmp_path / "out.csv"
    emit_csv(rows, path)
    text = path.read_text()
    assert text.endswith("\n")
    parsed = _read_csv(path)
    assert parsed[0] == CSV_HEADER
    assert [float(r[4]) for r in parsed[1:]] == values
    assert parsed[1][8] == "a;b"


def test_emit_csv_reports_path(tmp_path):
    from erqt import ErqtError

    with pytest.raises(ErqtError, match="nope"):
        emit_csv([], tmp_path / "nope" / "out.csv")


def test_cli_run_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cfg = str(CONFIGS / "benchmark.yaml")
    assert main(["run", cfg, "--output", str(a)]) == 0
    assert main(["run", cfg, "--output", str(b), "--threads", "2"]) == 0

    def strip_time(p):
        return [r[:7] + r[8:] for r in _read_csv(p)]

    assert strip_time(a) == strip_time(b)
    assert len(strip_time(a)) == 6


def test_cli_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.yaml"
    good.write_text(MINIMAL)
    assert main(["validate", str(good)]) == 0
    assert "scenario: minimal" in capsys.readouterr().out

    bad = tmp_path / "bad.yaml"
    bad.write_text(MINIMAL.replace("gamma: 0.2", "gamma: -1"))
    assert main(["validate", str(bad)]) == 2
    assert "modes[0].gamma" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.yaml")]) == 2
    assert main(["frobnicate"]) == 2

    failing = tmp_path / "failing.yaml"
    failing.write_text(ASYMMETRIC_ZERO_BIAS.replace("[general, lyapunov]", "[pc_analytic]"))
    assert main(["run", str(failing), "-o", str(tmp_path / "f.csv")]) == 1


def test_cli_stdout_and_dump(tmp_path, capsys):
    good = tmp_path / "good.yaml"
    good.write_text(MINIMAL)
    assert main(["run", str(good), "--dump-normalized-config"]) == 0
    out = capsys.readouterr()
    rows = list(csv.reader(io.StringIO(out.out)))
    assert rows[0] == CSV_HEADER and len(rows) == 4
    assert parse_config(out.err) == parse_config(MINIMAL)
