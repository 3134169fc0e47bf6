import json
import math

import pytest

from epsteinzeta.cli import EXIT_OK, EXIT_USAGE, main
from epsteinzeta.specfun import riemann_zeta


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_eval_golden_value(capsys):
    code, out = run_cli(["eval", "--n", "10", "--s", "2.5"], capsys)
    assert code == EXIT_OK
    assert "0.205903040487" in out
    assert "±" in out


def test_eval_one_dimensional_zeta(capsys):
    code, out = run_cli(
        ["eval", "--n", "1", "--s", "2", "--scales", "1", "--format", "json"], capsys
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    expected = 2.0 * riemann_zeta(4.0).value
    assert payload["results"]["z"]["value"] == pytest.approx(expected, abs=1e-10)
    assert payload["results"]["z"]["err"] > 0.0
    xi_val = payload["results"]["xi"]["value"]
    assert xi_val == pytest.approx(expected * math.pi**-2 * math.gamma(2.0), abs=1e-10)


def test_interval_row(capsys):
    code, out = run_cli(["interval", "--n", "10", "--format", "csv"], capsys)
    assert code == EXIT_OK
    header, row = out.strip().split("\n")
    assert header == "n,gamma,mirror,bracket_width"
    cells = row.split(",")
    assert cells[0] == "10"
    assert float(cells[1]) == pytest.approx(1.0899, abs=5e-4)
    assert float(cells[2]) == pytest.approx(3.9101, abs=5e-4)


def test_interval_empty_for_small_n(capsys):
    code, out = run_cli(["interval", "--n", "5", "--format", "json"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["results"]["interval"] is None


def test_interval_sweep_columns(capsys):
    code, out = run_cli(["interval", "--n", "3", "--sweep", "8", "--format", "csv"], capsys)
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == "s,value,err"
    assert len(lines) == 9


def test_table1_rows(capsys):
    code, out = run_cli(["table1", "--tol", "1e-8", "--format", "csv"], capsys)
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == "n,gamma,mirror,bracket_width"
    assert len(lines) == 13
    first = lines[1].split(",")
    assert first[0] == "10"
    assert float(first[1]) == pytest.approx(1.0899, abs=5e-4)
    assert float(first[2]) == pytest.approx(3.9101, abs=5e-4)


def test_second_deriv_json(capsys):
    code, out = run_cli(["second-deriv", "--n", "11", "--format", "json"], capsys)
    assert code == EXIT_OK
    payload = json.loads(out)
    block = payload["results"]["second_derivative"]
    assert block["classification"] == "local_min"
    assert block["unhatted"]["value"] == pytest.approx(0.009568954836, abs=1e-6)


def test_bounds_reports(capsys):
    code, out = run_cli(["bounds", "--format", "json"], capsys)
    assert code == EXIT_OK
    payload = json.loads(out)
    rows = {r["quantity"]: r for r in payload["results"]["bounds"]}
    assert rows["kernel_sum_9"]["holds"] is True
    assert all(r["holds"] for r in payload["results"]["bounds"])


def test_scan_and_rerun_byte_identical(tmp_path, capsys):
    args = [
        "scan", "--n", "3", "--s", "0.7", "--chart", "kratio",
        "--bounds=-1:1", "--grid", "7", "--format", "json",
    ]
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert main(args + ["--out", str(first)]) == EXIT_OK
    assert main(args + ["--out", str(second)]) == EXIT_OK
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()
    payload = json.loads(first.read_text())
    assert payload["errors"] == []
    scan_block = payload["results"]["scan"]
    assert len(scan_block["values"]) == len(scan_block["errs"]) == 49


def test_scan_csv_has_error_column(capsys):
    code, out = run_cli(
        ["scan", "--n", "2", "--s", "0.5", "--chart", "kratio", "--axes", "1",
         "--bounds=-1:1", "--grid", "5", "--format", "csv"],
        capsys,
    )
    assert code == EXIT_OK
    header = out.strip().split("\n")[0]
    assert header.split(",") == ["b1", "sign", "value", "err"]


def test_verify_min_command(capsys):
    code, out = run_cli(
        ["verify-min", "--n", "3", "--s", "0.9", "--samples", "10", "--seed", "4",
         "--format", "json"],
        capsys,
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["results"]["verify_min"]["holds"] is True


def test_convexity_command(capsys):
    code, out = run_cli(
        ["convexity", "--n", "3", "--s", "0.9", "--samples", "5", "--seed", "2"], capsys
    )
    assert code == EXIT_OK
    assert "FAIL" not in out


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["eval", "--n", "10"])  # missing --s
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["eval", "--n", "10", "--s", "2.5", "--bogus", "1"])
    assert info.value.code == EXIT_USAGE


def test_eval_error_exit_code(capsys):
    code = main(["eval", "--n", "4", "--s", "2"])  # pole at n/2
    capsys.readouterr()
    assert code == 1
