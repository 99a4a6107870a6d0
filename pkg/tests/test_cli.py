# this_file: tests/test_cli.py
"""Tests for the fraccalc command-line interface."""

import json
import sys

import numpy as np
import pytest
from fire.core import FireExit

from fraccalc import __version__
from fraccalc.cli import CLI, EXIT_DOMAIN_ERROR, EXIT_SPEC_ERROR, EXIT_VERIFY_FAILED, check_arguments, main
from fraccalc.corpus import Heaviside
from fraccalc.errors import SpecError
from fraccalc.funcspace import Grid, sample, sbv_to_json
from fraccalc.verify import CriterionResult


def _read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == f"# fraccalc {__version__}"
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return header, rows


def _result(number, passed):
    return CriterionResult(number, f"criterion-{number}", "power", "", 0.5, 1.0, passed, "")


@pytest.fixture
def cli():
    return CLI()


@pytest.mark.integration
class TestCompute:
    """Test suite for the compute command."""

    def test_csv_with_exact_columns(self, cli, tmp_path):
        """Test that a closed form adds exact and abs_error columns."""
        out = tmp_path / "int.csv"
        cli.compute(fn="power:1", op="rl-int", s=0.5, grid_n=32, output=str(out))
        header, rows = _read_csv(out)
        assert header == ["x", "value", "exact", "abs_error"]
        assert len(rows) == 33
        assert max(float(r[3]) for r in rows) < 1e-12

    def test_singular_node_is_left_out(self, cli, tmp_path):
        """Test that the singular node at a is not printed."""
        out = tmp_path / "der.csv"
        cli.compute(fn="constant:1", op="rl-der", s=0.5, grid_n=32, output=str(out))
        _, rows = _read_csv(out)
        assert len(rows) == 32
        assert float(rows[0][0]) == pytest.approx(1.0 / 32.0)

    def test_right_sided_has_no_exact_column(self, cli, tmp_path):
        """Test right-sided output without a closed form."""
        out = tmp_path / "right.csv"
        cli.compute(fn="power:2", op="rl-der-right", s=0.3, grid_n=16, output=str(out))
        header, _ = _read_csv(out)
        assert header == ["x", "value"]

    def test_caputo_exact_column(self, cli, tmp_path):
        """Test the Caputo closed form for an anchored function."""
        out = tmp_path / "caputo.csv"
        cli.compute(fn="power:1", op="caputo", s=0.5, grid_n=64, output=str(out))
        header, rows = _read_csv(out)
        assert header[-1] == "abs_error"
        assert max(float(r[3]) for r in rows) < 1e-10

    def test_caputo_exact_column_with_base_value(self, cli, tmp_path):
        """Test that the Caputo closed form stays finite at a when u(a) ≠ 0."""
        out = tmp_path / "caputo_base.csv"
        cli.compute(fn="poly:1,0,-0.5", op="caputo", s=0.5, grid_n=64, output=str(out))
        header, rows = _read_csv(out)
        assert header == ["x", "value", "exact", "abs_error"]
        assert float(rows[0][0]) == 0.0
        assert float(rows[0][2]) == 0.0
        assert all(np.isfinite(float(r[3])) for r in rows)
        assert max(float(r[3]) for r in rows) < 1e-2

    def test_marchaud_json(self, cli, tmp_path):
        """Test JSON output of the Marchaud derivative."""
        out = tmp_path / "marchaud.json"
        cli.compute(fn="power:1", op="marchaud", s=0.5, grid_n=64, output=str(out), format="json")
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert doc["operator"] == "marchaud"
        assert doc["columns"] == ["x", "value"]
        assert len(doc["rows"]) == 64

    def test_svg(self, cli, tmp_path):
        """Test SVG output."""
        out = tmp_path / "plot.svg"
        cli.compute(fn="heaviside:0.5", op="rl-int", s=0.5, grid_n=32, output=str(out), format="svg")
        svg = out.read_text(encoding="utf-8")
        assert 'viewBox="0 0 800 600"' in svg
        assert svg.count("<polyline") == 2

    def test_json_function_file(self, cli, tmp_path):
        """Test a function read from a JSON file."""
        source = tmp_path / "u.json"
        source.write_text(json.dumps(sbv_to_json(sample(Heaviside(0.25), Grid(0.0, 1.0, 16)))), encoding="utf-8")
        out = tmp_path / "out.csv"
        cli.compute(fn=str(source), op="rl-int", s=0.5, output=str(out))
        header, rows = _read_csv(out)
        assert header == ["x", "value"]
        assert len(rows) == 17

    def test_config_file(self, cli, tmp_path):
        """Test flags read from a configuration file."""
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"function-spec": "power:1", "s": 0.5, "grid-n": 16, "operator": "rl-int"}))
        out = tmp_path / "out.csv"
        cli.compute(config=str(config), output=str(out))
        _, rows = _read_csv(out)
        assert len(rows) == 17

    def test_stdout(self, cli, capsys):
        """Test that data goes to standard output."""
        cli.compute(fn="power:1", op="rl-int", s=0.5, grid_n=16)
        assert capsys.readouterr().out.startswith("# fraccalc ")


@pytest.mark.integration
class TestSweepAndReports:
    """Test suite for the sweep, ipp and report commands."""

    def test_s_to_zero(self, cli, tmp_path):
        """Test the s → 0 sweep."""
        out = tmp_path / "zero.csv"
        cli.sweep(fn="power:1", kind="s-to-zero", grid_n=64, output=str(out))
        header, rows = _read_csv(out)
        assert header == ["s", "functional", "target", "converged"]
        assert [float(r[0]) for r in rows] == [0.5, 0.1, 0.01, 0.001]
        assert rows[-1][3] == "true"

    def test_s_to_one_constant(self, cli, tmp_path):
        """Test the s → 1 sweep of a constant."""
        out = tmp_path / "one.csv"
        cli.sweep(fn="constant:1", kind="s-to-one", s="0.5,0.9", grid_n=64, output=str(out))
        header, rows = _read_csv(out)
        assert header == ["s", "functional", "target", "converged", "secondary", "secondary_target"]
        assert rows[0][2] == ""
        assert rows[0][5] == "1"

    def test_marchaud_eps(self, cli, tmp_path):
        """Test the ε → 0 sweep."""
        out = tmp_path / "eps.csv"
        cli.sweep(fn="power:1", kind="marchaud-eps", s=0.5, grid_n=64, output=str(out))
        header, rows = _read_csv(out)
        assert header[0] == "eps"
        assert len(rows) == 4

    def test_weak_star(self, cli, tmp_path):
        """Test the weak-* sweep."""
        out = tmp_path / "weak.csv"
        cli.sweep(fn="heaviside:0.5", kind="weak-star", grid_n=64, output=str(out))
        header, rows = _read_csv(out)
        assert header == ["test_function", "computed", "limit", "error", "s"]
        assert len(rows) == 4

    def test_ipp(self, cli, tmp_path):
        """Test the integration-by-parts command."""
        out = tmp_path / "ipp.csv"
        cli.ipp(fn="power:2", test_function="cos:1", s=0.5, grid_n=64, output=str(out))
        header, rows = _read_csv(out)
        assert header[-2:] == ["residual", "scale"]
        assert float(rows[0][-2]) / float(rows[0][-1]) < 1e-2

    def test_embedding_report(self, cli, tmp_path):
        """Test the embedding report."""
        out = tmp_path / "emb.csv"
        cli.report(kind="embedding", grid_n=32, output=str(out))
        header, rows = _read_csv(out)
        assert header[-1] == "ratio"
        assert len(rows) == 5

    def test_weierstrass_report(self, cli, tmp_path):
        """Test the Weierstrass report."""
        out = tmp_path / "w.csv"
        cli.report(kind="weierstrass", grid_n=64, output=str(out))
        _, rows = _read_csv(out)
        assert np.all(np.isfinite([float(r[1]) for r in rows]))

    def test_cantor_report(self, cli, tmp_path):
        """Test the Cantor-Vitali report."""
        out = tmp_path / "c.csv"
        cli.report(kind="cantor", fn="cantor:4", grid_n=162, output=str(out))
        header, rows = _read_csv(out)
        assert header[0] == "level"
        assert rows[0][0] == "4"

    def test_cantor_report_needs_cantor(self, cli):
        """Test that the Cantor report rejects other functions."""
        with pytest.raises(SpecError):
            cli.report(kind="cantor", fn="power:1", grid_n=32)

    def test_holder_report(self, cli, tmp_path):
        """Test the Hölder lift and drop rows for the staircase."""
        out = tmp_path / "h.csv"
        cli.report(kind="holder", fn="cantor:5", grid_n=243, output=str(out))
        header, rows = _read_csv(out)
        assert header == ["operator", "s", "holder_exponent", "target"]
        assert [r[0] for r in rows] == ["rl-int"] * 3 + ["rl-der"] * 2

    def test_holder_report_skips_orders_above_exponent(self, cli, tmp_path):
        """Test that a step gets no derivative rows."""
        out = tmp_path / "h.csv"
        cli.report(kind="holder", fn="heaviside:0.5", s="0.3,0.6", grid_n=64, output=str(out))
        _, rows = _read_csv(out)
        assert [r[0] for r in rows] == ["rl-int", "rl-int"]

    def test_log_reciprocal_report(self, cli, tmp_path):
        """Test one semi-norm row per order."""
        out = tmp_path / "l.csv"
        cli.report(kind="log-reciprocal", grid_n=64, output=str(out))
        header, rows = _read_csv(out)
        assert header == ["s", "seminorm_half_grid", "seminorm"]
        assert [float(r[0]) for r in rows] == [0.3, 0.6, 0.9]
        assert all(float(r[2]) > 0.0 for r in rows)


@pytest.mark.unit
class TestVerify:
    """Test suite for the verify command."""

    def test_all_pass(self, cli, tmp_path, mocker):
        """Test exit code 0 when every criterion passes."""
        out = tmp_path / "verify.csv"
        run = mocker.patch("fraccalc.cli.run_verification", return_value=[_result(1, True), _result(2, True)])
        cli.verify(grid_n=64, only="power", output=str(out))
        run.assert_called_once_with(64, ("power",))
        header, rows = _read_csv(out)
        assert header == ["number", "name", "family", "measured", "threshold", "passed"]
        assert [r[-1] for r in rows] == ["true", "true"]

    def test_failure_exits_one(self, cli, mocker):
        """Test exit code 1 when a criterion fails."""
        mocker.patch("fraccalc.cli.run_verification", return_value=[_result(1, True), _result(2, False)])
        with pytest.raises(SystemExit) as exc:
            cli.verify(grid_n=64)
        assert exc.value.code == EXIT_VERIFY_FAILED

    def test_unknown_selection(self, cli, mocker):
        """Test that an empty selection is an input error."""
        mocker.patch("fraccalc.cli.run_verification", return_value=[])
        with pytest.raises(SpecError, match="no criterion"):
            cli.verify(only="nothing")


@pytest.mark.unit
class TestCheckArguments:
    """Test suite for the argument check that runs before Fire."""

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["--help"],
            ["version"],
            ["compute", "--fn", "power:1", "--s=0.5", "--grid-n", "16"],
            ["compute", "power:1", "rl-int", "0.5"],
            ["compute", "--fn", "power:1", "--noverbose"],
            ["sweep", "--fn", "constant:1", "--kind", "s-to-zero", "--s", "-0.5"],
            ["compute", "--fn", "power:1", "--", "--help"],
        ],
    )
    def test_accepts(self, argv):
        """Test command lines that pass the argument check."""
        check_arguments(argv)

    def test_unknown_option(self):
        """Test that an unknown option is rejected."""
        with pytest.raises(SpecError, match="unknown option '--bogus'"):
            check_arguments(["compute", "--fn", "power:1", "--bogus"])

    def test_unknown_command(self):
        """Test that an unknown command is rejected."""
        with pytest.raises(SpecError, match="unknown command 'plot'"):
            check_arguments(["plot", "--fn", "power:1"])

    def test_surplus_positional(self):
        """Test that extra positional arguments are rejected."""
        with pytest.raises(SpecError, match="unexpected argument"):
            check_arguments(["version", "extra"])


@pytest.mark.unit
class TestMain:
    """Test suite for main and its exit codes."""

    def test_version(self, capsys):
        """Test the version command."""
        CLI().version()
        assert __version__ in capsys.readouterr().out

    def test_spec_error_exit_code(self, capsys, mocker):
        """Test exit code 2 for a bad function spec."""
        mocker.patch.object(sys, "argv", ["fraccalc", "compute", "--s", "0.5"])
        with pytest.raises(SystemExit) as exc:
            main()
        assert exc.value.code == EXIT_SPEC_ERROR
        err = capsys.readouterr().err
        assert err.startswith("error: ")
        assert err.count("\n") == 1

    def test_domain_error_exit_code(self, capsys, mocker):
        """Test exit code 3 for s outside (0, 1)."""
        mocker.patch.object(sys, "argv", ["fraccalc", "compute", "--fn", "power:1", "--s", "1.5", "--grid-n", "16"])
        with pytest.raises(SystemExit) as exc:
            main()
        assert exc.value.code == EXIT_DOMAIN_ERROR
        assert "fractional order" in capsys.readouterr().err

    def test_caputo_with_jump_is_a_domain_error(self, mocker):
        """Test exit code 3 for a Caputo derivative of a jump."""
        argv = ["fraccalc", "compute", "--fn", "heaviside:0.5", "--op", "caputo", "--s", "0.5", "--grid-n", "16"]
        mocker.patch.object(sys, "argv", argv)
        with pytest.raises(SystemExit) as exc:
            main()
        assert exc.value.code == EXIT_DOMAIN_ERROR

    def test_unwritable_output(self, capsys, mocker, tmp_path):
        """Test a single error line for an output path that cannot be written."""
        target = tmp_path / "missing" / "out.csv"
        argv = ["fraccalc", "compute", "--fn", "power:1", "--s", "0.5", "--grid-n", "16", "--output", str(target)]
        mocker.patch.object(sys, "argv", argv)
        with pytest.raises(SystemExit) as exc:
            main()
        assert exc.value.code == EXIT_SPEC_ERROR
        err = capsys.readouterr().err
        assert err.startswith(f"error: cannot write {target}")
        assert err.count("\n") == 1

    def test_unknown_option_computes_nothing(self, capsys, mocker):
        """Test that an unknown option fails before any computation."""
        compute = mocker.spy(CLI, "compute")
        mocker.patch.object(sys, "argv", ["fraccalc", "compute", "--fn", "power:1", "--s", "0.5", "--bogus"])
        with pytest.raises(SystemExit) as exc:
            main()
        assert exc.value.code == EXIT_SPEC_ERROR
        captured = capsys.readouterr()
        assert captured.out == ""
        assert captured.err == "error: unknown option '--bogus' for compute\n"
        compute.assert_not_called()

    def test_fire_usage_error_maps_to_spec_error(self, capsys, mocker):
        """Test that a Fire usage error becomes exit code 2."""
        mocker.patch.object(sys, "argv", ["fraccalc", "version"])
        mocker.patch("fraccalc.cli.fire.Fire", side_effect=FireExit(2, None))
        with pytest.raises(SystemExit) as exc:
            main()
        assert exc.value.code == EXIT_SPEC_ERROR
        assert capsys.readouterr().err.startswith("error: ")

    def test_successful_run(self, capsys, mocker):
        """Test exit code 0 for a valid command."""
        argv = ["fraccalc", "compute", "--fn", "power:1", "--op", "rl-int", "--s", "0.5", "--grid-n", "16"]
        mocker.patch.object(sys, "argv", argv)
        main()
        assert capsys.readouterr().out.splitlines()[1] == "x,value,exact,abs_error"
