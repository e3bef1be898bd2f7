"""Tests for the CLI presentation logic."""

from unittest.mock import Mock, patch

import pytest
from click.testing import CliRunner

from infoanatomy import __version__
from infoanatomy.cli import cli, parse_measures
from infoanatomy.errors import ResourceLimitError

GOLDEN_MEAN_TEXT = "alphabet 2\nstates A B\nedge A 1 1/2 A\nedge A 0 1/2 B\nedge B 1 1 A\n"


@pytest.fixture
def runner():
    """Create a Click test runner."""
    return CliRunner()


def test_parse_measures():
    """Test measure lists are split and validated."""
    assert parse_measures("H, T,I") == ["H", "T", "I"]
    with pytest.raises(ValueError, match="Unknown measure"):
        parse_measures("H,Z")
    with pytest.raises(ValueError, match="No measures"):
        parse_measures(" , ")


def test_analyze_even(runner):
    """Test the anatomy table for the Even process."""
    result = runner.invoke(cli, ["analyze", "--process", "even"])

    assert result.exit_code == 0
    assert "Anatomy of even (window 80)" in result.output
    assert "q_mu                  -0.41504" in result.output
    assert "sigma_mu              0.66667" in result.output
    assert "synergy               0.66667" in result.output
    assert "-0.00000" not in result.output


def test_analyze_coin(runner):
    """Test a memoryless process puts all of h_mu into r_mu."""
    result = runner.invoke(cli, ["analyze", "--process", "coin", "--window", "3"])

    assert result.exit_code == 0
    assert "r_mu                  1.00000" in result.output
    assert "b_mu                  0.00000" in result.output


def test_analyze_machine_file(runner, tmp_path):
    """Test a machine file is named after its stem."""
    path = tmp_path / "golden.machine"
    path.write_text(GOLDEN_MEAN_TEXT)

    result = runner.invoke(cli, ["analyze", str(path), "--window", "4", "--precision", "3"])

    assert result.exit_code == 0
    assert "Anatomy of golden (window 4)" in result.output
    assert "r_mu                  0.459" in result.output


def test_parse_error_exits_with_one(runner, tmp_path):
    """Test malformed machine files report the offending line."""
    path = tmp_path / "broken.machine"
    path.write_text("alphabet 2\nstates A\nedge A 0 1 Z\n")

    result = runner.invoke(cli, ["analyze", str(path)])

    assert result.exit_code == 1
    assert "Error: line 3:" in result.output


@pytest.mark.parametrize(
    "args, message",
    [
        (["analyze"], "Please specify a MACHINE_FILE or --process"),
        (["analyze", "x.machine", "--process", "even"], "not both"),
        (["sample", "--length", "5"], "Please specify a MACHINE_FILE or --process"),
    ],
)
def test_machine_source_validation(runner, args, message):
    """Test exactly one machine source is required."""
    result = runner.invoke(cli, args)

    assert result.exit_code == 1
    assert message in result.output


@patch("infoanatomy.cli.analyze_machine")
def test_resource_limit_exits_with_two(mock_analyze, runner):
    """Test budget overruns map to exit code 2."""
    mock_analyze.side_effect = ResourceLimitError("Word support exceeds 4194304 rows")

    result = runner.invoke(cli, ["analyze", "--process", "even"])

    assert result.exit_code == 2
    assert "Error: Word support exceeds" in result.output


@patch("infoanatomy.cli._display_analysis")
@patch("infoanatomy.cli.analyze_machine")
def test_unconverged_analysis_exits_with_two(mock_analyze, mock_display, runner):
    """Test results are still printed when a convergence check fails."""
    mock_analyze.return_value = Mock(converged=False)

    result = runner.invoke(cli, ["analyze", "--process", "even", "--window", "5"])

    assert result.exit_code == 2
    assert "Warning: analysis did not converge" in result.output
    mock_display.assert_called_once()
    assert mock_analyze.call_args.args[1:] == (5, None)


@patch("infoanatomy.cli.analyze_machine")
def test_unexpected_error(mock_analyze, runner):
    mock_analyze.side_effect = KeyError("boom")

    result = runner.invoke(cli, ["analyze", "--process", "even"])

    assert result.exit_code == 1
    assert "Unexpected error:" in result.output


class TestCurves:
    """Test the curves command."""

    def test_golden_mean_entropy(self, runner):
        result = runner.invoke(
            cli, ["curves", "--process", "golden-mean", "--measures", "H", "--max-block", "2"]
        )

        assert result.exit_code == 0
        assert result.stdout.splitlines() == ["l,H", "0,0.000000", "1,0.918296", "2,1.584963"]

    def test_filtered_method(self, runner):
        result = runner.invoke(
            cli,
            ["curves", "--process", "even", "--measures", "H,R", "--max-block", "3",
             "--method", "filtered", "--precision", "3"],
        )

        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "l,H,R"
        assert len(lines) == 5
        assert lines[1] == "0,0.000,0.000"

    def test_unknown_measure(self, runner):
        result = runner.invoke(cli, ["curves", "--process", "even", "--measures", "H,X"])

        assert result.exit_code == 1
        assert "Unknown measure(s): X" in result.output

    def test_even_coinformation_dies_out(self, runner):
        result = runner.invoke(
            cli, ["curves", "--process", "even", "--measures", "I", "--max-block", "12"]
        )

        assert result.exit_code == 0
        rows = [line.split(",") for line in result.stdout.splitlines()[1:]]
        assert [int(row[0]) for row in rows] == list(range(13))
        for row in rows[-2:]:
            assert abs(float(row[1])) < 1e-2

    def test_coinformation_budget(self, runner):
        result = runner.invoke(
            cli, ["curves", "--process", "coin", "--measures", "I", "--max-block", "25"]
        )

        assert result.exit_code == 2
        assert "Error:" in result.output


def test_ee_golden_mean(runner):
    """Test the excess-entropy report for the golden mean process."""
    result = runner.invoke(
        cli, ["ee", "--process", "golden-mean", "--max-block", "10", "--window", "4"]
    )

    assert result.exit_code == 0
    assert "E                     0.25163" in result.output
    assert "E_R" in result.output
    assert "unique (X0)           0.20752" in result.output


class TestSweep:
    """Test the sweep command."""

    def test_rows(self, runner):
        result = runner.invoke(cli, ["sweep", "--param-grid", "0.5:0.5:0.1", "--window", "4"])

        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "p,h_mu,r_mu,b_mu,residual"
        assert lines[1] == "0.500000,0.666667,0.459148,0.207519,0.000000"

    def test_bad_grid(self, runner):
        result = runner.invoke(cli, ["sweep", "--param-grid", "0.1:0.5"])

        assert result.exit_code == 1
        assert "start:stop:step" in result.output

    def test_grid_outside_family(self, runner):
        result = runner.invoke(cli, ["sweep", "--param-grid", "0.5:1.0:0.5", "--window", "2"])

        assert result.exit_code == 1
        assert "Self-loop probability" in result.output


class TestSample:
    """Test the sample command."""

    def test_deterministic_lines(self, runner):
        args = ["sample", "--process", "golden-mean", "--length", "200", "--seed", "4"]

        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)

        assert first.exit_code == 0
        assert first.stdout == second.stdout
        lines = first.stdout.splitlines()
        assert [len(line) for line in lines] == [80, 80, 40]
        assert set("".join(lines)) <= {"0", "1"}
        assert "00" not in "".join(lines)

    def test_length_must_be_positive(self, runner):
        result = runner.invoke(cli, ["sample", "--process", "coin", "--length", "0"])

        assert result.exit_code == 2


def test_version(runner):
    """Test the version comes from the package, installed or not."""
    result = runner.invoke(cli, ["--version"])

    assert result.exit_code == 0
    assert f"infoanatomy, version {__version__}" in result.output
