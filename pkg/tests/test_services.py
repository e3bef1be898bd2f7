"""Tests for the services module."""

from unittest.mock import Mock, patch

import pytest

from infoanatomy.errors import InvalidArgumentError, MachineFormatError
from infoanatomy.services import (
    AnalysisReport,
    SweepRow,
    analyze_excess_entropy,
    analyze_machine,
    curve_rows,
    parse_param_grid,
    resolve_machine,
    sweep_family,
)


def test_sweep_row():
    """Test SweepRow derives bμ and the identity residual."""
    row = SweepRow(0.5, 0.75, 0.25)

    assert row.parameter == 0.5
    assert row.b_mu == 0.5
    assert row.residual == 0.0


def test_analysis_report_convergence_flag():
    """Test AnalysisReport combines the anatomy and PID flags."""
    parts = Mock(converged=True)
    pid = Mock(consistent=False)

    assert AnalysisReport(Mock(), parts, pid, Mock()).converged is False
    pid.consistent = True
    assert AnalysisReport(Mock(), parts, pid, Mock()).converged is True


@pytest.mark.parametrize(
    "text, expected",
    [
        ("0.1:0.5:0.1", [0.1, 0.2, 0.3, 0.4, 0.5]),
        ("0.05:0.95:0.45", [0.05, 0.5, 0.95]),
        ("0.3:0.3:0.1", [0.3]),
        ("0.1:0.35:0.1", [0.1, 0.2, 0.3]),
    ],
)
def test_parse_param_grid(text, expected):
    """Test grids are inclusive of stop and free of float drift."""
    assert parse_param_grid(text) == expected


def test_default_grid_has_nineteen_points():
    grid = parse_param_grid("0.05:0.95:0.05")

    assert len(grid) == 19
    assert grid[0] == 0.05
    assert grid[-1] == 0.95


@pytest.mark.parametrize(
    "text, message",
    [
        ("0.1:0.5", "start:stop:step"),
        ("a:0.5:0.1", "non-number"),
        ("0.1:0.5:0", "positive"),
        ("0.5:0.1:0.1", "below its start"),
    ],
)
def test_parse_param_grid_errors(text, message):
    with pytest.raises(InvalidArgumentError, match=message):
        parse_param_grid(text)


class TestResolveMachine:
    """Test choosing between a machine file and a built-in process."""

    def test_builtin(self):
        assert resolve_machine(None, "even").name == "even"

    def test_file(self, tmp_path):
        path = tmp_path / "gm.machine"
        path.write_text("alphabet 2\nstates A B\nedge A 1 1/2 A\nedge A 0 1/2 B\nedge B 1 1 A\n")

        machine = resolve_machine(str(path), None)

        assert machine.name == "gm"
        assert machine.states == ("A", "B")

    def test_both_or_neither(self):
        with pytest.raises(InvalidArgumentError, match="not both"):
            resolve_machine("x.machine", "even")
        with pytest.raises(InvalidArgumentError, match="--process"):
            resolve_machine(None, None)

    def test_bad_file(self, tmp_path):
        path = tmp_path / "bad.machine"
        path.write_text("alphabet 2\nstates A\nedge A 0 1 C\n")

        with pytest.raises(MachineFormatError, match="line 3"):
            resolve_machine(str(path), None)


def test_analyze_machine_golden_mean(golden_mean):
    """Test the analysis report for the golden mean process."""
    report = analyze_machine(golden_mean, window=4)

    assert report.machine is golden_mean
    assert report.anatomy.r_mu == pytest.approx(0.45915, abs=1e-5)
    assert report.present_pid.result.synergy == pytest.approx(0.20752, abs=1e-5)
    assert report.entropy_rate_fit.rate == pytest.approx(2 / 3)
    assert report.converged


@patch("infoanatomy.services.anatomy_pid_present")
@patch("infoanatomy.services.anatomy")
def test_analyze_machine_passes_options(mock_anatomy, mock_pid, coin):
    """Test window and block cap reach the library calls."""
    mock_anatomy.return_value = Mock(converged=True)
    mock_pid.return_value = Mock(consistent=True)

    report = analyze_machine(coin, window=7, max_block=30)

    mock_anatomy.assert_called_once_with(coin, 7, 30)
    mock_pid.assert_called_once_with(coin, 7)
    assert report.converged is True


def test_curve_rows(golden_mean):
    """Test rows start at ℓ = 0 and carry one column per measure."""
    header, rows = curve_rows(golden_mean, ["H", "T"], max_length=2)

    assert header == ["l", "H", "T"]
    assert [row[0] for row in rows] == [0, 1, 2]
    assert rows[2][1] == pytest.approx(1.584963, abs=1e-6)
    assert rows[1][2] == pytest.approx(0.0, abs=1e-12)


def test_analyze_excess_entropy_golden_mean(golden_mean):
    report = analyze_excess_entropy(golden_mean, max_length=10, window=4)

    assert report.decomposition.excess_entropy == pytest.approx(0.25163, abs=1e-5)
    assert report.past_pid.result.unique_source1 == pytest.approx(0.20752, abs=1e-5)
    assert report.anatomy.sigma_mu == pytest.approx(0.0, abs=1e-5)
    assert report.converged


class TestSweepFamily:
    """Test hμ = rμ + bμ across the golden mean family."""

    def test_rows(self):
        rows = sweep_family("golden-mean", [0.1, 0.5, 0.9], window=4)

        assert [row.parameter for row in rows] == [0.1, 0.5, 0.9]
        middle = rows[1]
        assert middle.h_mu == pytest.approx(0.666667, abs=1e-6)
        assert middle.b_mu == pytest.approx(0.207519, abs=1e-6)
        assert rows[0].b_mu > rows[0].r_mu
        assert rows[2].r_mu > rows[2].b_mu
        for row in rows:
            assert abs(row.residual) < 1e-12

    def test_unknown_family(self):
        with pytest.raises(InvalidArgumentError, match="Unknown family"):
            sweep_family("odd", [0.5])

    def test_parameter_outside_family(self):
        with pytest.raises(InvalidArgumentError):
            sweep_family("golden-mean", [1.0])
