"""Report assembly for infoanatomy.

This module gathers the numbers each CLI command prints, separated from
presentation concerns. Library errors propagate unchanged; the CLI decides
exit codes.
"""

import logging
from collections.abc import Sequence

import numpy as np

from .block_analysis import (
    AnatomyDecomposition,
    AsymptoticFit,
    ExcessEntropyDecomposition,
    anatomy,
    asymptote_fit,
    block_curve,
    block_curves,
    ee_decompositions,
    window_residual_entropy,
)
from .constants import (
    DEFAULT_FILTERED_BLOCK,
    DEFAULT_MAX_BLOCK,
    DEFAULT_WINDOW,
    DERIVATIVE_TOLERANCE,
)
from .errors import InvalidArgumentError
from .machine_format import load_machine
from .pid import PastPIDReport, PresentPIDReport, anatomy_pid_past, anatomy_pid_present
from .process_model import (
    BUILTIN_PROCESSES,
    EpsilonMachine,
    builtin_machine,
    entropy_rate_exact,
    golden_mean_family,
)

logger = logging.getLogger(__name__)

SWEEP_FAMILIES = {"golden-mean": golden_mean_family}


class AnalysisReport:
    """Everything `analyze` prints for one machine."""

    def __init__(
        self,
        machine: EpsilonMachine,
        anatomy: AnatomyDecomposition,
        present_pid: PresentPIDReport,
        entropy_rate_fit: AsymptoticFit,
    ):
        self.machine = machine
        self.anatomy = anatomy
        self.present_pid = present_pid
        self.entropy_rate_fit = entropy_rate_fit
        self.converged = anatomy.converged and present_pid.consistent


class ExcessEntropyReport:
    """Everything `ee` prints for one machine."""

    def __init__(
        self,
        machine: EpsilonMachine,
        decomposition: ExcessEntropyDecomposition,
        anatomy: AnatomyDecomposition,
        past_pid: PastPIDReport,
    ):
        self.machine = machine
        self.decomposition = decomposition
        self.anatomy = anatomy
        self.past_pid = past_pid
        self.converged = decomposition.converged and anatomy.converged and past_pid.consistent


class SweepRow:
    """One parameter value of a family sweep."""

    def __init__(self, parameter: float, h_mu: float, r_mu: float):
        self.parameter = parameter
        self.h_mu = h_mu
        self.r_mu = r_mu
        self.b_mu = h_mu - r_mu
        self.residual = self.r_mu + self.b_mu - self.h_mu


def resolve_machine(machine_file: str | None, process: str | None) -> EpsilonMachine:
    """Load a machine from a file or a built-in process name (exactly one of them).

    Raises:
        InvalidArgumentError: both or neither given, or an unknown process.
        MachineFormatError: the file cannot be parsed.
    """
    if machine_file and process:
        raise InvalidArgumentError("Give either a machine file or --process, not both")
    if process:
        return builtin_machine(process)
    if machine_file:
        return load_machine(machine_file)
    raise InvalidArgumentError(
        f"Give a machine file or --process ({', '.join(BUILTIN_PROCESSES)})"
    )


def parse_param_grid(text: str) -> list[float]:
    """Parse `start:stop:step` into an inclusive list of parameter values.

    Args:
        text: Grid such as "0.05:0.95:0.05"

    Returns:
        Values start, start + step, ..., up to and including stop
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidArgumentError(f"Parameter grid '{text}' must look like start:stop:step")
    try:
        start, stop, step = (float(part) for part in parts)
    except ValueError:
        raise InvalidArgumentError(f"Parameter grid '{text}' contains a non-number")
    if step <= 0:
        raise InvalidArgumentError(f"Grid step must be positive, got {step}")
    if stop < start:
        raise InvalidArgumentError(f"Grid stop {stop} is below its start {start}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def analyze_machine(
    machine: EpsilonMachine,
    window: int = DEFAULT_WINDOW,
    max_block: int | None = None,
) -> AnalysisReport:
    """Anatomy of H[X₀] and the present-centric PID.

    Args:
        machine: Process to analyze
        window: Past and future window length for rμ and the PID
        max_block: Cap on the excess-entropy sum (default: automatic)

    Returns:
        AnalysisReport with a combined convergence flag
    """
    parts = anatomy(machine, window, max_block)
    present = anatomy_pid_present(machine, window)
    h_curve = block_curve(machine, "H", max(DEFAULT_MAX_BLOCK, 3), method="filtered")
    report = AnalysisReport(machine, parts, present, asymptote_fit(h_curve, DERIVATIVE_TOLERANCE))
    logger.debug("Analysis of %s converged: %s", machine.name, report.converged)
    return report


def curve_rows(
    machine: EpsilonMachine,
    measures: Sequence[str],
    max_length: int = DEFAULT_MAX_BLOCK,
    method: str = "words",
) -> tuple[list[str], list[list[float]]]:
    """Header and rows (ℓ, value per measure) for CSV output."""
    curves = block_curves(machine, measures, max_length, method)
    header = ["l", *measures]
    rows = [
        [length, *(curves[m].values[length] for m in measures)]
        for length in range(max_length + 1)
    ]
    return header, rows


def analyze_excess_entropy(
    machine: EpsilonMachine,
    max_length: int = DEFAULT_FILTERED_BLOCK,
    window: int = DEFAULT_WINDOW,
    method: str = "filtered",
) -> ExcessEntropyReport:
    """E decompositions, the anatomy split of E, and the past-centric PID."""
    decomposition = ee_decompositions(machine, max_length, method, window)
    return ExcessEntropyReport(
        machine,
        decomposition,
        anatomy(machine, window),
        anatomy_pid_past(machine, window),
    )


def sweep_family(
    family: str, grid: Sequence[float], window: int = DEFAULT_WINDOW
) -> list[SweepRow]:
    """hμ split into rμ and bμ across a one-parameter machine family."""
    try:
        factory = SWEEP_FAMILIES[family]
    except KeyError:
        raise InvalidArgumentError(
            f"Unknown family '{family}'. Expected one of: {', '.join(SWEEP_FAMILIES)}"
        )
    rows = []
    for parameter in grid:
        machine = factory(parameter)
        rows.append(
            SweepRow(parameter, entropy_rate_exact(machine), window_residual_entropy(machine, window))
        )
    return rows
