"""Command-line interface for infoanatomy."""

import csv
import io
import logging
import sys

import click

from . import __version__
from .block_analysis import CURVE_MEASURES, CURVE_METHODS
from .constants import (
    CSV_DECIMALS,
    DEFAULT_FILTERED_BLOCK,
    DEFAULT_MAX_BLOCK,
    DEFAULT_SEED,
    DEFAULT_WINDOW,
    REPORT_DECIMALS,
    SAMPLE_LINE_WIDTH,
)
from .errors import ResourceLimitError
from .process_model import BUILTIN_PROCESSES, sample_sequence
from .services import (
    SWEEP_FAMILIES,
    analyze_excess_entropy,
    analyze_machine,
    curve_rows,
    parse_param_grid,
    resolve_machine,
    sweep_family,
)

SYMBOL_CHARACTERS = "0123456789abcdefghijklmnopqrstuvwxyz"


def parse_measures(measures_input):
    """Parse a comma-separated list of curve measures such as 'H,T,I'."""
    measures = [m.strip() for m in measures_input.split(",") if m.strip()]
    if not measures:
        raise ValueError("No measures given. Expected a comma-separated subset of H,T,B,R,W,Q,I")
    unknown = [m for m in measures if m not in CURVE_MEASURES]
    if unknown:
        raise ValueError(
            f"Unknown measure(s): {', '.join(unknown)}. Expected a subset of {','.join(CURVE_MEASURES)}"
        )
    return measures


# Shared options for choosing the machine and the output
def machine_options(f):
    """Decorator to add machine selection, precision and verbosity options."""
    f = click.argument("machine_file", required=False, type=click.Path(dir_okay=False))(f)
    f = click.option(
        "--process",
        type=click.Choice(list(BUILTIN_PROCESSES)),
        help="Use a built-in process instead of a machine file",
    )(f)
    f = click.option(
        "--precision", type=int, help="Decimal places in the output (default: 5, CSV: 6)"
    )(f)
    f = click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr")(f)
    return f


def validate_machine_options(machine_file, process):
    """Validate that exactly one machine source was given."""
    if machine_file and process:
        click.echo("Error: Please specify either MACHINE_FILE or --process, not both", err=True)
        sys.exit(1)
    if not machine_file and not process:
        click.echo("Error: Please specify a MACHINE_FILE or --process", err=True)
        sys.exit(1)


def configure_logging(verbose):
    """Send library log records to stderr; DEBUG with --verbose, else WARNING."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


@click.group()
@click.version_option(version=__version__, prog_name="infoanatomy")
def cli():
    """infoanatomy - Information anatomy of single observations in stationary processes."""


@cli.command()
@machine_options
@click.option(
    "--window", type=int, default=DEFAULT_WINDOW, show_default=True,
    help="Past and future window length for r_mu and the PID",
)
@click.option("--max-block", type=int, help="Cap on the excess-entropy sum (default: automatic)")
def analyze(machine_file, process, precision, verbose, window, max_block):
    """Print the anatomy of H[X0] and the present-centric PID."""
    try:
        configure_logging(verbose)
        validate_machine_options(machine_file, process)
        machine = resolve_machine(machine_file, process)
        report = analyze_machine(machine, window, max_block)
        _display_analysis(report, REPORT_DECIMALS if precision is None else precision)
        if not report.converged:
            click.echo("Warning: analysis did not converge within its budgets", err=True)
            sys.exit(2)

    except ResourceLimitError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)
    except Exception as e:
        click.echo(f"Unexpected error: {e}", err=True)
        sys.exit(1)


@cli.command()
@machine_options
@click.option(
    "--measures", default="H,T", show_default=True, help="Comma-separated subset of H,T,B,R,W,Q,I"
)
@click.option("--max-block", type=int, default=DEFAULT_MAX_BLOCK, show_default=True)
@click.option(
    "--method", type=click.Choice(CURVE_METHODS), default="words", show_default=True,
    help="Evaluate on word distributions or through window classes",
)
def curves(machine_file, process, precision, verbose, measures, max_block, method):
    """Write block curves as CSV (one row per block length)."""
    try:
        configure_logging(verbose)
        validate_machine_options(machine_file, process)
        measure_list = parse_measures(measures)
        machine = resolve_machine(machine_file, process)
        header, rows = curve_rows(machine, measure_list, max_block, method)
        _write_csv(header, rows, CSV_DECIMALS if precision is None else precision)

    except ResourceLimitError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)
    except Exception as e:
        click.echo(f"Unexpected error: {e}", err=True)
        sys.exit(1)


@cli.command()
@machine_options
@click.option(
    "--max-block", type=int, default=DEFAULT_FILTERED_BLOCK, show_default=True,
    help="Block length for the subextensive fits",
)
@click.option("--window", type=int, default=DEFAULT_WINDOW, show_default=True)
@click.option(
    "--method", type=click.Choice(CURVE_METHODS), default="filtered", show_default=True
)
def ee(machine_file, process, precision, verbose, max_block, window, method):
    """Print the decompositions of the excess entropy E."""
    try:
        configure_logging(verbose)
        validate_machine_options(machine_file, process)
        machine = resolve_machine(machine_file, process)
        report = analyze_excess_entropy(machine, max_block, window, method)
        _display_excess_entropy(report, REPORT_DECIMALS if precision is None else precision)
        if not report.converged:
            click.echo("Warning: a decomposition did not converge within its budgets", err=True)
            sys.exit(2)

    except ResourceLimitError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)
    except Exception as e:
        click.echo(f"Unexpected error: {e}", err=True)
        sys.exit(1)


@cli.command()
@click.option(
    "--family", type=click.Choice(list(SWEEP_FAMILIES)), default="golden-mean", show_default=True
)
@click.option(
    "--param-grid", default="0.05:0.95:0.05", show_default=True, help="Grid as start:stop:step"
)
@click.option("--window", type=int, default=DEFAULT_WINDOW, show_default=True)
@click.option("--precision", type=int, help="Decimal places in the output (default: 6)")
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr")
def sweep(family, param_grid, window, precision, verbose):
    """Write hmu, r_mu and b_mu across a machine family as CSV."""
    try:
        configure_logging(verbose)
        grid = parse_param_grid(param_grid)
        rows = sweep_family(family, grid, window)
        _write_csv(
            ["p", "h_mu", "r_mu", "b_mu", "residual"],
            [[row.parameter, row.h_mu, row.r_mu, row.b_mu, row.residual] for row in rows],
            CSV_DECIMALS if precision is None else precision,
        )

    except ResourceLimitError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)
    except Exception as e:
        click.echo(f"Unexpected error: {e}", err=True)
        sys.exit(1)


@cli.command()
@machine_options
@click.option("--length", type=click.IntRange(min=1), required=True, help="Number of symbols")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
def sample(machine_file, process, precision, verbose, length, seed):
    """Write a sampled symbol sequence, 80 symbols per line."""
    try:
        configure_logging(verbose)
        validate_machine_options(machine_file, process)
        machine = resolve_machine(machine_file, process)
        if machine.alphabet_size > len(SYMBOL_CHARACTERS):
            raise ValueError(
                f"Cannot print an alphabet of {machine.alphabet_size} symbols one character each"
            )
        symbols = "".join(SYMBOL_CHARACTERS[s] for s in sample_sequence(machine, length, seed))
        for start in range(0, len(symbols), SAMPLE_LINE_WIDTH):
            click.echo(symbols[start : start + SAMPLE_LINE_WIDTH])

    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)
    except Exception as e:
        click.echo(f"Unexpected error: {e}", err=True)
        sys.exit(1)


def _fmt(value, precision):
    """Fixed-point text without a '-0.000' for values that round to zero."""
    return f"{round(float(value), precision) + 0.0:.{precision}f}"


def _display_rows(rows, precision):
    for label, value in rows:
        click.echo(f"  {label:<22}{_fmt(value, precision)}")


def _display_analysis(report, precision):
    parts = report.anatomy
    pid = report.present_pid
    click.echo(f"Anatomy of {report.machine.name} (window {parts.window})")
    _display_rows(
        [
            ("H[1]", parts.h_1),
            ("h_mu", parts.h_mu),
            ("rho_mu", parts.rho_mu),
            ("r_mu", parts.r_mu),
            ("b_mu", parts.b_mu),
            ("q_mu", parts.q_mu),
            ("w_mu", parts.w_mu),
            ("sigma_mu", parts.sigma_mu),
            ("E", parts.excess_entropy),
            ("I_1", parts.i_1),
            ("R_1", parts.r_1),
            ("R_inf", parts.r_inf),
        ],
        precision,
    )
    click.echo("Partial information of w_mu = I[X0; past, future]")
    _display_rows(
        [
            ("redundancy", pid.result.redundancy),
            ("uniquity (past)", pid.result.unique_source1),
            ("uniquity (future)", pid.result.unique_source2),
            ("synergy", pid.result.synergy),
        ],
        precision,
    )
    click.echo("Diagnostics")
    diagnostics = parts.diagnostics
    click.echo(
        f"  r_mu at window {parts.window - 1}: "
        f"{_fmt(diagnostics['r_mu_previous_window'], precision)} "
        f"({'converged' if diagnostics['window_converged'] else 'NOT converged'})"
    )
    click.echo(
        f"  E summed to L={diagnostics['excess_entropy_length']} "
        f"({'converged' if diagnostics['excess_entropy_converged'] else 'NOT converged'}, "
        f"term-by-term match: {'yes' if diagnostics['excess_entropy_termwise_match'] else 'no'})"
    )
    fit = report.entropy_rate_fit
    click.echo(f"  h_mu from H-curve fit: {_fmt(fit.rate, precision)}")
    for label, gap in pid.checks.items():
        click.echo(f"  {label}: {_fmt(gap, precision)}")


def _display_excess_entropy(report, precision):
    decomposition = report.decomposition
    parts = report.anatomy
    pid = report.past_pid.result
    click.echo(f"Excess entropy of {report.machine.name}")
    _display_rows(
        [
            ("E", decomposition.excess_entropy),
            ("b_mu", parts.b_mu),
            ("q_mu", parts.q_mu),
            ("sigma_mu", parts.sigma_mu),
            ("b_mu + q_mu + sigma_mu", decomposition.anatomy_sum),
        ],
        precision,
    )
    click.echo(f"Subextensive parts (L={decomposition.max_length})")
    for measure, fit in decomposition.fits.items():
        status = "converged" if fit.converged else "NOT converged"
        click.echo(
            f"  E_{measure:<20}{_fmt(fit.subextensive, precision)}  "
            f"(residual {fit.residual:.2e}, {status})"
        )
    click.echo("Decompositions of E")
    residuals = decomposition.residuals
    for label, value in decomposition.sums.items():
        click.echo(
            f"  {label:<22}{_fmt(value, precision)}  (residual {residuals[label]:+.2e})"
        )
    click.echo("Partial information of I[past; X0, future]")
    _display_rows(
        [
            ("redundancy", pid.redundancy),
            ("unique (X0)", pid.unique_source1),
            ("unique (future)", pid.unique_source2),
            ("synergy", pid.synergy),
            ("total", pid.total),
        ],
        precision,
    )


def _write_csv(header, rows, precision):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [row[0] if isinstance(row[0], int) else _fmt(row[0], precision)]
            + [_fmt(value, precision) for value in row[1:]]
        )
    click.echo(buffer.getvalue(), nl=False)


def main():
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
