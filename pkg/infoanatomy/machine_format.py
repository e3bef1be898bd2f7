"""Plain-text machine descriptions.

    # Even process
    alphabet 2
    states A B
    edge A 0 1/2 A
    edge A 1 1/2 B
    edge B 1 1 A

`#` starts a comment. Probabilities are decimals or fractions `a/b`.
"""

import logging
from fractions import Fraction
from pathlib import Path

from .errors import MachineFormatError, ModelError
from .process_model import EpsilonMachine

logger = logging.getLogger(__name__)


def parse_machine(text: str, name: str = "machine") -> EpsilonMachine:
    """Parse a machine description.

    Raises:
        MachineFormatError: malformed line, unknown state, or a repeated
            (from, symbol) pair; carries the offending line number.
    """
    alphabet_size = None
    states: tuple[str, ...] | None = None
    transitions = {}
    edge_lines = {}

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *args = line.split()

        if keyword == "alphabet":
            if alphabet_size is not None:
                raise MachineFormatError("alphabet declared twice", line_number)
            if len(args) != 1:
                raise MachineFormatError("expected 'alphabet <k>'", line_number)
            alphabet_size = _parse_int(args[0], "alphabet size", line_number)
            if alphabet_size < 1:
                raise MachineFormatError("alphabet size must be positive", line_number)
        elif keyword == "states":
            if states is not None:
                raise MachineFormatError("states declared twice", line_number)
            if not args:
                raise MachineFormatError("expected 'states <name> [<name> ...]'", line_number)
            if len(set(args)) != len(args):
                raise MachineFormatError("duplicate state name", line_number)
            states = tuple(args)
        elif keyword == "edge":
            if alphabet_size is None or states is None:
                raise MachineFormatError(
                    "'alphabet' and 'states' must come before the first edge", line_number
                )
            if len(args) != 4:
                raise MachineFormatError(
                    "expected 'edge <from> <symbol> <prob> <to>'", line_number
                )
            source, symbol_text, prob_text, target = args
            for state in (source, target):
                if state not in states:
                    raise MachineFormatError(f"unknown state '{state}'", line_number)
            symbol = _parse_int(symbol_text, "symbol", line_number)
            if not 0 <= symbol < alphabet_size:
                raise MachineFormatError(
                    f"symbol {symbol} outside alphabet of size {alphabet_size}", line_number
                )
            if (source, symbol) in transitions:
                raise MachineFormatError(
                    f"state '{source}' already has an edge for symbol {symbol} "
                    f"(line {edge_lines[source, symbol]}); machines must be unifilar",
                    line_number,
                )
            transitions[source, symbol] = (_parse_probability(prob_text, line_number), target)
            edge_lines[source, symbol] = line_number
        else:
            raise MachineFormatError(f"unknown keyword '{keyword}'", line_number)

    if alphabet_size is None or states is None:
        raise MachineFormatError("missing 'alphabet' or 'states' declaration")
    if not transitions:
        raise MachineFormatError("no edges declared")

    try:
        machine = EpsilonMachine(states, alphabet_size, transitions, name)
    except ModelError as e:
        raise MachineFormatError(str(e))
    logger.debug(
        "Parsed machine %s: %d states, %d edges", name, len(states), len(transitions)
    )
    return machine


def load_machine(path: str | Path, name: str | None = None) -> EpsilonMachine:
    """Read and parse a machine file; the name defaults to the file stem."""
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as e:
        raise MachineFormatError(f"cannot read {source}: {e.strerror or e}")
    return parse_machine(text, name or source.stem)


def serialize_machine(machine: EpsilonMachine) -> str:
    """Text form accepted by `parse_machine`; probabilities use repr for exact floats."""
    lines = [
        f"# {machine.name}",
        f"alphabet {machine.alphabet_size}",
        "states " + " ".join(machine.states),
    ]
    for state in machine.states:
        for symbol in range(machine.alphabet_size):
            edge = machine.transitions.get((state, symbol))
            if edge is not None:
                prob, target = edge
                lines.append(f"edge {state} {symbol} {float(prob)!r} {target}")
    return "\n".join(lines) + "\n"


def _parse_int(text: str, what: str, line_number: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise MachineFormatError(f"invalid {what} '{text}'", line_number)


def _parse_probability(text: str, line_number: int) -> float:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise MachineFormatError(f"invalid probability '{text}'", line_number)
    if not 0 < value <= 1:
        raise MachineFormatError(f"probability {text} outside (0, 1]", line_number)
    return float(value)
