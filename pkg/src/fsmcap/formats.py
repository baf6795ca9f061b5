"""Text formats for automata, channels and memoryless-channel tables.

Automaton files look like::

    states: q1 q2 q3
    alphabet: a b
    initial: 1 0 0
    accepting: q3
    matrix a:
    1/2 1 0
    1/2 0 1/2
    0 0 1/2

Rationals are written ``p/q`` or as integers.  Matrices are row-major;
columns index the source state, rows the target state.  Channel files mirror
the layout with ``output <x>:`` (|Y| x |S| table of p(y|x,s')) and
``state <x>:`` (|S| x |S| table of p(s|x,s')) sections per input symbol.
Every invariant violation is rejected with a line-anchored message.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .fsmc import Fsmc, validate_fsmc
from .pfa import Pfa, validate_pfa

ZERO = Fraction(0)


class FormatError(ValueError):
    """Malformed or invalid file content, annotated with source:line."""


def parse_rational(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {token!r}") from exc


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _clean_lines(text: str):
    """(lineno, content) pairs with comments and blank lines removed."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


class _Reader:
    def __init__(self, text: str, source: str):
        self.lines = list(_clean_lines(text))
        self.pos = 0
        self.source = source

    def error(self, lineno: int, message: str) -> FormatError:
        return FormatError(f"{self.source}:{lineno}: {message}")

    def done(self) -> bool:
        return self.pos >= len(self.lines)

    def peek(self):
        return self.lines[self.pos]

    def take(self):
        item = self.lines[self.pos]
        self.pos += 1
        return item

    def take_section(self, keyword: str) -> tuple[int, list[str]]:
        if self.done():
            raise FormatError(f"{self.source}: missing '{keyword}:' section")
        lineno, line = self.take()
        head, sep, rest = line.partition(":")
        if not sep or head.strip() != keyword:
            raise self.error(lineno, f"expected '{keyword}:', found {line!r}")
        return lineno, rest.split()

    def take_rational_rows(self, n_rows: int, n_cols: int, what: str) -> list[list[Fraction]]:
        rows = []
        for _ in range(n_rows):
            if self.done():
                raise FormatError(f"{self.source}: unexpected end of file inside {what}")
            lineno, line = self.take()
            tokens = line.split()
            if len(tokens) != n_cols:
                raise self.error(lineno, f"{what}: expected {n_cols} entries, found {len(tokens)}")
            row = []
            for tok in tokens:
                try:
                    row.append(parse_rational(tok))
                except ValueError as exc:
                    raise self.error(lineno, f"{what}: {exc}") from None
            rows.append(row)
        return rows


def _check_columns(reader: _Reader, lineno: int, rows, names, what: str) -> None:
    n = len(rows)
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            if e < 0:
                raise reader.error(lineno, f"{what} entry ({i},{j}) = {e} is negative")
    for j in range(len(rows[0]) if rows else 0):
        col_sum = sum((rows[i][j] for i in range(n)), ZERO)
        if col_sum != 1:
            label = f" ({names[j]!r})" if names else ""
            raise reader.error(lineno, f"{what} column {j}{label} sums to {col_sum}")


def parse_pfa(text: str, source: str = "<string>") -> Pfa:
    reader = _Reader(text, source)
    states_line, states = reader.take_section("states")
    if not states:
        raise reader.error(states_line, "no states given")
    if len(set(states)) != len(states):
        raise reader.error(states_line, "duplicate state names")
    alpha_line, alphabet = reader.take_section("alphabet")
    if len(set(alphabet)) != len(alphabet):
        raise reader.error(alpha_line, "duplicate alphabet symbols")
    init_line, init_tokens = reader.take_section("initial")
    if len(init_tokens) != len(states):
        raise reader.error(init_line, f"initial: expected {len(states)} entries, found {len(init_tokens)}")
    try:
        initial = [parse_rational(t) for t in init_tokens]
    except ValueError as exc:
        raise reader.error(init_line, f"initial: {exc}") from None
    for j, e in enumerate(initial):
        if e < 0:
            raise reader.error(init_line, f"initial entry {j} = {e} is negative")
    total = sum(initial, ZERO)
    if total != 1:
        raise reader.error(init_line, f"initial distribution sums to {total}")
    acc_line, accepting = reader.take_section("accepting")
    for s in accepting:
        if s not in states:
            raise reader.error(acc_line, f"accepting state {s!r} is not a state")

    matrices = {}
    n = len(states)
    while not reader.done():
        lineno, line = reader.take()
        head, sep, _ = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0] != "matrix":
            raise reader.error(lineno, f"expected 'matrix <symbol>:', found {line!r}")
        sym = parts[1]
        if sym not in alphabet:
            raise reader.error(lineno, f"matrix for symbol {sym!r} not in the alphabet")
        if sym in matrices:
            raise reader.error(lineno, f"duplicate matrix for symbol {sym!r}")
        rows = reader.take_rational_rows(n, n, f"matrix {sym!r}")
        _check_columns(reader, lineno, rows, states, f"matrix {sym!r}")
        matrices[sym] = tuple(tuple(row) for row in rows)
    for sym in alphabet:
        if sym not in matrices:
            raise FormatError(f"{source}: no matrix for symbol {sym!r}")

    pfa = Pfa(states=tuple(states), alphabet=tuple(alphabet), matrices=matrices,
              initial=tuple(initial), accepting=frozenset(accepting))
    leftovers = validate_pfa(pfa)
    if leftovers:
        raise FormatError(f"{source}: " + "; ".join(leftovers))
    return pfa


def serialize_pfa(p: Pfa) -> str:
    lines = [
        "states: " + " ".join(p.states),
        "alphabet: " + " ".join(p.alphabet),
        "initial: " + " ".join(format_rational(e) for e in p.initial),
        "accepting: " + " ".join(s for s in p.states if s in p.accepting),
    ]
    for sym in p.alphabet:
        lines.append(f"matrix {sym}:")
        for row in p.matrices[sym]:
            lines.append(" ".join(format_rational(e) for e in row))
    return "\n".join(lines) + "\n"


def load_pfa(path) -> Pfa:
    path = Path(path)
    return parse_pfa(path.read_text(), source=str(path))


def save_pfa(p: Pfa, path) -> None:
    Path(path).write_text(serialize_pfa(p))


def parse_fsmc(text: str, source: str = "<string>") -> Fsmc:
    reader = _Reader(text, source)
    _, inputs = reader.take_section("inputs")
    if len(set(inputs)) != len(inputs):
        raise FormatError(f"{source}: duplicate input symbols")
    _, outputs = reader.take_section("outputs")
    states_line, states = reader.take_section("states")
    if not states:
        raise reader.error(states_line, "no states given")
    init_line, init_tokens = reader.take_section("initial")
    if len(init_tokens) != 1:
        raise reader.error(init_line, "initial: expected a single state name")
    if init_tokens[0] not in states:
        raise reader.error(init_line, f"initial state {init_tokens[0]!r} is not a state")

    output_law = {}
    state_law = {}
    while not reader.done():
        lineno, line = reader.take()
        head, sep, trailer = line.rpartition(":")   # input symbols may contain ':'
        parts = head.split(None, 1)
        if not sep or trailer or len(parts) != 2 or parts[0] not in ("output", "state"):
            raise reader.error(lineno, f"expected 'output <input>:' or 'state <input>:', found {line!r}")
        kind, sym = parts
        if sym not in inputs:
            raise reader.error(lineno, f"{kind} table for unknown input {sym!r}")
        target = output_law if kind == "output" else state_law
        if sym in target:
            raise reader.error(lineno, f"duplicate {kind} table for input {sym!r}")
        n_rows = len(outputs) if kind == "output" else len(states)
        rows = reader.take_rational_rows(n_rows, len(states), f"{kind} table {sym!r}")
        _check_columns(reader, lineno, rows, states, f"{kind} table {sym!r}")
        target[sym] = tuple(tuple(row) for row in rows)
    for sym in inputs:
        if sym not in output_law:
            raise FormatError(f"{source}: no output table for input {sym!r}")
        if sym not in state_law:
            raise FormatError(f"{source}: no state table for input {sym!r}")

    ch = Fsmc(inputs=tuple(inputs), outputs=tuple(outputs), states=tuple(states),
              output_law=output_law, state_law=state_law, initial=init_tokens[0])
    leftovers = validate_fsmc(ch)
    if leftovers:
        raise FormatError(f"{source}: " + "; ".join(leftovers))
    return ch


def serialize_fsmc(ch: Fsmc) -> str:
    lines = [
        "inputs: " + " ".join(ch.inputs),
        "outputs: " + " ".join(ch.outputs),
        "states: " + " ".join(ch.states),
        "initial: " + ch.initial,
    ]
    for sym in ch.inputs:
        lines.append(f"output {sym}:")
        for row in ch.output_law[sym]:
            lines.append(" ".join(format_rational(e) for e in row))
        lines.append(f"state {sym}:")
        for row in ch.state_law[sym]:
            lines.append(" ".join(format_rational(e) for e in row))
    return "\n".join(lines) + "\n"


def load_fsmc(path) -> Fsmc:
    path = Path(path)
    return parse_fsmc(path.read_text(), source=str(path))


def save_fsmc(ch: Fsmc, path) -> None:
    Path(path).write_text(serialize_fsmc(ch))


def parse_dmc(text: str, source: str = "<string>"):
    """Memoryless channel table: one line per input, entries p(y|x) as
    rationals or decimals.  Returns a list of float rows."""
    rows = []
    width = None
    for lineno, line in _clean_lines(text):
        tokens = line.split()
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise FormatError(f"{source}:{lineno}: expected {width} entries, found {len(tokens)}")
        row = []
        for tok in tokens:
            try:
                row.append(float(Fraction(tok)))
            except (ValueError, ZeroDivisionError):
                try:
                    row.append(float(tok))
                except ValueError:
                    raise FormatError(f"{source}:{lineno}: not a number: {tok!r}") from None
        rows.append(row)
    if not rows:
        raise FormatError(f"{source}: empty channel table")
    return rows


def load_dmc(path):
    path = Path(path)
    return parse_dmc(path.read_text(), source=str(path))
