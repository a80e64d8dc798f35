"""Line-oriented circuit language: parser, formatter and interpreter.

::

    # dense coding, message (1, 1)
    mode toy
    systems 2
    state +XX +ZZ
    gate x 1
    gate z 1
    measure +XX
    expect +ZZ

Systems are 1-based in source text.  Toy programs run on the packed
tableau; qubit programs run on the symbolic engine and may only ``expect``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .algebra import QUBIT, TOY, Observable, ObservableSyntaxError, format_observable, parse_observable
from .measurement import MissingSeed, expectation
from .stabilizer import InvalidGenerators, StabilizerState, new_state
from .tableau import ToyTableau
from .transform import GATE_ARITY, ElementaryPermutation, apply, from_permutation, gate


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class RunError(RuntimeError):
    def __init__(self, message: str, index: int, line: int | None = None):
        where = f"statement {index + 1}" + (f" (line {line})" if line else "")
        super().__init__(f"{where}: {message}")
        self.message = message
        self.index = index
        self.line = line


@dataclass(frozen=True)
class StateDecl:
    observables: tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Gate:
    name: str
    systems: tuple[int, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Perm:
    system: int
    cycles: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Measure:
    observable: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Expect:
    observable: str
    line: int = field(default=0, compare=False)


Statement = Union[StateDecl, Gate, Perm, Measure, Expect]


@dataclass(frozen=True)
class Program:
    mode: str
    n: int
    statements: tuple[Statement, ...]

    def has_random_measurements(self) -> bool:
        return any(isinstance(st, Measure) for st in self.statements)


# -- parsing -----------------------------------------------------------------


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    col = 0
    for part in line.split(" "):
        if part:
            out.append((part, col + 1))
        col += len(part) + 1
    return out


def _parse_int(tok: str, col: int, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno, col) from None


def _parse_obs(tok: str, col: int, lineno: int, mode: str, n: int) -> str:
    try:
        g = parse_observable(tok, n, mode)
    except ObservableSyntaxError as e:
        raise ParseError(str(e), lineno, col) from None
    return format_observable(g)


def parse(text: str) -> Program:
    mode = None
    n = None
    statements: list[Statement] = []
    for lineno, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        body = raw.split("#", 1)[0].replace("\t", " ").rstrip()
        toks = _tokens(body)
        if not toks:
            continue
        head, hcol = toks[0]
        args = toks[1:]
        if head == "mode":
            if mode is not None:
                raise ParseError("duplicate mode line", lineno, hcol)
            if statements or n is not None:
                raise ParseError("mode must come first", lineno, hcol)
            if len(args) != 1 or args[0][0] not in (TOY, QUBIT):
                raise ParseError("expected 'mode toy' or 'mode qubit'", lineno, hcol)
            mode = args[0][0]
            continue
        if head == "systems":
            if mode is None:
                raise ParseError("systems line before mode line", lineno, hcol)
            if n is not None:
                raise ParseError("duplicate systems line", lineno, hcol)
            if len(args) != 1:
                raise ParseError("expected 'systems N'", lineno, hcol)
            n = _parse_int(args[0][0], args[0][1], lineno, "systems")
            if n < 1:
                raise ParseError("need at least one system", lineno, args[0][1])
            continue
        if head not in ("state", "gate", "measure", "expect"):
            raise ParseError(f"unknown directive {head!r}", lineno, hcol)
        if mode is None or n is None:
            raise ParseError("mode and systems lines must precede statements", lineno, hcol)
        statements.append(_parse_statement(head, hcol, args, lineno, mode, n))
    if mode is None:
        raise ParseError("missing mode line", 1, 1)
    if n is None:
        raise ParseError("missing systems line", 1, 1)
    return Program(mode, n, tuple(statements))


def _parse_statement(head, hcol, args, lineno, mode, n) -> Statement:
    if head == "state":
        if not args:
            raise ParseError("state needs at least one observable", lineno, hcol)
        return StateDecl(tuple(_parse_obs(t, c, lineno, mode, n) for t, c in args), lineno)
    if head in ("measure", "expect"):
        if len(args) != 1:
            raise ParseError(f"{head} takes exactly one observable", lineno, hcol)
        if head == "measure" and mode == QUBIT:
            raise ParseError("qubit mode supports expect only", lineno, hcol)
        obs = _parse_obs(args[0][0], args[0][1], lineno, mode, n)
        return Measure(obs, lineno) if head == "measure" else Expect(obs, lineno)
    if not args:
        raise ParseError("gate needs a name", lineno, hcol)
    name, ncol = args[0]
    rest = args[1:]
    if name == "perm":
        if mode != TOY:
            raise ParseError("perm gates exist in toy mode only", lineno, ncol)
        if len(rest) < 2:
            raise ParseError("expected 'gate perm K (CYCLES)'", lineno, ncol)
        k = _system(rest[0], lineno, n)
        cycles = "".join(t for t, _ in rest[1:])
        try:
            ElementaryPermutation.from_cycles(cycles)
        except ValueError as e:
            raise ParseError(str(e), lineno, rest[1][1]) from None
        return Perm(k, cycles, lineno)
    if name not in GATE_ARITY:
        raise ParseError(f"unknown gate {name!r}", lineno, ncol)
    if len(rest) != GATE_ARITY[name]:
        raise ParseError(f"gate {name} takes {GATE_ARITY[name]} system index(es)", lineno, ncol)
    systems = tuple(_system(tok, lineno, n) for tok in rest)
    if len(set(systems)) != len(systems):
        raise ParseError(f"gate {name} needs distinct systems", lineno, rest[1][1])
    return Gate(name, systems, lineno)


def _system(tok, lineno, n) -> int:
    text, col = tok
    k = _parse_int(text, col, lineno, "system index")
    if not 1 <= k <= n:
        raise ParseError(f"system index {k} out of range 1..{n}", lineno, col)
    return k


def format_statement(st: Statement) -> str:
    if isinstance(st, StateDecl):
        return "state " + " ".join(st.observables)
    if isinstance(st, Gate):
        return "gate " + " ".join([st.name, *map(str, st.systems)])
    if isinstance(st, Perm):
        return f"gate perm {st.system} {st.cycles}"
    if isinstance(st, Measure):
        return f"measure {st.observable}"
    return f"expect {st.observable}"


def format_program(p: Program) -> str:
    lines = [f"mode {p.mode}", f"systems {p.n}"]
    lines += [format_statement(st) for st in p.statements]
    return "\n".join(lines) + "\n"


# -- interpretation ----------------------------------------------------------


@dataclass(frozen=True)
class Record:
    statement: Statement
    outcome: int | None
    generators: tuple[str, ...] | None
    deterministic: bool | None = None


@dataclass
class Trace:
    records: list[Record]
    output: list[str]
    final: StabilizerState | None

    def __len__(self) -> int:
        return len(self.records)

    def outcomes(self) -> list[int]:
        return [r.outcome for r in self.records if isinstance(r.statement, Measure)]


def _fmt_value(v: int) -> str:
    return {1: "+1", -1: "-1", 0: "0"}[v]


class _Engine:
    """Holds the current state for one run; toy uses the tableau."""

    def __init__(self, p: Program):
        self.p = p
        self.tab: ToyTableau | None = None
        self.state: StabilizerState | None = None

    @property
    def declared(self) -> bool:
        return self.tab is not None or self.state is not None

    def declare(self, observables: tuple[str, ...]) -> None:
        gens = [parse_observable(t, self.p.n, self.p.mode) for t in observables]
        s = new_state(gens, n=self.p.n, algebra=self.p.mode)
        if self.p.mode == TOY:
            self.tab = ToyTableau.from_state(s)
        else:
            self.state = s

    def gate(self, st: Gate | Perm) -> None:
        if isinstance(st, Perm):
            local = from_permutation(st.cycles)
            self.tab.apply_gate(local, st.system - 1)
        elif self.tab is not None:
            self.tab.apply_gate(st.name, *(k - 1 for k in st.systems))
        else:
            self.state = apply(gate(st.name, *(k - 1 for k in st.systems), n=self.p.n, algebra=QUBIT), self.state)

    def observable(self, text: str) -> Observable:
        return parse_observable(text, self.p.n, self.p.mode)

    def expect(self, g: Observable) -> int:
        if self.tab is not None:
            return self.tab.expectation(g)
        return expectation(self.state, g)

    def measure(self, g: Observable, rng) -> tuple[int, bool]:
        return self.tab.measure(g, rng)

    def snapshot(self) -> StabilizerState:
        return self.tab.to_state() if self.tab is not None else self.state


def run(p: Program, seed: int | None = None, trace: bool = False) -> Trace:
    """Execute ``p``.  ``seed`` feeds numpy's PCG64; random outcomes without
    a seed raise :class:`RunError`."""
    rng = np.random.default_rng(seed) if seed is not None else None
    engine = _Engine(p)
    records: list[Record] = []
    output: list[str] = []
    measured = 0
    for i, st in enumerate(p.statements):
        outcome = deterministic = None
        try:
            if isinstance(st, StateDecl):
                engine.declare(st.observables)
            elif not engine.declared:
                raise RunError("no state declared yet", i, st.line)
            elif isinstance(st, (Gate, Perm)):
                engine.gate(st)
            elif isinstance(st, Expect):
                outcome = engine.expect(engine.observable(st.observable))
                output.append(f"e {st.observable} -> {_fmt_value(outcome)}")
            else:
                measured += 1
                outcome, deterministic = engine.measure(engine.observable(st.observable), rng)
                output.append(f"m {measured} {st.observable} -> {_fmt_value(outcome)}")
        except RunError:
            raise
        except MissingSeed:
            raise RunError("random outcome needs --seed", i, st.line) from None
        except (InvalidGenerators, ValueError) as e:
            raise RunError(str(e), i, st.line) from None
        gens = engine.snapshot().generator_strings() if trace and engine.declared else None
        records.append(Record(st, outcome, gens, deterministic))
    final = engine.snapshot() if engine.declared else None
    return Trace(records, output, final)


def run_text(text: str, seed: int | None = None, trace: bool = False) -> Trace:
    return run(parse(text), seed, trace)


def dense_coding_source(b1: int, b2: int) -> str:
    """Program sending two bits with one system of a correlated pair."""
    lines = ["mode toy", "systems 2", "state +XX +ZZ"]
    if b1:
        lines.append("gate x 1")
    if b2:
        lines.append("gate z 1")
    lines += ["expect +XX", "expect +ZZ", "measure +XX", "measure +ZZ", "expect +XX", "expect +ZZ"]
    return "\n".join(lines) + "\n"
