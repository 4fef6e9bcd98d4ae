"""A small pulse-program language.

    program   := { statement }
    statement := block | sel | hard | crush | apply
    block     := "block" "{" sel { ";" sel } "}"
    sel       := "sel" INT INT axis ANGLE
    hard      := "hard" ( "all" | INT ) axis ANGLE
    crush     := "crush" [ "ideal" | "order" ]
    apply     := "apply" NAME [ ARG ]          (walsh, mixing, oracle FORMULA)
    axis      := "x" | "y" | "z"

Angles are degrees and '#' starts a comment. Whitespace is insignificant, but an
ARG runs to the end of its line, so `apply oracle V1 & !V2` is one formula.
Pulses inside one block are applied simultaneously (a single exponential of
the summed generator); a bare `sel` is a block of its own.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np

from pseudo_pure import hogg
from pseudo_pure.errors import ContractError, InputError, ProgramCompileError, ProgramSyntaxError
from pseudo_pure.models import Axis, CrushMode, DeviationMatrix, Operator, SpinSystem
from pseudo_pure.spin_core import crush, evolve, expm_unitary, generator, hard_pulse, is_unitary
from pseudo_pure.utils import flipped_spins

logger = logging.getLogger(__name__)

CRUSH_TOKENS = {"ideal": CrushMode.ALL_OFF_DIAGONAL, "order": CrushMode.COHERENCE_ORDER}

# name -> (takes an argument, factory(n_spins, argument))
BUILTIN_UNITARIES = {
    "walsh": (False, lambda n, _: hogg.walsh(n)),
    "mixing": (False, lambda n, _: hogg.mixing(n)),
    "oracle": (True, lambda n, formula: hogg.phase_oracle(hogg.parse_formula(formula, n_vars=n))),
}


@dataclass(frozen=True)
class Sel:
    m: int
    k: int
    axis: Axis
    angle: float


@dataclass(frozen=True)
class Block:
    pulses: Tuple[Sel, ...]


@dataclass(frozen=True)
class HardPulse:
    spin: Optional[int]
    axis: Axis
    angle: float


@dataclass(frozen=True)
class Crush:
    mode: CrushMode = CrushMode.ALL_OFF_DIAGONAL


@dataclass(frozen=True)
class UnitaryRef:
    name: str
    argument: Optional[str] = None


Statement = Union[Block, HardPulse, Crush, UnitaryRef]


@dataclass(frozen=True)
class PulseProgram:
    statements: Tuple[Statement, ...] = ()
    source_map: Tuple[int, ...] = field(default=(), compare=False)

    def __add__(self, other: "PulseProgram") -> "PulseProgram":
        return PulseProgram(self.statements + other.statements, self.source_map + other.source_map)

    def line_of(self, index: int) -> Optional[int]:
        return self.source_map[index] if index < len(self.source_map) else None


@dataclass(frozen=True, eq=False)
class UnitaryEvent:
    operator: Operator
    label: str = ""


@dataclass(frozen=True)
class CrushEvent:
    mode: CrushMode


@dataclass(frozen=True, eq=False)
class ChannelSequence:
    events: Tuple[Union[UnitaryEvent, CrushEvent], ...]
    dim: int

    def __add__(self, other: "ChannelSequence") -> "ChannelSequence":
        if self.dim != other.dim:
            raise InputError("channel sequences act on different dimensions", left=self.dim, right=other.dim)
        return ChannelSequence(self.events + other.events, self.dim)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


_TOKENS = re.compile(r"(?P<comment>#[^\n]*)|(?P<newline>\n)|(?P<space>[ \t\r\f\v]+)"
                     r"|(?P<punct>[{};])|(?P<word>[^\s{};#]+)")


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start = 1, 0
    for match in _TOKENS.finditer(text):
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind in ("punct", "word"):
            tokens.append(Token(kind, match.group(), line, match.start() - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.position = 0
        self.statements: List[Statement] = []
        self.lines: List[int] = []

    def peek(self) -> Optional[Token]:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def take(self, what: str = "more input") -> Token:
        token = self.peek()
        if token is None:
            last = self.tokens[-1] if self.tokens else Token("eof", "", 1, 0)
            raise ProgramSyntaxError(f"unexpected end of program, expected {what}",
                                     last.line, last.column + len(last.text))
        self.position += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.take(repr(text))
        if token.text != text:
            raise ProgramSyntaxError(f"expected {text!r}, found {token.text!r}", token.line, token.column)
        return token

    def parse(self) -> PulseProgram:
        handlers = {"block": self.block, "sel": self.bare_sel, "hard": self.hard,
                    "crush": self.crush, "apply": self.apply}
        while self.peek() is not None:
            token = self.peek()
            handler = handlers.get(token.text)
            if handler is None:
                raise ProgramSyntaxError(f"unknown keyword {token.text!r}", token.line, token.column)
            self.statements.append(handler())
            self.lines.append(token.line)
        return PulseProgram(tuple(self.statements), tuple(self.lines))

    def block(self) -> Block:
        self.expect("block")
        self.expect("{")
        pulses = [self.sel()]
        while self.peek() is not None and self.peek().text == ";":
            self.expect(";")
            if self.peek() is not None and self.peek().text == "}":
                break
            pulses.append(self.sel())
        self.expect("}")
        return Block(tuple(pulses))

    def bare_sel(self) -> Block:
        return Block((self.sel(),))

    def sel(self) -> Sel:
        keyword = self.expect("sel")
        m = self.integer("level")
        k = self.integer("level")
        if m == k:
            raise ProgramSyntaxError(f"degenerate transition {m} {k}", keyword.line, keyword.column)
        return Sel(m, k, self.axis(), self.angle())

    def hard(self) -> HardPulse:
        self.expect("hard")
        token = self.peek()
        spin = None
        if token is not None and token.text == "all":
            self.take()
        else:
            spin = self.integer("spin")
        return HardPulse(spin, self.axis(), self.angle())

    def crush(self) -> Crush:
        self.expect("crush")
        token = self.peek()
        if token is not None and token.text in CRUSH_TOKENS:
            self.take()
            return Crush(CRUSH_TOKENS[token.text])
        return Crush()

    def apply(self) -> UnitaryRef:
        self.expect("apply")
        token = self.take("a unitary name")
        if token.text not in BUILTIN_UNITARIES:
            raise ProgramSyntaxError(f"unknown unitary {token.text!r}", token.line, token.column,
                                     known=sorted(BUILTIN_UNITARIES))
        takes_argument, _ = BUILTIN_UNITARIES[token.text]
        argument = self.rest_of_line(token, f"an argument for {token.text}") if takes_argument else None
        return UnitaryRef(token.text, argument)

    def rest_of_line(self, after: Token, what: str) -> str:
        words = [self.take(what).text]
        while self.peek() is not None and self.peek().line == after.line and self.peek().kind == "word":
            words.append(self.take().text)
        return " ".join(words)

    def integer(self, what: str) -> int:
        token = self.take(f"a {what}")
        if not re.fullmatch(r"\d+", token.text):
            raise ProgramSyntaxError(f"malformed {what} {token.text!r}", token.line, token.column)
        return int(token.text)

    def axis(self) -> Axis:
        token = self.take("an axis")
        try:
            return Axis(token.text)
        except ValueError:
            raise ProgramSyntaxError(f"unknown axis {token.text!r}", token.line, token.column)

    def angle(self) -> float:
        token = self.take("an angle")
        try:
            value = float(token.text)
        except ValueError:
            value = math.nan
        if not math.isfinite(value):
            raise ProgramSyntaxError(f"malformed angle {token.text!r}", token.line, token.column)
        return value


def parse(text: str) -> PulseProgram:
    program = _Parser(text).parse()
    for index, statement in enumerate(program.statements):
        if isinstance(statement, Block):
            transitions = [frozenset((pulse.m, pulse.k)) for pulse in statement.pulses]
            if len(set(transitions)) != len(transitions):
                raise ProgramSyntaxError("a block addresses the same transition twice",
                                         program.line_of(index), 1)
    return program


def load_program(path: Union[str, Path]) -> PulseProgram:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read program {path}: {e.strerror}", path=str(path))
    return parse(text)


def _format_angle(angle: float) -> str:
    return repr(float(angle))


def _format_statement(statement: Statement) -> str:
    if isinstance(statement, Block):
        pulses = " ; ".join(f"sel {p.m} {p.k} {p.axis.value} {_format_angle(p.angle)}" for p in statement.pulses)
        return f"block {{ {pulses} }}"
    if isinstance(statement, HardPulse):
        spin = "all" if statement.spin is None else statement.spin
        return f"hard {spin} {statement.axis.value} {_format_angle(statement.angle)}"
    if isinstance(statement, Crush):
        token = next(name for name, mode in CRUSH_TOKENS.items() if mode == statement.mode)
        return f"crush {token}"
    return " ".join(part for part in ("apply", statement.name, statement.argument) if part)


def format_program(program: PulseProgram) -> str:
    return "".join(_format_statement(statement) + "\n" for statement in program.statements)


def preparation_program(steps, angles) -> PulseProgram:
    """One simultaneous block over the cascade steps (x-phase, degrees) and a crusher."""
    block = Block(tuple(Sel(step.level_from, step.level_to, Axis.X, float(angle))
                        for step, angle in zip(steps, angles)))
    return PulseProgram((block, Crush()))


def compile_program(program: PulseProgram, system: SpinSystem) -> ChannelSequence:
    n = system.n_spins
    dim = system.dim
    events = []
    for index, statement in enumerate(program.statements):
        where = {"statement": index + 1, "line": program.line_of(index)}
        if isinstance(statement, Block):
            pulses = []
            for pulse in statement.pulses:
                if not (1 <= pulse.m <= dim and 1 <= pulse.k <= dim):
                    raise ProgramCompileError(f"statement {index + 1}: levels {pulse.m} {pulse.k} outside 1..{dim}",
                                              **where)
                if len(flipped_spins(pulse.m, pulse.k, n)) != 1:
                    raise ProgramCompileError(
                        f"statement {index + 1}: transition {pulse.m}-{pulse.k} is not a resolvable line", **where)
                pulses.append(((pulse.m, pulse.k), pulse.axis, np.deg2rad(pulse.angle)))
            event = UnitaryEvent(expm_unitary(generator(pulses, n)), _format_statement(statement))
        elif isinstance(statement, HardPulse):
            if statement.spin is not None and not 1 <= statement.spin <= n:
                raise ProgramCompileError(f"statement {index + 1}: spin {statement.spin} outside 1..{n}", **where)
            spins = None if statement.spin is None else [statement.spin]
            event = UnitaryEvent(hard_pulse(spins, statement.axis, np.deg2rad(statement.angle), n),
                                 _format_statement(statement))
        elif isinstance(statement, Crush):
            events.append(CrushEvent(statement.mode))
            continue
        else:
            _, factory = BUILTIN_UNITARIES[statement.name]
            try:
                operator = factory(n, statement.argument)
            except InputError as e:
                raise ProgramCompileError(f"statement {index + 1}: {e.message}", **where, **e.context)
            event = UnitaryEvent(operator, _format_statement(statement))
        if not is_unitary(event.operator):
            raise ContractError(f"statement {index + 1} does not compile to a unitary", **where)
        events.append(event)
    logger.debug("compiled %d statements into %d events", len(program.statements), len(events))
    return ChannelSequence(tuple(events), dim)


def run(sequence: ChannelSequence, rho0: DeviationMatrix) -> DeviationMatrix:
    rho = np.asarray(rho0, dtype=complex)
    if rho.shape != (sequence.dim, sequence.dim):
        raise InputError("initial state does not match the program dimension",
                         state=list(rho.shape), dim=sequence.dim)
    for event in sequence.events:
        if isinstance(event, CrushEvent):
            rho = crush(rho, event.mode)
        else:
            rho = evolve(rho, event.operator)
    return rho
