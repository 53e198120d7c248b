"""Budge-PL: a register language over Gödel-numbered state.

Programs are nested tuples of instructions::

    (1,2,2,(2,-2,1))   ->   Incr(1), Incr(2), Incr(2), Loop(2, (Decr(2), Incr(1)))

``n > 0`` increments register n, ``-n`` decrements it when positive (and is
skipped otherwise), and ``(P, body...)`` repeats ``body`` while register P is
nonzero.  Two evaluators are provided: :func:`eval_vector` works on exponent
vectors, :func:`eval_godel` on the literal integer by multiplication and
divisibility tests.  They count steps identically, so a budget exhausts at
the same point in both.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from budge.godel import RegisterVector, canonical, decode, encode, nth_prime

DEFAULT_MAX_STEPS = 1_000_000
MAX_REGISTER = 2**63 - 1


@dataclass(frozen=True)
class Incr:
    register: int

    def __post_init__(self):
        _check_register(self.register)


@dataclass(frozen=True)
class Decr:
    register: int

    def __post_init__(self):
        _check_register(self.register)


@dataclass(frozen=True)
class Loop:
    register: int
    body: Tuple["Instruction", ...]

    def __post_init__(self):
        _check_register(self.register)
        object.__setattr__(self, "body", tuple(self.body))


Instruction = Union[Incr, Decr, Loop]
Sequence = Tuple[Instruction, ...]
Path = Tuple[int, ...]


def _check_register(r: int) -> None:
    if not isinstance(r, int) or r < 1:
        raise ValueError(f"register index must be a positive integer, got {r!r}")


class PlSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class TraceStep:
    path: Path
    instruction: Instruction
    pre: RegisterVector
    post: RegisterVector
    action: str  # applied | skipped | loop-enter | loop-exit


class NonTerminationError(RuntimeError):
    """The step budget ran out; the program is suspected to diverge."""

    def __init__(self, max_steps: int, trace: Optional[List[TraceStep]] = None):
        super().__init__(f"step budget of {max_steps} exhausted")
        self.max_steps = max_steps
        self.trace = trace


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<tok>[(),]|-?\d+)|(?P<bad>.)")


def _tokenize(text: str):
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        col = m.start() - line_start + 1
        if m.group("bad") is not None:
            raise PlSyntaxError(f"unexpected character {m.group('bad')!r}", line, col)
        if m.group("tok") is not None:
            yield m.group("tok"), line, col
        nl = m.group().count("\n")
        if nl:
            line += nl
            line_start = m.start() + m.group().rindex("\n") + 1
    yield "", line, len(text) - line_start + 1


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, expected: Optional[str] = None):
        tok, line, col = self.tokens[self.pos]
        if expected is not None and tok != expected:
            found = repr(tok) if tok else "end of input"
            raise PlSyntaxError(f"expected {expected!r}, found {found}", line, col)
        self.pos += 1
        return tok, line, col

    def number(self) -> Tuple[int, int, int]:
        tok, line, col = self.take()
        if not tok or tok in "(),":
            found = repr(tok) if tok else "end of input"
            raise PlSyntaxError(f"expected a number, found {found}", line, col)
        digits = tok.lstrip("-")
        if digits == "0" or digits.startswith("0"):
            raise PlSyntaxError(f"invalid literal {tok!r}: registers start at 1", line, col)
        n = int(tok)
        if abs(n) > MAX_REGISTER:
            raise PlSyntaxError(f"register index {tok} out of range", line, col)
        return n, line, col

    def code(self, allow_empty: bool) -> Sequence:
        _, line, col = self.take("(")
        if self.peek()[0] == ")":
            if not allow_empty:
                raise PlSyntaxError("empty program", line, col)
            self.take(")")
            return ()
        body = self.stmts()
        self.take(")")
        return body

    def stmts(self) -> Sequence:
        out = [self.stmt()]
        while self.peek()[0] == ",":
            self.take(",")
            out.append(self.stmt())
        return tuple(out)

    def stmt(self) -> Instruction:
        if self.peek()[0] == "(":
            self.take("(")
            head, line, col = self.number()
            if head < 0:
                raise PlSyntaxError("loop head must be a positive register", line, col)
            self.take(",")
            body = self.stmts()
            self.take(")")
            return Loop(head, body)
        n, _, _ = self.number()
        return Incr(n) if n > 0 else Decr(-n)


def parse_program(text: str, *, allow_empty: bool = False) -> Sequence:
    """Parse one program in concrete syntax.

    Whitespace between tokens and ``#`` line comments are ignored.  The bare
    ``()`` is outside the grammar and is rejected unless ``allow_empty``.
    """
    p = _Parser(text)
    seq = p.code(allow_empty)
    tok, line, col = p.peek()
    if tok:
        raise PlSyntaxError(f"unexpected {tok!r} after program", line, col)
    return seq


def format_instruction(ins: Instruction) -> str:
    if isinstance(ins, Incr):
        return str(ins.register)
    if isinstance(ins, Decr):
        return str(-ins.register)
    return "(" + ",".join([str(ins.register)] + [format_instruction(b) for b in ins.body]) + ")"


def print_program(s: Sequence) -> str:
    return "(" + ",".join(format_instruction(ins) for ins in s) + ")"


def compose(s1: Sequence, s2: Sequence) -> Sequence:
    return tuple(s1) + tuple(s2)


def max_register(s: Sequence) -> int:
    m = 0
    for ins in s:
        m = max(m, ins.register)
        if isinstance(ins, Loop):
            m = max(m, max_register(ins.body))
    return m


# -- evaluation ------------------------------------------------------------


def eval_vector(
    state: RegisterVector,
    s: Sequence,
    max_steps: Optional[int] = DEFAULT_MAX_STEPS,
    trace: Optional[List[TraceStep]] = None,
) -> RegisterVector:
    """Run ``s`` on a register vector.

    Pass a list as ``trace`` to collect one :class:`TraceStep` per step.
    ``max_steps=None`` disables the budget.
    """
    if max_steps is not None and max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    regs = list(canonical(state))
    steps = 0

    def reg(r: int) -> int:
        return regs[r - 1] if r <= len(regs) else 0

    # frames: [instructions, next index, path prefix]
    frames: List[list] = [[tuple(s), 0, ()]]
    while frames:
        frame = frames[-1]
        seq, idx, prefix = frame
        if idx == len(seq):
            frames.pop()
            continue
        if max_steps is not None and steps >= max_steps:
            raise NonTerminationError(max_steps, trace)
        steps += 1
        ins = seq[idx]
        path = prefix + (idx,)
        pre = canonical(regs) if trace is not None else None
        if isinstance(ins, Incr):
            if ins.register > len(regs):
                regs.extend([0] * (ins.register - len(regs)))
            regs[ins.register - 1] += 1
            action = "applied"
            frame[1] += 1
        elif isinstance(ins, Decr):
            if reg(ins.register) > 0:
                regs[ins.register - 1] -= 1
                action = "applied"
            else:
                action = "skipped"
            frame[1] += 1
        elif reg(ins.register) > 0:
            # body runs, then control returns to this guard
            action = "loop-enter"
            frames.append([ins.body, 0, path])
        else:
            action = "loop-exit"
            frame[1] += 1
        if trace is not None:
            trace.append(TraceStep(path, ins, pre, canonical(regs), action))
    return canonical(regs)


def eval_godel(
    i: int,
    s: Sequence,
    max_steps: Optional[int] = DEFAULT_MAX_STEPS,
    trace: Optional[List[TraceStep]] = None,
) -> int:
    """Run ``s`` on the integer state by multiplying and dividing by primes.

    Each pending continuation is a remaining suffix of some sequence; the head
    of the top continuation selects one of the five evaluation cases.
    """
    if i < 1:
        raise ValueError(f"state must be a positive integer, got {i}")
    if max_steps is not None and max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    steps = 0
    # (remaining sequence, path of its first element)
    stack: List[Tuple[Sequence, Path]] = [(tuple(s), (0,))]
    while stack:
        rest, path = stack.pop()
        if not rest:
            continue  # s = (): E(i, ()) = i
        if max_steps is not None and steps >= max_steps:
            raise NonTerminationError(max_steps, trace)
        steps += 1
        head, tail = rest[0], rest[1:]
        after = path[:-1] + (path[-1] + 1,)
        pre = i
        if isinstance(head, Loop):
            if i % nth_prime(head.register) == 0:
                # E(E(i, body), s): come back to the whole of s afterwards
                stack.append((rest, path))
                stack.append((head.body, path + (0,)))
                action = "loop-enter"
            else:
                stack.append((tail, after))
                action = "loop-exit"
        else:
            p = nth_prime(head.register)
            if isinstance(head, Incr):
                i *= p
                action = "applied"
            elif i % p == 0:
                i //= p
                action = "applied"
            else:
                action = "skipped"
            stack.append((tail, after))
        if trace is not None:
            trace.append(TraceStep(path, head, decode(pre), decode(i), action))
    return i


# -- rendering -------------------------------------------------------------


def format_registers(regs: RegisterVector, width: int = 0) -> str:
    n = max(len(regs), width, 1)
    padded = tuple(regs) + (0,) * (n - len(regs))
    return ", ".join(f"r{k}={v}" for k, v in enumerate(padded, start=1))


def format_trace(trace: List[TraceStep]) -> str:
    """One line per step: pre-state, instruction, post-state, action."""
    lines = []
    for k, st in enumerate(trace, start=1):
        lines.append(
            f"{k:>4}  {'.'.join(map(str, st.path)):<8} {_short(st.instruction):<8} "
            f"i={encode(st.pre)} {list(st.pre)} -> i={encode(st.post)} {list(st.post)}  {st.action}"
        )
    return "\n".join(lines)


def trace_records(trace: List[TraceStep]) -> List[str]:
    return [
        json.dumps(
            {
                "step": k,
                "path": list(st.path),
                "instruction": _short(st.instruction),
                "action": st.action,
                "pre": list(st.pre),
                "post": list(st.post),
                "pre_godel": str(encode(st.pre)),
                "post_godel": str(encode(st.post)),
            }
        )
        for k, st in enumerate(trace, start=1)
    ]


def _short(ins: Instruction) -> str:
    if isinstance(ins, Loop):
        return f"({ins.register},...)"
    return format_instruction(ins)


def pseudocode(s: Sequence, indent: str = "    ") -> str:
    lines: List[str] = []

    def emit(seq: Sequence, depth: int) -> None:
        pad = indent * depth
        for ins in seq:
            if isinstance(ins, Incr):
                lines.append(f"{pad}r{ins.register} += 1;")
            elif isinstance(ins, Decr):
                lines.append(f"{pad}r{ins.register} -= 1;")
            else:
                lines.append(f"{pad}while (r{ins.register} > 0) {{")
                emit(ins.body, depth + 1)
                lines.append(f"{pad}}}")

    emit(tuple(s), 0)
    return "\n".join(lines)


# -- the arithmetic programs -----------------------------------------------

ADD_TEXT = "((2, -2, 1))"
SUB_TEXT = "((1, -1, 3, 5), (2, -2, 4, 6), (3, -3, -4), (6, -5, -6), (4, -4, 1, 3), (3, (3, -3), 2), (5, -5, 1))"
MUL_TEXT = "((1, -1, (2, -2, 3, 4), (4, -4, 2)), (2, -2), (3, -3, 1))"
# division wraps the subtraction program; these are the pieces on either side
DIV_PREFIX_TEXT = "((2, -2, 7), (1, (7, -7, 2, 8), (8, -8, 7)))"
DIV_SUFFIX_TEXT = "((9, (2, -2, (1, -1, -7), (7, -7, 8), -9)), (7, -7), (9, -9, 1), (8, -8, 2))"


@dataclass(frozen=True)
class Stdlib:
    add: Sequence
    sub: Sequence
    mul: Sequence
    div: Sequence

    def items(self):
        return [("add", self.add), ("sub", self.sub), ("mul", self.mul), ("div", self.div)]


def stdlib() -> Stdlib:
    add = parse_program(ADD_TEXT)
    sub = parse_program(SUB_TEXT)
    mul = parse_program(MUL_TEXT)
    div = compose(compose(parse_program(DIV_PREFIX_TEXT), sub), parse_program(DIV_SUFFIX_TEXT))
    return Stdlib(add, sub, mul, div)
