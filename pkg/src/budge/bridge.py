"""Two-register Budge-PL simulated inside Budge-TP.

Numerals are unary (``SS0`` is 2), lists are right-nested pairs ``(head
tail)`` ending in ``NIL``, and a machine state is the theorem ``PROGRAM (R1
R2)``.  Commands are the atoms ``S0``, ``P0``, ``SS0``, ``PP0`` for
``1, -1, 2, -2``; a loop on register 2 is the element ``(SS0 BODY)``.

:func:`generate_proof` replays a reference evaluation as a ``.btp`` script,
one theorem per step, building every term and APPEND lemma it needs from the
rules in :data:`PRELUDE`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from budge import pl, tp

PRELUDE = """\
# Lists and numbers
rMkList : (x y)
rTmNil : NIL
rTm0 : 0
rTmS : Sx
rTmP : Px

# Initial program
rInitState : p (a b)

# Commands 1, -1, 2, -2 respectively
rNextState+1 : (S0 x) (a b) -> x (Sa b)
rNextState-1 : (P0 x) (Sa b) -> x (a b)
rNextState+2 : (SS0 x) (a b) -> x (a Sb)
rNextState-2 : (PP0 x) (a Sb) -> x (a b)

# Commands for looping on the second register
rLoop2Base : ((SS0 x) y) (a 0) -> y (a 0)
rLoop2Succ : ((SS0 x) y) (a Sb) -> APPEND x ((SS0 x) y) z -> z (a Sb)

# Appending lists
rAppendNil : APPEND NIL y y
rAppendRec : APPEND x y z -> APPEND (a x) y (a z)
"""

# Decrementing an empty register is a no-op in Budge-PL but has no rule above;
# these are appended only when a run needs them.
SKIP_RULES = """\
# Decrementing an empty register leaves the state unchanged
rSkip-1 : (P0 x) (0 b) -> x (0 b)
rSkip-2 : (PP0 x) (a 0) -> x (a 0)
"""


class BridgeScopeError(ValueError):
    pass


class UnsupportedRegisterError(BridgeScopeError):
    pass


class UnsupportedLoopHeadError(BridgeScopeError):
    pass


# -- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    text: str

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class Pair:
    head: "Term"
    tail: "Term"

    def __str__(self):
        return f"({self.head} {self.tail})"


Term = Union[Atom, Pair]
NIL = Atom("NIL")


def encode_numeral(n: int) -> str:
    if n < 0:
        raise ValueError(f"numerals are natural numbers, got {n}")
    return "S" * n + "0"


def decode_numeral(text: str) -> int:
    n = len(text) - len(text.lstrip("S"))
    if text[n:] != "0":
        raise ValueError(f"not a numeral: {text!r}")
    return n


def make_list(items) -> Term:
    out: Term = NIL
    for item in reversed(list(items)):
        out = Pair(item, out)
    return out


# -- programs --------------------------------------------------------------


@dataclass(frozen=True)
class Incr1:
    pass


@dataclass(frozen=True)
class Decr1:
    pass


@dataclass(frozen=True)
class Incr2:
    pass


@dataclass(frozen=True)
class Decr2:
    pass


@dataclass(frozen=True)
class Loop2:
    body: Tuple["Command", ...]


Command = Union[Incr1, Decr1, Incr2, Decr2, Loop2]
BridgeProgram = Tuple[Command, ...]

_ATOMS = {Incr1: "S0", Decr1: "P0", Incr2: "SS0", Decr2: "PP0"}


def lower_program(s: pl.Sequence) -> BridgeProgram:
    out: List[Command] = []
    for ins in s:
        if ins.register > 2:
            raise UnsupportedRegisterError(
                f"register {ins.register} is outside the two-register embedding"
            )
        if isinstance(ins, pl.Loop):
            if ins.register != 2:
                raise UnsupportedLoopHeadError("only loops on register 2 can be embedded")
            out.append(Loop2(lower_program(ins.body)))
        elif isinstance(ins, pl.Incr):
            out.append(Incr1() if ins.register == 1 else Incr2())
        else:
            out.append(Decr1() if ins.register == 1 else Decr2())
    return tuple(out)


def raise_program(p: BridgeProgram) -> pl.Sequence:
    """Inverse of :func:`lower_program`."""
    out: List[pl.Instruction] = []
    for c in p:
        if isinstance(c, Loop2):
            out.append(pl.Loop(2, raise_program(c.body)))
        elif isinstance(c, (Incr1, Incr2)):
            out.append(pl.Incr(1 if isinstance(c, Incr1) else 2))
        else:
            out.append(pl.Decr(1 if isinstance(c, Decr1) else 2))
    return tuple(out)


def encode_command(c: Command) -> Term:
    if isinstance(c, Loop2):
        return Pair(Atom("SS0"), encode_program(c.body))
    return Atom(_ATOMS[type(c)])


def encode_program(p: BridgeProgram) -> Term:
    return make_list(encode_command(c) for c in p)


# -- proof generation ------------------------------------------------------


@dataclass(frozen=True)
class Application:
    name: str
    rule: str
    bindings: Tuple[Tuple[str, str], ...]
    args: Tuple[str, ...]
    statement: str
    kind: str  # term | append | init | step

    def line(self) -> str:
        parts = [f"{self.name} : {self.rule}"]
        if self.bindings:
            parts.append(";".join(f"{v}={t}" for v, t in self.bindings))
        parts.extend(self.args)
        return " ".join(parts)


@dataclass
class ProofPlan:
    applications: List[Application] = field(default_factory=list)
    uses_skip_rules: bool = False

    @property
    def final(self) -> Application:
        return next(a for a in reversed(self.applications) if a.kind in ("init", "step"))

    @property
    def schedule(self) -> List[str]:
        """Rule names of the state-transition theorems, in order."""
        return [a.rule for a in self.applications if a.kind in ("init", "step")]

    def script(self) -> str:
        lines = [PRELUDE]
        if self.uses_skip_rules:
            lines.append("\n" + SKIP_RULES)
        lines.append("\n# Derivation\n")
        lines.extend(a.line() + "\n" for a in self.applications)
        return "".join(lines)

    def jsonl(self) -> str:
        return "".join(
            json.dumps(
                {
                    "name": a.name,
                    "kind": a.kind,
                    "rule": a.rule,
                    "bindings": dict(a.bindings),
                    "args": list(a.args),
                    "statement": a.statement,
                }
            )
            + "\n"
            for a in self.applications
        )


class _Builder:
    def __init__(self) -> None:
        self.plan = ProofPlan()
        self.terms: Dict[str, str] = {}  # statement -> theorem name
        self.counters = {"tTm": 0, "tApp": 0, "tStep": 0}

    def _add(self, prefix, rule, bindings, args, statement, kind) -> str:
        self.counters[prefix] += 1
        name = f"{prefix}{self.counters[prefix]}"
        self.plan.applications.append(
            Application(name, rule, tuple(bindings), tuple(args), statement, kind)
        )
        return name

    def term(self, t: Term) -> str:
        """Name of a theorem whose statement is exactly ``str(t)``."""
        key = str(t)
        if key in self.terms:
            return self.terms[key]
        if isinstance(t, Pair):
            bindings = [("x", self.term(t.head)), ("y", self.term(t.tail))]
            name = self._add("tTm", "rMkList", bindings, (), key, "term")
        elif key == "NIL":
            name = self._add("tTm", "rTmNil", (), (), key, "term")
        elif key == "0":
            name = self._add("tTm", "rTm0", (), (), key, "term")
        elif key[0] in "SP":
            rule = "rTmS" if key[0] == "S" else "rTmP"
            name = self._add("tTm", rule, [("x", self.term(Atom(key[1:])))], (), key, "term")
        else:
            raise ValueError(f"no constructor for atom {key!r}")
        self.terms[key] = name
        return name

    def append(self, xs: List[Term], ys: Term) -> Tuple[str, Term]:
        """Prove ``APPEND Xs Ys Zs``; return the lemma name and ``Zs``."""
        zs = ys
        lemma = self._add(
            "tApp", "rAppendNil", [("y", self.term(ys))], (), f"APPEND NIL {ys} {ys}", "append"
        )
        for k in range(len(xs) - 1, -1, -1):
            tail = make_list(xs[k + 1 :])
            bindings = [
                ("x", self.term(tail)),
                ("y", self.term(ys)),
                ("z", self.term(zs)),
                ("a", self.term(xs[k])),
            ]
            zs = Pair(xs[k], zs)
            statement = f"APPEND {make_list(xs[k:])} {ys} {zs}"
            lemma = self._add("tApp", "rAppendRec", bindings, (lemma,), statement, "append")
        return lemma, zs

    def step(self, rule, bindings, args, statement) -> str:
        return self._add("tStep", rule, bindings, args, statement, "step")


def generate_proof(
    p: BridgeProgram,
    r1: int,
    r2: int,
    max_steps: Optional[int] = pl.DEFAULT_MAX_STEPS,
) -> ProofPlan:
    """Build the derivation of ``p`` run from registers ``(r1, r2)``.

    The reference evaluator's trace fixes the order of rule applications.
    Raises :class:`budge.pl.NonTerminationError` when the run exceeds the
    budget.
    """
    trace: List[pl.TraceStep] = []
    pl.eval_vector((r1, r2), raise_program(p), max_steps, trace)

    b = _Builder()
    prog: List[Command] = list(p)
    a, c = r1, r2

    def num(n: int) -> str:
        return b.term(Atom(encode_numeral(n)))

    def state(cmds, x, y) -> str:
        return f"{encode_program(tuple(cmds))} ({encode_numeral(x)} {encode_numeral(y)})"

    current = b._add(
        "tStep",
        "rInitState",
        [("p", b.term(encode_program(p))), ("a", num(a)), ("b", num(c))],
        (),
        state(prog, a, c),
        "init",
    )
    for st in trace:
        head, rest = prog[0], prog[1:]
        if st.action in ("loop-enter", "loop-exit"):
            assert isinstance(head, Loop2), st
            body = encode_program(head.body)
            if st.action == "loop-exit":
                bindings = [("x", b.term(body)), ("y", b.term(encode_program(rest))), ("a", num(a))]
                prog = rest
                current = b.step("rLoop2Base", bindings, (current,), state(prog, a, c))
                continue
            items = [encode_command(x) for x in head.body]
            lemma, zs = b.append(items, encode_program(prog))
            bindings = [
                ("x", b.term(body)),
                ("y", b.term(encode_program(rest))),
                ("a", num(a)),
                ("b", num(c - 1)),
                ("z", b.term(zs)),
            ]
            prog = list(head.body) + prog
            current = b.step("rLoop2Succ", bindings, (current, lemma), state(prog, a, c))
            continue

        x = [("x", b.term(encode_program(rest)))]
        if st.action == "skipped":
            b.plan.uses_skip_rules = True
            if isinstance(head, Decr1):
                rule, bindings = "rSkip-1", x + [("b", num(c))]
            else:
                rule, bindings = "rSkip-2", x + [("a", num(a))]
        elif isinstance(head, Incr1):
            rule, bindings = "rNextState+1", x + [("a", num(a)), ("b", num(c))]
            a += 1
        elif isinstance(head, Decr1):
            a -= 1
            rule, bindings = "rNextState-1", x + [("a", num(a)), ("b", num(c))]
        elif isinstance(head, Incr2):
            rule, bindings = "rNextState+2", x + [("a", num(a)), ("b", num(c))]
            c += 1
        else:
            c -= 1
            rule, bindings = "rNextState-2", x + [("a", num(a)), ("b", num(c))]
        prog = rest
        current = b.step(rule, bindings, (current,), state(prog, a, c))
        assert (a, c) == _pad2(st.post), (st, a, c)
    return b.plan


def _pad2(regs) -> Tuple[int, int]:
    regs = tuple(regs) + (0, 0)
    return regs[0], regs[1]


_STATE = re.compile(r"^(?P<prog>.*) \((?P<r1>S*0) (?P<r2>S*0)\)$")


def decode_state(statement: str) -> Tuple[str, int, int]:
    """Split ``PROGRAM (R1 R2)`` into the program text and register values."""
    m = _STATE.match(statement)
    if m is None:
        raise ValueError(f"not a machine state: {statement!r}")
    return m["prog"], decode_numeral(m["r1"]), decode_numeral(m["r2"])


@dataclass(frozen=True)
class Verdict:
    ok: bool
    final: str
    state: Tuple[int, int]
    expected: Tuple[int, int]
    session: tp.Session


def verify(p: BridgeProgram, r1: int, r2: int, max_steps: Optional[int] = pl.DEFAULT_MAX_STEPS) -> Verdict:
    """Generate, check and decode; compare against the vector evaluator."""
    plan = generate_proof(p, r1, r2, max_steps)
    sess = tp.check_script(plan.script())
    final = sess.theorems[plan.final.name].statement
    prog, a, c = decode_state(final)
    expected = _pad2(pl.eval_vector((r1, r2), raise_program(p), max_steps))
    ok = prog == "NIL" and (a, c) == expected and final == plan.final.statement
    return Verdict(ok, final, (a, c), expected, sess)


def verify_bridge(p: BridgeProgram, r1: int, r2: int, max_steps: Optional[int] = pl.DEFAULT_MAX_STEPS) -> bool:
    return verify(p, r1, r2, max_steps).ok
