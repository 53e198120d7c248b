"""Budge-TP: a proof checker built from string substitution and equality.

Script lines are either rule declarations::

    r2 : |- Mx -> |- Mxx

or theorem applications::

    thMII : r2 x=tmI! thMI

A line's kind is given by its first letter (``r`` or ``t``), which stays part
of the name.  Single lowercase ASCII letters in rule expressions are
variables.  Applying a rule binds variables to earlier theorems, substitutes
them into every hypothesis and every argument, and requires each pair to be
identical; the substituted conclusion becomes the new theorem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple, Union

# Theorems whose names start with these are term constructions, not results.
TERM_PREFIXES = ("tm", "tTm")


class TpError(Exception):
    """Base class for script errors; ``line`` is set when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self):
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class TpSyntaxError(TpError):
    pass


class CheckError(TpError):
    pass


class UnknownRuleError(CheckError):
    pass


class UnknownTheoremError(CheckError):
    pass


class ArityMismatchError(CheckError):
    pass


class DuplicateNameError(CheckError):
    pass


class HypothesisMismatchError(CheckError):
    def __init__(self, index: int, expected: str, actual: str, line: Optional[int] = None):
        super().__init__(
            f"hypothesis {index + 1} does not match: expected {expected!r}, got {actual!r}",
            line,
        )
        self.index = index
        self.expected = expected
        self.actual = actual


@dataclass(frozen=True)
class Rule:
    name: str
    parts: Tuple[str, ...]

    @property
    def hypotheses(self) -> Tuple[str, ...]:
        return self.parts[:-1]

    @property
    def conclusion(self) -> str:
        return self.parts[-1]

    @property
    def arity(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class Theorem:
    name: str
    statement: str


@dataclass(frozen=True)
class RuleDecl:
    rule: Rule
    line: Optional[int] = None


@dataclass(frozen=True)
class TheoremDecl:
    name: str
    rule: str
    bindings: Tuple[Tuple[str, str], ...] = ()
    args: Tuple[str, ...] = ()
    line: Optional[int] = None


Statement = Union[RuleDecl, TheoremDecl]


@dataclass
class Session:
    rules: Dict[str, Rule] = field(default_factory=dict)
    theorems: Dict[str, Theorem] = field(default_factory=dict)

    def copy(self) -> "Session":
        return Session(dict(self.rules), dict(self.theorems))

    def listing(self, include_terms: bool = False) -> str:
        """``name : statement`` per theorem, in declaration order."""
        return "".join(
            f"{t.name} : {t.statement}\n"
            for t in self.theorems.values()
            if include_terms or not t.name.startswith(TERM_PREFIXES)
        )


# -- parsing ---------------------------------------------------------------


def _is_variable(ch: str) -> bool:
    return "a" <= ch <= "z"


def _split_head(text: str, lineno: int) -> Tuple[str, str]:
    stripped = text.strip()
    first = stripped.split(None, 1)[0]
    if first.endswith(":"):
        name, rest = first[:-1], stripped[len(first):]
    elif ":" in first:
        raise TpSyntaxError(f"name {first!r} contains ':'", lineno)
    else:
        name, rest = first, stripped[len(first):].lstrip()
        if not rest.startswith(":"):
            raise TpSyntaxError(f"missing ':' after name {name!r}", lineno)
        rest = rest[1:]
    if not name:
        raise TpSyntaxError("missing statement name", lineno)
    if ":" in name:
        raise TpSyntaxError(f"name {name!r} contains ':'", lineno)
    return name, rest


def parse_line(text: str, lineno: Optional[int] = None) -> Optional[Statement]:
    stripped = text.strip()
    if not stripped or stripped.startswith("#"):
        return None
    name, rest = _split_head(stripped, lineno)
    if name[0] == "r":
        parts = tuple(p.strip() for p in rest.split("->"))
        for k, p in enumerate(parts):
            if not p:
                raise TpSyntaxError(f"empty expression {k + 1} in rule {name!r}", lineno)
        return RuleDecl(Rule(name, parts), lineno)
    if name[0] == "t":
        tokens = rest.split()
        if not tokens:
            raise TpSyntaxError(f"theorem {name!r} names no rule", lineno)
        rule, tokens = tokens[0], tokens[1:]
        bindings: List[Tuple[str, str]] = []
        if tokens and "=" in tokens[0]:
            block, tokens = tokens[0], tokens[1:]
            for item in block.split(";"):
                var, eq, value = item.partition("=")
                if not eq or len(var) != 1 or not _is_variable(var) or not value or "=" in value:
                    raise TpSyntaxError(f"bad substitution {item!r}", lineno)
                if any(var == v for v, _ in bindings):
                    raise TpSyntaxError(f"variable {var!r} bound twice", lineno)
                bindings.append((var, value))
        for tok in tokens:
            if "=" in tok:
                raise TpSyntaxError(f"unexpected substitution {tok!r} among arguments", lineno)
        return TheoremDecl(name, rule, tuple(bindings), tuple(tokens), lineno)
    raise TpSyntaxError(
        f"statement name {name!r} must start with 'r' (rule) or 't' (theorem)", lineno
    )


def parse_script(text: str) -> List[Statement]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        st = parse_line(line, lineno)
        if st is not None:
            out.append(st)
    return out


# -- checking --------------------------------------------------------------


def substitute(expr: str, values: Mapping[str, str]) -> str:
    """Replace every bound variable character in one pass.

    Inserted text is never rescanned, so a value containing a bound letter
    is left alone.
    """
    if not values:
        return expr
    return "".join(values.get(ch, ch) if _is_variable(ch) else ch for ch in expr)


def _theorem(sess: Session, name: str, line: Optional[int]) -> Theorem:
    thm = sess.theorems.get(name)
    if thm is None:
        if name in sess.rules:
            raise UnknownTheoremError(f"{name!r} is a rule, not a theorem", line)
        raise UnknownTheoremError(f"unknown theorem {name!r}", line)
    return thm


def _apply(sess: Session, st: Statement) -> None:
    if isinstance(st, RuleDecl):
        name = st.rule.name
        if name in sess.rules or name in sess.theorems:
            raise DuplicateNameError(f"{name!r} is already declared", st.line)
        sess.rules[name] = st.rule
        return

    if st.name in sess.rules or st.name in sess.theorems:
        raise DuplicateNameError(f"{st.name!r} is already declared", st.line)
    rule = sess.rules.get(st.rule)
    if rule is None:
        if st.rule in sess.theorems:
            raise UnknownRuleError(f"{st.rule!r} is a theorem, not a rule", st.line)
        raise UnknownRuleError(f"unknown rule {st.rule!r}", st.line)
    values = {v: _theorem(sess, t, st.line).statement for v, t in st.bindings}
    args = [_theorem(sess, a, st.line).statement for a in st.args]
    if len(args) != rule.arity - 1:
        raise ArityMismatchError(
            f"rule {rule.name!r} takes {rule.arity - 1} argument(s), got {len(args)}",
            st.line,
        )
    for k, (hyp, arg) in enumerate(zip(rule.hypotheses, args)):
        expected = substitute(hyp, values)
        actual = substitute(arg, values)
        if expected != actual:
            raise HypothesisMismatchError(k, expected, actual, st.line)
    sess.theorems[st.name] = Theorem(st.name, substitute(rule.conclusion, values))


def check_statement(sess: Session, st: Statement) -> Session:
    """Return a new session extended by ``st``; ``sess`` is left untouched."""
    out = sess.copy()
    _apply(out, st)
    return out


def check_script(text: str) -> Session:
    sess = Session()
    for st in parse_script(text):
        _apply(sess, st)
    return sess
