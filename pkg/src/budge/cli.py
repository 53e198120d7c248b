"""Batch front end: ``budge run|check|bridge|pseudo|stdlib``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from budge import bridge, pl, tp
from budge.godel import canonical, decode, encode

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_CHECK = 2
EXIT_BUDGET = 3
EXIT_SCOPE = 4


def _registers(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"registers must be comma-separated naturals: {text!r}")
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("register values must be >= 0")
    return canonical(values)


def _godel(text: str) -> int:
    if not text.isdigit() or int(text) < 1:
        raise argparse.ArgumentTypeError(f"Gödel number must be a positive decimal integer: {text!r}")
    return int(text)


def _max_steps(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("--max-steps must be >= 1")
    return n


def _load_program(path: str) -> pl.Sequence:
    return pl.parse_program(Path(path).read_text(encoding="utf-8"), allow_empty=True)


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_run(args) -> int:
    try:
        prog = _load_program(args.program)
    except pl.PlSyntaxError as e:
        _err(f"{args.program}:{e}")
        return EXIT_SYNTAX
    state = decode(args.godel) if args.godel is not None else args.registers
    engine = "both" if args.paranoid else args.engine
    trace: Optional[list] = None if args.trace == "off" else []
    try:
        if engine == "godel":
            final = decode(pl.eval_godel(encode(state), prog, args.max_steps, trace))
        else:
            final = pl.eval_vector(state, prog, args.max_steps, trace)
            if engine == "both":
                other = decode(pl.eval_godel(encode(state), prog, args.max_steps))
                if other != final:
                    _err(f"engines disagree: vector {list(final)}, godel {list(other)}")
                    return EXIT_CHECK
    except pl.NonTerminationError as e:
        if trace:
            _emit_trace(args.trace, trace)
        _err(f"{e}; the program may not terminate (raise --max-steps)")
        return EXIT_BUDGET
    if trace is not None:
        _emit_trace(args.trace, trace)
    print(pl.format_registers(final, pl.max_register(prog)))
    print(f"godel={encode(final)}")
    return EXIT_OK


def _emit_trace(mode: str, trace: list) -> None:
    if mode == "json":
        for rec in pl.trace_records(trace):
            print(rec)
    elif trace:
        print(pl.format_trace(trace))


def cmd_check(args) -> int:
    text = Path(args.script).read_text(encoding="utf-8")
    try:
        sess = tp.check_script(text)
    except tp.TpSyntaxError as e:
        _err(f"{args.script}: {e}")
        return EXIT_SYNTAX
    except tp.CheckError as e:
        _err(f"{args.script}: {e}")
        if e.line is not None:
            _err(f"  {text.splitlines()[e.line - 1].strip()}")
        return EXIT_CHECK
    sys.stdout.write(sess.listing(include_terms=args.all))
    return EXIT_OK


def cmd_bridge(args) -> int:
    try:
        prog = bridge.lower_program(_load_program(args.program))
    except pl.PlSyntaxError as e:
        _err(f"{args.program}:{e}")
        return EXIT_SYNTAX
    except bridge.BridgeScopeError as e:
        _err(f"{args.program}: {e}")
        return EXIT_SCOPE
    try:
        plan = bridge.generate_proof(prog, args.r1, args.r2, args.max_steps)
    except pl.NonTerminationError as e:
        _err(f"{e}; no script written")
        return EXIT_BUDGET
    script = plan.script()
    if args.out:
        out = Path(args.out)
        out.write_text(script, encoding="utf-8")
        out.with_suffix(".jsonl").write_text(plan.jsonl(), encoding="utf-8")
    try:
        verdict = bridge.verify(prog, args.r1, args.r2, args.max_steps)
    except tp.TpError as e:
        _err(f"generated proof rejected: {e}")
        return EXIT_CHECK
    print(f"final : {verdict.final}")
    print(f"state : ({verdict.state[0]} {verdict.state[1]})")
    if not verdict.ok:
        print(f"verdict : mismatch (evaluator gives ({verdict.expected[0]} {verdict.expected[1]}))")
        return EXIT_CHECK
    print("verdict : ok")
    return EXIT_OK


def cmd_pseudo(args) -> int:
    try:
        prog = _load_program(args.program)
    except pl.PlSyntaxError as e:
        _err(f"{args.program}:{e}")
        return EXIT_SYNTAX
    text = pl.pseudocode(prog)
    if text:
        print(text)
    return EXIT_OK


def cmd_stdlib(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    for name, seq in pl.stdlib().items():
        path = out / f"{name}.bpl"
        path.write_text(pl.print_program(seq) + "\n", encoding="utf-8")
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="budge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a .bpl program")
    run.add_argument("program")
    start = run.add_mutually_exclusive_group()
    start.add_argument("--registers", type=_registers, default=(), metavar="A,B,...")
    start.add_argument("--godel", type=_godel, metavar="N")
    run.add_argument("--engine", choices=("vector", "godel", "both"), default="vector")
    run.add_argument("--paranoid", action="store_true", help="same as --engine both")
    run.add_argument("--max-steps", type=_max_steps, default=pl.DEFAULT_MAX_STEPS)
    run.add_argument("--trace", choices=("off", "text", "json"), default="off")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="check a .btp script and list its theorems")
    check.add_argument("script")
    check.add_argument("--all", action="store_true", help="also list term theorems")
    check.set_defaults(func=cmd_check)

    br = sub.add_parser("bridge", help="prove a two-register run inside the theorem prover")
    br.add_argument("program")
    br.add_argument("r1", type=int, nargs="?", default=0)
    br.add_argument("r2", type=int, nargs="?", default=0)
    br.add_argument("--out", metavar="PATH")
    br.add_argument("--max-steps", type=_max_steps, default=pl.DEFAULT_MAX_STEPS)
    br.set_defaults(func=cmd_bridge)

    ps = sub.add_parser("pseudo", help="print a program as pseudo-code")
    ps.add_argument("program")
    ps.set_defaults(func=cmd_pseudo)

    std = sub.add_parser("stdlib", help="write add/sub/mul/div as .bpl files")
    std.add_argument("--out", metavar="DIR")
    std.set_defaults(func=cmd_stdlib)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "r1", 0) < 0 or getattr(args, "r2", 0) < 0:
        _err("register values must be >= 0")
        return EXIT_SYNTAX
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
