"""Command-line driver: ``cdkernel {check,normalize,translate,extract,selftest}``.

Exit codes: 0 success, 1 type or shape error, 2 parse error, 3 fuel exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, TextIO

from .extraction import ExtractionError
from .parser import Definition, ParseError, SourceFile, format_source, parse
from .printer import show
from .reducer import DEFAULT_FUEL, Trace, normalize
from .selftest import extract_for, run_selftest
from .syntax import Exists, Forall, Or, format_path, proof_free_vars
from .translator import DummyCache, translate
from .typechecker import Mode, TypingError, check

EXIT_OK, EXIT_TYPE, EXIT_PARSE, EXIT_FUEL = 0, 1, 2, 3
FUEL_ENV = "CDKERNEL_MAX_FUEL"


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def effective_fuel(requested: Optional[int]) -> int:
    """The requested fuel, capped by ``$CDKERNEL_MAX_FUEL`` when set."""
    fuel = requested if requested is not None else DEFAULT_FUEL
    cap = os.environ.get(FUEL_ENV)
    if cap:
        try:
            fuel = min(fuel, int(cap))
        except ValueError:
            raise CommandError(f"{FUEL_ENV} must be an integer, got {cap!r}", EXIT_PARSE)
    if fuel < 1:
        raise CommandError("fuel must be positive", EXIT_PARSE)
    return fuel


def load(path: str) -> SourceFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CommandError(f"{path}: {e.strerror}", EXIT_PARSE)
    try:
        return parse(text)
    except ParseError as e:
        raise CommandError(f"{path}:{e}", EXIT_PARSE)


def typecheck(src: SourceFile, d: Definition) -> None:
    check(src.hypotheses, d.term, d.formula, src.mode, src.signature)


def _checked(src: SourceFile, command: str) -> list[Definition]:
    """Selected definitions, after making sure they type-check."""
    defs = src.selected(command)
    for d in defs:
        try:
            typecheck(src, d)
        except TypingError as e:
            raise CommandError(f"{d.name}: {e}", EXIT_TYPE)
    return defs


# -- commands ---------------------------------------------------------------


def run_check(args, out: TextIO) -> int:
    src = load(args.file)
    code = EXIT_OK
    named = {n for c, n in src.directives if c == "check"}
    for d in src.definitions:
        if named and d.name not in named:
            continue
        try:
            typecheck(src, d)
        except TypingError as e:
            if d.expect_error is e.kind:
                print(f"rejected {d.name}: {e.kind.value} (expected)", file=out)
            else:
                print(f"error {d.name}: {e}", file=out)
                code = EXIT_TYPE
            continue
        if d.expect_error is not None:
            print(f"error {d.name}: expected {d.expect_error.value}, but it type-checks", file=out)
            code = EXIT_TYPE
        else:
            print(f"ok {d.name} : {show(d.formula)}", file=out)
    return code


def trace_record(d: Definition, trace: Trace) -> dict:
    return {
        "name": d.name,
        "type": show(d.formula),
        "initial": show(trace.initial),
        "steps": [{"step": i, "rule": s.rule.value, "path": format_path(s.path), "term": show(s.after)}
                  for i, s in enumerate(trace.steps, 1)],
        "normal": trace.normal,
        "fuel_exhausted": trace.fuel_exhausted,
        "result": show(trace.final),
    }


def run_normalize(args, out: TextIO) -> int:
    fuel = effective_fuel(args.fuel)
    src = load(args.file)
    defs = _checked(src, "normalize")
    traces = [(d, normalize(d.term, fuel)) for d in defs]
    exhausted = any(t.fuel_exhausted for _, t in traces)
    if args.json:
        doc = {"file": args.file, "mode": src.mode.value, "fuel": fuel,
               "definitions": [trace_record(d, t) for d, t in traces]}
        print(json.dumps(doc, indent=2, ensure_ascii=False), file=out)
        return EXIT_FUEL if exhausted else EXIT_OK
    for d, trace in traces:
        status = "normal" if trace.normal else "fuel exhausted"
        print(f"{d.name}: {len(trace.steps)} step(s), {status}", file=out)
        if args.trace:
            for line, s in zip(trace.lines(), trace.steps):
                print(f"  {line}", file=out)
                if args.terms:
                    print(f"    {show(s.after)}", file=out)
        print(f"  = {show(trace.final)}", file=out)
    return EXIT_FUEL if exhausted else EXIT_OK


def run_translate(args, out: TextIO) -> int:
    src = load(args.file)
    if src.mode is not Mode.CD:
        raise CommandError(f"{args.file}: translation expects a cd file", EXIT_TYPE)
    defs = _checked(src, "translate")
    cache = DummyCache()
    image = SourceFile(Mode.IL_BOT, src.signature, dict(src.hypotheses))
    for d in defs:
        t = translate(d.term, cache)
        try:
            check(src.hypotheses, t, d.formula, Mode.IL_BOT, src.signature)
        except TypingError as e:
            raise CommandError(f"{d.name}: translation does not type-check: {e}", EXIT_TYPE)
        image.definitions.append(Definition(d.name, d.formula, t))
    text = format_source(image)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def run_extract(args, out: TextIO) -> int:
    fuel = effective_fuel(args.fuel)
    src = load(args.file)
    if src.mode is not Mode.CD:
        raise CommandError(f"{args.file}: extraction expects a cd file", EXIT_TYPE)
    code = EXIT_OK
    for d in _checked(src, "extract"):
        if not isinstance(d.formula, (Exists, Or, Forall)):
            print(f"{d.name}: skipped, nothing to extract from {show(d.formula)}",
                  file=out)
            continue
        if proof_free_vars(d.term):
            print(f"{d.name}: skipped, open term", file=out)
            continue
        trace = normalize(d.term, fuel)
        if trace.fuel_exhausted:
            print(f"{d.name}: fuel exhausted", file=out)
            code = max(code, EXIT_FUEL)
            continue
        try:
            found = extract_for(trace.final, d.formula)
        except ExtractionError as e:
            print(f"{d.name}: {e}", file=out)
            code = max(code, EXIT_TYPE)
            continue
        if isinstance(d.formula, Exists):
            m, u = found
            print(f"{d.name}: witness {show(m)}", file=out)
            print(f"  proof {show(u)}", file=out)
        elif isinstance(d.formula, Or):
            side, u = found
            print(f"{d.name}: {'left' if side == 0 else 'right'} disjunct", file=out)
            print(f"  proof {show(u)}", file=out)
        else:
            var, u = found
            print(f"{d.name}: for all {var}", file=out)
            print(f"  proof {show(u)}", file=out)
    return code


def run_selftest_command(args, out: TextIO) -> int:
    fuel = effective_fuel(args.fuel)
    directory = Path(args.directory)
    if not directory.is_dir():
        raise CommandError(f"{directory}: not a directory", EXIT_PARSE)
    try:
        results = run_selftest(directory, args.random, args.seed, fuel)
    except ParseError as e:
        raise CommandError(str(e), EXIT_PARSE)
    for r in results:
        print(r.line(), file=out)
        for failure in r.failures[1:] if args.verbose else ():
            print(f"  {failure}", file=out)
    ok = all(r.passed for r in results)
    print("selftest passed" if ok else "selftest failed", file=out)
    return EXIT_OK if ok else EXIT_TYPE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdkernel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="type-check every definition in a file")
    c.add_argument("file")
    c.set_defaults(run=run_check)

    n = sub.add_parser("normalize", help="normalize definitions leftmost-outermost")
    n.add_argument("file")
    n.add_argument("--fuel", type=int, default=None, help=f"step budget (default {DEFAULT_FUEL})")
    n.add_argument("--trace", action="store_true", help="print one line per step")
    n.add_argument("--terms", action="store_true", help="with --trace, print the term after each step")
    n.add_argument("--json", action="store_true", help="machine-readable output")
    n.set_defaults(run=run_normalize)

    t = sub.add_parser("translate", help="translate a cd file into il-bot")
    t.add_argument("file")
    t.add_argument("-o", "--output", help="write here instead of stdout")
    t.set_defaults(run=run_translate)

    e = sub.add_parser("extract", help="normalize then extract witnesses, disjuncts, bodies")
    e.add_argument("file")
    e.add_argument("--fuel", type=int, default=None)
    e.set_defaults(run=run_extract)

    s = sub.add_parser("selftest", help="run the invariant suite over a corpus directory")
    s.add_argument("directory")
    s.add_argument("--random", type=int, default=100, help="also check N generated terms")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--fuel", type=int, default=None)
    s.add_argument("-v", "--verbose", action="store_true", help="list every failure")
    s.set_defaults(run=run_selftest_command)
    return p


def main(argv: Optional[list[str]] = None, out: TextIO = sys.stdout,
         err: TextIO = sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except CommandError as e:
        print(f"cdkernel: {e}", file=err)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
