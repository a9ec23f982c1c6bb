"""Command-line front end: ``tfsparse check|parse|chart|derive|oracle-compare``."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .chart import (
    Guards,
    derivation_lines,
    extract_derivation,
    quotient_collisions,
    run,
)
from .errors import TfsError, UnknownWord
from .fmt import load_grammar
from .grammar import in_language, validate_grammar

EXIT_ACCEPT, EXIT_REJECT, EXIT_GUARD, EXIT_UNKNOWN_WORD = 0, 1, 2, 3
EXIT_CODES = {"accept": EXIT_ACCEPT, "reject": EXIT_REJECT, "guard": EXIT_GUARD}

_COLORS = {"error": "31", "warning": "33", "note": "36"}


def _diag(severity: str, message: str) -> None:
    label = severity + ":"
    if os.environ.get("TFS_COLOR") == "1":
        label = f"\x1b[{_COLORS.get(severity, '0')}m{label}\x1b[0m"
    print(f"{label} {message}", file=sys.stderr)


def _load(path: str):
    try:
        return load_grammar(path)
    except OSError as e:
        _diag("error", f"{path}: {e.strerror or e}")
    except TfsError as e:
        _diag("error", f"{path}: {e}")
    return None


def cmd_check(args) -> int:
    g = _load(args.grammar)
    if g is None:
        return 1
    diags = validate_grammar(g)
    for d in diags:
        _diag(d.severity, f"{args.grammar}: {d.locus}: {d.message}")
    if any(d.severity == "error" for d in diags):
        return 1
    print(f"ok: {len(g.sig.types)} types, {len(g.rules)} rules, {len(g.lexicon)} words")
    return 0


def _sentences(args) -> tuple[list[list[str]], bool]:
    if args.words:
        return [" ".join(args.words).split()], False
    lines = [line.split() for line in sys.stdin]
    return [words for words in lines if words], True


def cmd_parse(args) -> int:
    g = _load(args.grammar)
    if g is None:
        return 1
    guards = Guards(args.max_transitions, args.max_items, args.quotient_depth)
    sentences, batch = _sentences(args)
    worst = 0
    for words in sentences:
        text = " ".join(words)
        verbose = args.dump_chart or args.derivation
        if batch and verbose:
            print(f"SENTENCE {text}")
        try:
            result = run(g, words, guards)
        except UnknownWord as e:
            _diag("error", f"unknown word {e.word!r}")
            worst = max(worst, EXIT_UNKNOWN_WORD)
            continue
        if args.dump_chart:
            sys.stdout.write(result.dump())
        elif batch:
            print(f"{result.status}\t{text}")
        else:
            print(result.status)
        if result.status == "guard":
            _diag("note", f"guard {result.guard} tripped after {result.transitions} transitions")
        for c in quotient_collisions(result.chart, guards.quotient_depth):
            _diag(
                "note",
                f"depth-{guards.quotient_depth} quotient: {c.count} incomparable item pairs share "
                f"a signature at i={c.i} j={c.j} rule={c.rule} dot={c.dot}",
            )
        if args.derivation and result.accepting:
            for line in derivation_lines(extract_derivation(result.chart, result.accepting[0])):
                print(line)
        worst = max(worst, EXIT_CODES[result.status])
    return worst


def cmd_oracle_compare(args) -> int:
    g = _load(args.grammar)
    if g is None:
        return 1
    guards = Guards(args.max_transitions, args.max_items, args.quotient_depth)
    disagreements = 0
    code = 0
    for sentence in args.sentences:
        words = sentence.split()
        if not words:
            continue
        try:
            parser = run(g, words, guards).status
            oracle = in_language(g, words, args.oracle_budget).status
        except UnknownWord as e:
            _diag("error", f"unknown word {e.word!r}")
            code = EXIT_UNKNOWN_WORD
            continue
        if oracle == "budget" or parser == "guard":
            agree = "-"
        elif (parser == "accept") == (oracle == "yes"):
            agree = "1"
        else:
            agree = "0"
            disagreements += 1
        print(f"{sentence}\tparser={parser}\toracle={oracle}\tagree={agree}")
    if disagreements:
        return 1
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tfsparse", description="Typed feature structure chart parser.")
    sub = p.add_subparsers(dest="command", required=True)

    def limits(sp):
        sp.add_argument("--max-transitions", type=int, default=64, metavar="N")
        sp.add_argument("--max-items", type=int, default=100_000, metavar="N")
        sp.add_argument("--quotient-depth", type=int, default=3, metavar="D")

    c = sub.add_parser("check", help="validate a grammar file")
    c.add_argument("grammar")
    c.set_defaults(func=cmd_check)

    for name, extra, helptext in (
        ("parse", {}, "parse one sentence (or stdin, one per line)"),
        ("chart", {"dump_chart": True}, "parse and dump the final chart"),
        ("derive", {"derivation": True}, "parse and print a leftmost derivation"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("grammar")
        sp.add_argument("words", nargs="*")
        limits(sp)
        sp.add_argument("--dump-chart", action="store_true")
        sp.add_argument("--derivation", action="store_true")
        sp.set_defaults(func=cmd_parse, **extra)

    o = sub.add_parser("oracle-compare", help="compare parser and bounded oracle verdicts")
    o.add_argument("grammar")
    o.add_argument("sentences", nargs="*")
    o.add_argument("--oracle-budget", type=int, default=10, metavar="STEPS")
    limits(o)
    o.set_defaults(func=cmd_oracle_compare)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:
        _diag("error", str(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
